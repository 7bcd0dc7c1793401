"""The membership-inference attack suite.

Every attack maps (targets, S[, R]) — all in encoded space — to one real
score per target, higher = more member-like. Thresholding happens later, in
evaluation; attacks never emit decisions.

Threat models: no-box attacks read only the synthetic table S; calibrated
attacks additionally read a reference table R drawn from the population.

Families:

====================  ==========  ========  =====================================
family                calibrated  encoding  score
====================  ==========  ========  =====================================
dcr                   no          onehot    −min_{s∈S} d(x, s)
dcr_diff              yes         onehot    min_{r∈R} d(x, r) − min_{s∈S} d(x, s)
density               no          ordinal   log p̂_S(x)  (KDE)
domias                yes         ordinal   log p̂_S(x) − log p̂_R(x)
dpi                   yes         onehot    (c_S + ½)/(c_R + ½) over k-NN in S∪R
gen_lra               yes         ordinal   Σ_{s∈S_k(x)} log p̂_{R∪{x}}(s)/p̂_R(s)
local_neighborhood    no          onehot    |{s∈S : d(x, s) ≤ radius}|
logan                 yes         onehot    MLP discriminator P(synthetic | x)
classifier            yes         onehot    forest discriminator P(synthetic | x)
mc                    no          onehot    (1/|S|)·|{s∈S : d(x, s) ≤ ε}|
====================  ==========  ========  =====================================
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import AttackResult, EvalSet, Quadruple, RandomSeed
from .estimators import (
    ForestConfig,
    KdeModel,
    MlpConfig,
    NeighborIndex,
    fit_kde,
    scott_bandwidth,
    train_discriminator,
)

FAMILIES = (
    "dcr",
    "dcr_diff",
    "density",
    "domias",
    "dpi",
    "gen_lra",
    "local_neighborhood",
    "logan",
    "classifier",
    "mc",
)
CALIBRATED_FAMILIES = frozenset(
    {"dcr_diff", "domias", "dpi", "gen_lra", "logan", "classifier"}
)
ORDINAL_FAMILIES = frozenset({"density", "domias", "gen_lra"})

DEFAULT_K_GRID = (1, 5, 10, 25, 50, 100)
DEFAULT_RADIUS = 1.0

_ALLOWED_HYPERPARAMS = {
    "dcr": frozenset(),
    "dcr_diff": frozenset(),
    "density": frozenset(),
    "domias": frozenset(),
    "dpi": frozenset({"k"}),
    "gen_lra": frozenset({"k", "refit_bandwidth"}),
    "local_neighborhood": frozenset({"radius"}),
    "logan": frozenset({"epochs", "hidden_dim", "learning_rate", "batch_size"}),
    "classifier": frozenset({"trees", "max_depth"}),
    "mc": frozenset(),
}


@dataclass(frozen=True)
class AttackSpec:
    """One attack instance: a family plus its hyperparameter point.

    ``requires_reference`` and ``encoding`` are derived from the family, not
    free choices. The instance id appends grid-varying hyperparameters to the
    family name ("dpi_k25", "local_neighborhood_r1"); families without a grid
    use the bare name.
    """

    family: str
    hyperparams: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown attack family {self.family!r}")
        params = dict(self.hyperparams)
        unknown = set(params) - _ALLOWED_HYPERPARAMS[self.family]
        if unknown:
            raise ValueError(
                f"hyperparameters {sorted(unknown)} not valid for family {self.family!r}"
            )
        if "k" in params and (not isinstance(params["k"], int) or params["k"] < 1):
            raise ValueError("k must be a positive integer")
        if "radius" in params and not (params["radius"] > 0):
            raise ValueError("radius must be positive")
        object.__setattr__(self, "hyperparams", params)

    @property
    def requires_reference(self) -> bool:
        return self.family in CALIBRATED_FAMILIES

    @property
    def encoding(self) -> str:
        return "ordinal" if self.family in ORDINAL_FAMILIES else "onehot"

    @property
    def instance_id(self) -> str:
        parts = [self.family]
        if "k" in self.hyperparams:
            parts.append(f"k{self.hyperparams['k']}")
        if "radius" in self.hyperparams:
            parts.append(f"r{self.hyperparams['radius']:g}")
        return "_".join(parts)

    def to_json_dict(self) -> dict:
        return {"family": self.family, **self.hyperparams}

    @classmethod
    def from_json_dict(cls, obj: dict) -> "AttackSpec":
        params = {k: v for k, v in obj.items() if k != "family"}
        return cls(family=obj["family"], hyperparams=params)


# ---------------------------------------------------------------------------
# Score functions (encoded-space matrices in, one score per target out)
# ---------------------------------------------------------------------------


def dcr_scores(targets: np.ndarray, synth: np.ndarray) -> np.ndarray:
    """Negated distance to the closest synthetic record; 0 is maximal."""
    return -NeighborIndex(synth).nn_distance_batch(targets)


def dcr_diff_scores(
    targets: np.ndarray, synth: np.ndarray, reference: np.ndarray
) -> np.ndarray:
    """Reference-calibrated DCR: nearer to S than to R ⇒ positive score."""
    d_ref = NeighborIndex(reference).nn_distance_batch(targets)
    d_syn = NeighborIndex(synth).nn_distance_batch(targets)
    return d_ref - d_syn


def density_scores(targets: np.ndarray, synth: np.ndarray) -> np.ndarray:
    """KDE log-density of the target under S (rank-equivalent to the density)."""
    if synth.shape[0] < 2:
        raise ValueError("density attack needs |S| >= 2")
    return fit_kde(synth).logpdf_batch(targets)


def domias_scores(
    targets: np.ndarray, synth: np.ndarray, reference: np.ndarray
) -> np.ndarray:
    """Log density ratio log p̂_S(x) − log p̂_R(x)."""
    if synth.shape[0] < 2 or reference.shape[0] < 2:
        raise ValueError("domias needs |S| >= 2 and |R| >= 2")
    return fit_kde(synth).logpdf_batch(targets) - fit_kde(reference).logpdf_batch(targets)


def dpi_scores(
    targets: np.ndarray, synth: np.ndarray, reference: np.ndarray, k: int
) -> np.ndarray:
    """Synthetic-vs-reference composition of the k-neighborhood in S∪R.

    Score = (c_S + ½)/(c_R + ½), strictly increasing in the synthetic count
    c_S, so ranks equal those of the raw counts; the ½ smoothing keeps scores
    finite. Exact distance ties prefer synthetic rows (lower point ids in the
    tagged union).
    """
    union = np.vstack([synth, reference])
    if k > union.shape[0]:
        raise ValueError(f"k={k} exceeds |S|+|R|={union.shape[0]}")
    ids, _ = NeighborIndex(union).knn_batch(targets, k)
    c_s = (ids < synth.shape[0]).sum(axis=1)
    return (c_s + 0.5) / (k - c_s + 0.5)


def gen_lra_scores(
    targets: np.ndarray,
    synth: np.ndarray,
    reference: np.ndarray,
    k: int,
    refit_bandwidth: bool = True,
) -> np.ndarray:
    """Likelihood-ratio influence of the target on nearby synthetic points.

    For each target x, take its k nearest synthetic points S_k and sum the
    log-likelihood gain Σ log p̂_{R∪{x}}(s) − log p̂_R(s). Computed fully in
    log space (density products underflow); the augmented KDE's bandwidth is
    refit on R∪{x} by default.
    """
    if reference.shape[0] < 2:
        raise ValueError("gen_lra needs |R| >= 2")
    if k > synth.shape[0]:
        raise ValueError(f"k={k} exceeds |S|={synth.shape[0]}")
    kde_ref = fit_kde(reference)
    base = kde_ref.logpdf_batch(synth)
    neighbor_ids, _ = NeighborIndex(synth).knn_batch(targets, k)
    scores = np.empty(targets.shape[0])
    for i in range(targets.shape[0]):
        augmented = np.vstack([reference, targets[i : i + 1]])
        h = scott_bandwidth(augmented) if refit_bandwidth else kde_ref.bandwidth
        kde_aug = KdeModel(support=augmented, bandwidth=h)
        sel = neighbor_ids[i]
        scores[i] = float(np.sum(kde_aug.logpdf_batch(synth[sel]) - base[sel]))
    return scores


def local_neighborhood_scores(
    targets: np.ndarray, synth: np.ndarray, radius: float
) -> np.ndarray:
    """Count of synthetic points within the fixed radius of the target."""
    if not (radius > 0):
        raise ValueError("radius must be positive")
    return NeighborIndex(synth).radius_count_batch(targets, radius).astype(np.float64)


def logan_scores(
    targets: np.ndarray,
    synth: np.ndarray,
    reference: np.ndarray,
    seed: RandomSeed,
    config: MlpConfig | None = None,
) -> np.ndarray:
    """MLP-discriminator probability that the target is synthetic."""
    model = train_discriminator("mlp", synth, reference, seed, config)
    return model.score(targets)


def classifier_scores(
    targets: np.ndarray,
    synth: np.ndarray,
    reference: np.ndarray,
    seed: RandomSeed,
    config: ForestConfig | None = None,
) -> np.ndarray:
    """Random-forest probability that the target is synthetic."""
    model = train_discriminator("forest", synth, reference, seed, config)
    return model.score(targets)


def mc_scores(targets: np.ndarray, synth: np.ndarray) -> np.ndarray:
    """Fraction of synthetic points inside an adaptive ε-ball around the target.

    ε is the median leave-one-out nearest-neighbor distance within S (floored
    at 1e−6) — a scale-adaptive, deterministic neighborhood rule.
    """
    if synth.shape[0] < 2:
        raise ValueError("mc needs |S| >= 2")
    index = NeighborIndex(synth)
    # For each s∈S the 2nd-smallest distance (the 1st is s itself at 0, or a
    # duplicate, in which case 0 is the correct leave-one-out distance).
    _, dists = index.knn_batch(synth, 2)
    eps = max(float(np.median(dists[:, 1])), 1e-6)
    return index.radius_count_batch(targets, eps) / synth.shape[0]


# ---------------------------------------------------------------------------
# Dispatcher
# ---------------------------------------------------------------------------


def run_attack(
    spec: AttackSpec,
    quadruple: Quadruple,
    transformers: dict,
    eval_set: EvalSet,
    seed: RandomSeed,
) -> AttackResult:
    """Encode the needed tables and run one attack instance.

    Args:
        spec: the attack instance to run.
        quadruple: validated dataset bundle; reference may be None for no-box
            specs (calibrated specs raise).
        transformers: {"onehot": FittedTransformer, "ordinal": FittedTransformer},
            both fit on the same adversary-visible source.
        eval_set: labeled targets from :func:`~tabmia.core.build_eval_set`.
        seed: per-instance seed (only discriminator attacks consume it).

    Returns:
        An :class:`AttackResult`; ±∞ scores are clamped to ±1e308 by the
        result container.
    """
    if spec.requires_reference and quadruple.reference is None:
        raise ValueError(
            f"attack {spec.instance_id!r} is reference-calibrated but the "
            "quadruple has no reference table"
        )
    transformer = transformers[spec.encoding]
    targets = transformer.transform(eval_set.targets).values
    synth = transformer.transform(quadruple.synthetic).values
    reference = None
    if spec.requires_reference:
        reference = transformer.transform(quadruple.reference).values

    p = spec.hyperparams
    family = spec.family
    if family == "dcr":
        scores = dcr_scores(targets, synth)
    elif family == "dcr_diff":
        scores = dcr_diff_scores(targets, synth, reference)
    elif family == "density":
        scores = density_scores(targets, synth)
    elif family == "domias":
        scores = domias_scores(targets, synth, reference)
    elif family == "dpi":
        scores = dpi_scores(targets, synth, reference, k=p.get("k", DEFAULT_K_GRID[0]))
    elif family == "gen_lra":
        scores = gen_lra_scores(
            targets,
            synth,
            reference,
            k=p.get("k", DEFAULT_K_GRID[0]),
            refit_bandwidth=p.get("refit_bandwidth", True),
        )
    elif family == "local_neighborhood":
        scores = local_neighborhood_scores(
            targets, synth, radius=p.get("radius", DEFAULT_RADIUS)
        )
    elif family == "logan":
        config = (
            MlpConfig(
                hidden_dim=p.get("hidden_dim", MlpConfig.hidden_dim),
                learning_rate=p.get("learning_rate", MlpConfig.learning_rate),
                batch_size=p.get("batch_size", MlpConfig.batch_size),
                epochs=p.get("epochs", MlpConfig.epochs),
            )
            if p
            else None
        )
        scores = logan_scores(targets, synth, reference, seed, config)
    elif family == "classifier":
        config = (
            ForestConfig(
                n_trees=p.get("trees", ForestConfig.n_trees),
                max_depth=p.get("max_depth", ForestConfig.max_depth),
            )
            if p
            else None
        )
        scores = classifier_scores(targets, synth, reference, seed, config)
    elif family == "mc":
        scores = mc_scores(targets, synth)
    else:  # pragma: no cover - guarded by AttackSpec validation
        raise ValueError(f"unknown attack family {family!r}")

    return AttackResult(
        attack_id=spec.instance_id,
        scores=scores,
        labels=eval_set.labels,
        hyperparams=dict(spec.hyperparams),
        seed=seed.value,
    )
