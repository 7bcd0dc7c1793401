"""Numerical substrate: exact L2 neighbors, Gaussian KDE, two discriminators.

Everything here is deliberately brute-force and order-deterministic. Squared
distances accumulate dimension by dimension so results are bit-identical to a
scalar per-coordinate loop; k-NN ties break by ascending point id; training
is plain seeded minibatch gradient descent. Exactness and reproducibility
beat asymptotics at audit scale.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from sklearn.ensemble import RandomForestClassifier

from .core import RandomSeed

BANDWIDTH_FLOOR = 1e-6


def _as_matrix(points) -> np.ndarray:
    values = getattr(points, "values", points)
    arr = np.ascontiguousarray(values, dtype=np.float64)
    if arr.ndim != 2:
        raise ValueError("expected a 2-D point matrix")
    if arr.shape[0] < 1:
        raise ValueError("point set is empty")
    if not np.all(np.isfinite(arr)):
        raise ValueError("point matrix contains non-finite entries")
    return arr


def _sq_dist_matrix(queries: np.ndarray, points: np.ndarray) -> np.ndarray:
    """Squared L2 distances, accumulated one dimension at a time.

    The per-element operation order matches ``for j: acc += (p_j - q_j)**2``
    exactly, so results are reproducible bit for bit across vectorized and
    scalar evaluation.
    """
    acc = np.zeros((queries.shape[0], points.shape[0]))
    for j in range(points.shape[1]):
        diff = queries[:, j, None] - points[None, :, j]
        acc += diff * diff
    return acc


class NeighborIndex:
    """Exact L2 nearest-neighbor queries over a fixed point set.

    Accepts a raw float matrix or an :class:`~tabmia.preprocess.EncodedMatrix`.
    """

    def __init__(self, points):
        self.points = _as_matrix(points)
        self.n, self.dim = self.points.shape

    def _sq_dists(self, queries) -> np.ndarray:
        q = np.atleast_2d(np.asarray(queries, dtype=np.float64))
        if q.shape[1] != self.dim:
            raise ValueError(f"query dimension {q.shape[1]} != index dimension {self.dim}")
        return _sq_dist_matrix(q, self.points)

    def knn(self, query, k: int) -> tuple[np.ndarray, np.ndarray]:
        """The k nearest points to one query, ties broken by ascending id.

        Returns:
            (ids, distances), both length k, distances ascending.
        """
        ids, dists = self.knn_batch(np.atleast_2d(np.asarray(query, dtype=np.float64)), k)
        return ids[0], dists[0]

    def knn_batch(self, queries, k: int) -> tuple[np.ndarray, np.ndarray]:
        if not (1 <= k <= self.n):
            raise ValueError(f"k must be in [1, {self.n}], got {k}")
        sq = self._sq_dists(queries)
        order = np.argsort(sq, axis=1, kind="stable")[:, :k]
        dists = np.sqrt(np.take_along_axis(sq, order, axis=1))
        return order, dists

    def nn_distance(self, query) -> float:
        return float(self.nn_distance_batch(np.atleast_2d(np.asarray(query, dtype=np.float64)))[0])

    def nn_distance_batch(self, queries) -> np.ndarray:
        sq = self._sq_dists(queries)
        return np.sqrt(sq.min(axis=1))

    def radius_count(self, query, r: float) -> int:
        return int(self.radius_count_batch(np.atleast_2d(np.asarray(query, dtype=np.float64)), r)[0])

    def radius_count_batch(self, queries, r: float) -> np.ndarray:
        """Per query, the number of points with distance ≤ r (inclusive)."""
        if r < 0:
            raise ValueError("radius must be non-negative")
        dists = np.sqrt(self._sq_dists(queries))
        return (dists <= r).sum(axis=1)


def scott_bandwidth(points) -> float:
    """Scott's rule for an isotropic Gaussian KDE: h = σ̄ · n^(−1/(m+4)).

    σ̄ is the mean per-dimension (population) standard deviation; the result
    is floored at 1e−6 so constant or duplicated data still yields a usable
    bandwidth.

    Raises:
        ValueError: fewer than 2 points.
    """
    pts = _as_matrix(points)
    n, m = pts.shape
    if n < 2:
        raise ValueError("Scott bandwidth needs at least 2 points")
    sigma = float(np.mean(np.std(pts, axis=0)))
    h = sigma * n ** (-1.0 / (m + 4))
    return max(h, BANDWIDTH_FLOOR)


@dataclass(frozen=True, eq=False)
class KdeModel:
    """Isotropic Gaussian kernel density estimate over fixed support points."""

    support: np.ndarray
    bandwidth: float

    def __post_init__(self):
        support = _as_matrix(self.support)
        if not (self.bandwidth > 0):
            raise ValueError("bandwidth must be positive")
        object.__setattr__(self, "support", support)

    @property
    def log_norm(self) -> float:
        n, m = self.support.shape
        return -math.log(n) - 0.5 * m * math.log(2 * math.pi) - m * math.log(self.bandwidth)

    def logpdf(self, query) -> float:
        return float(self.logpdf_batch(np.atleast_2d(np.asarray(query, dtype=np.float64)))[0])

    def logpdf_batch(self, queries) -> np.ndarray:
        """Log-density via log-sum-exp; always finite for finite queries."""
        q = np.atleast_2d(np.asarray(queries, dtype=np.float64))
        if q.shape[1] != self.support.shape[1]:
            raise ValueError(
                f"query dimension {q.shape[1]} != support dimension {self.support.shape[1]}"
            )
        z = -_sq_dist_matrix(q, self.support) / (2.0 * self.bandwidth**2)
        peak = z.max(axis=1)
        lse = peak + np.log(np.exp(z - peak[:, None]).sum(axis=1))
        return lse + self.log_norm


def fit_kde(points, bandwidth: float | None = None) -> KdeModel:
    """Fit a KDE on support points; bandwidth defaults to Scott's rule."""
    pts = _as_matrix(points)
    if bandwidth is None:
        bandwidth = scott_bandwidth(pts)
    return KdeModel(support=pts, bandwidth=bandwidth)


def kde_logpdf(model: KdeModel, query):
    """Log-density of one query vector (or a batch of rows) under the model."""
    q = np.asarray(query, dtype=np.float64)
    if q.ndim == 1:
        return model.logpdf(q)
    return model.logpdf_batch(q)


# ---------------------------------------------------------------------------
# Discriminators
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MlpConfig:
    hidden_dim: int = 256
    learning_rate: float = 1e-3
    batch_size: int = 256
    epochs: int = 200

    def __post_init__(self):
        if self.hidden_dim < 1 or self.batch_size < 1 or self.epochs < 0:
            raise ValueError("hidden_dim/batch_size must be ≥ 1 and epochs ≥ 0")
        if not (0.0 < self.learning_rate < math.inf):
            raise ValueError("learning_rate must be positive and finite")


@dataclass(frozen=True)
class ForestConfig:
    n_trees: int = 100
    max_depth: int = 8

    def __post_init__(self):
        if self.n_trees < 1 or self.max_depth < 1:
            raise ValueError("n_trees and max_depth must be ≥ 1")


def _sigmoid(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def mlp_init_params(dim: int, hidden_dim: int, rng: np.random.Generator) -> dict:
    """Uniform fan-in-scaled init (weights and biases in ±1/√fan_in).

    Non-zero bias init matters here: encoded features live in [0,1], and an
    all-zero input must still activate some hidden units or no gradient can
    ever reach them through the ReLU.
    """
    a = 1.0 / math.sqrt(dim)
    b = 1.0 / math.sqrt(hidden_dim)
    return {
        "W1": rng.uniform(-a, a, size=(dim, hidden_dim)),
        "b1": rng.uniform(-a, a, size=hidden_dim),
        "w2": rng.uniform(-b, b, size=hidden_dim),
        "b2": float(rng.uniform(-b, b)),
    }


def mlp_loss_and_gradients(params: dict, X: np.ndarray, y: np.ndarray) -> tuple[float, dict]:
    """Mean binary cross-entropy and its analytic gradients.

    The forward pass is X → ReLU(X·W1 + b1) → sigmoid(a1·w2 + b2); the loss
    uses the logits directly (log1p form) so it is stable for any magnitude.
    Exposed at module level so tests can check the gradients against central
    finite differences.
    """
    z1 = X @ params["W1"] + params["b1"]
    a1 = np.maximum(z1, 0.0)
    z2 = a1 @ params["w2"] + params["b2"]
    # BCE with logits: max(z,0) − z·y + log(1 + exp(−|z|))
    loss = float(np.mean(np.maximum(z2, 0.0) - z2 * y + np.log1p(np.exp(-np.abs(z2)))))
    n = X.shape[0]
    dz2 = (_sigmoid(z2) - y) / n
    grads = {
        "w2": a1.T @ dz2,
        "b2": float(dz2.sum()),
        "W1": None,
        "b1": None,
    }
    dz1 = np.outer(dz2, params["w2"]) * (z1 > 0.0)
    grads["W1"] = X.T @ dz1
    grads["b1"] = dz1.sum(axis=0)
    return loss, grads


class MlpDiscriminator:
    """1-hidden-layer ReLU MLP trained with seeded minibatch gradient descent."""

    kind = "mlp"

    def __init__(self, config: MlpConfig | None = None):
        self.config = config or MlpConfig()
        self.params: dict | None = None

    def fit(self, X: np.ndarray, y: np.ndarray, seed: RandomSeed) -> "MlpDiscriminator":
        X = np.ascontiguousarray(X, dtype=np.float64)
        y = np.asarray(y, dtype=np.float64)
        rng = seed.generator()
        cfg = self.config
        params = mlp_init_params(X.shape[1], cfg.hidden_dim, rng)
        n = X.shape[0]
        for _ in range(cfg.epochs):
            perm = rng.permutation(n)
            for start in range(0, n, cfg.batch_size):
                idx = perm[start : start + cfg.batch_size]
                _, grads = mlp_loss_and_gradients(params, X[idx], y[idx])
                # the learning rate applies per example: the mean-normalized
                # gradient is rescaled by the batch row count, so each row
                # contributes the same step mass regardless of batch fill
                scale = cfg.learning_rate * len(idx)
                params["W1"] = params["W1"] - scale * grads["W1"]
                params["b1"] = params["b1"] - scale * grads["b1"]
                params["w2"] = params["w2"] - scale * grads["w2"]
                params["b2"] = params["b2"] - scale * grads["b2"]
        self.params = params
        return self

    def score(self, X) -> np.ndarray:
        if self.params is None:
            raise RuntimeError("discriminator not fitted")
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        z1 = X @ self.params["W1"] + self.params["b1"]
        a1 = np.maximum(z1, 0.0)
        return _sigmoid(a1 @ self.params["w2"] + self.params["b2"])


class ForestDiscriminator:
    """Random forest (100 trees, depth 8, Gini, bootstrap, √m features).

    Scores are leaf class fractions averaged over trees, i.e. the standard
    predicted probability of the positive class.
    """

    kind = "forest"

    def __init__(self, config: ForestConfig | None = None):
        self.config = config or ForestConfig()
        self._clf: RandomForestClassifier | None = None

    def fit(self, X: np.ndarray, y: np.ndarray, seed: RandomSeed) -> "ForestDiscriminator":
        cfg = self.config
        clf = RandomForestClassifier(
            n_estimators=cfg.n_trees,
            max_depth=cfg.max_depth,
            criterion="gini",
            max_features="sqrt",
            bootstrap=True,
            n_jobs=1,
            random_state=int(seed.value % (2**32)),
        )
        clf.fit(np.asarray(X, dtype=np.float64), np.asarray(y, dtype=np.int64))
        self._clf = clf
        return self

    def score(self, X) -> np.ndarray:
        if self._clf is None:
            raise RuntimeError("discriminator not fitted")
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        proba = self._clf.predict_proba(X)
        pos = int(np.flatnonzero(self._clf.classes_ == 1)[0])
        return proba[:, pos]


def train_discriminator(
    kind: str,
    positives,
    negatives,
    seed: RandomSeed,
    config: MlpConfig | ForestConfig | None = None,
):
    """Fit a binary discriminator on positives (label 1) vs negatives (label 0).

    Args:
        kind: ``"mlp"`` or ``"forest"``.
        positives: matrix (or EncodedMatrix) of positive-class rows, ≥ 2.
        negatives: same for the negative class.
        seed: training seed; fixed seed → bit-identical scores.
        config: optional :class:`MlpConfig` / :class:`ForestConfig` override.
    """
    pos = _as_matrix(positives)
    neg = _as_matrix(negatives)
    if pos.shape[0] < 2 or neg.shape[0] < 2:
        raise ValueError("each discriminator class needs at least 2 rows")
    if pos.shape[1] != neg.shape[1]:
        raise ValueError("positive and negative classes have different widths")
    X = np.vstack([pos, neg])
    y = np.concatenate([np.ones(pos.shape[0]), np.zeros(neg.shape[0])])
    if kind == "mlp":
        model = MlpDiscriminator(config)
    elif kind == "forest":
        model = ForestDiscriminator(config)
    else:
        raise ValueError(f"unknown discriminator kind {kind!r}")
    return model.fit(X, y, seed)


def discriminator_score(model, queries) -> np.ndarray:
    """Probability of the positive class, one value in [0,1] per query row."""
    return model.score(queries)
