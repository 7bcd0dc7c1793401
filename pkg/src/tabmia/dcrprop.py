"""DCR-Prop: a non-adversarial distance-based similarity metric.

For each synthetic row, compare its nearest-neighbor distance to the train
set against its nearest-neighbor distance to the reference set (both in
encoded space). Synthetic data that is systematically closer to train than
to reference suggests the generator copied training structure.

This is a similarity diagnostic, not an attack: it scores the synthetic
table as a whole and carries no membership labels. Its correlation with
actual attack-measured leakage is weak — which is precisely why worst-case
attack audits exist — so both orientation conventions are reported
explicitly rather than assuming one reading.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import DataTable, SchemaMismatchError
from .estimators import NeighborIndex
from .preprocess import FittedTransformer

CONVENTION = (
    "proportion = (n_closer_to_reference + n_ties/2) / n_synthetic; "
    "0.5 = balanced, higher = more private, lower = closer to train"
)


@dataclass(frozen=True)
class DcrPropResult:
    """Share of synthetic rows nearer to reference than to train (ties ½)."""

    proportion: float
    proportion_train_oriented: float
    n_closer_to_train: int
    n_closer_to_reference: int
    n_ties: int

    def __post_init__(self):
        total = self.n_closer_to_train + self.n_closer_to_reference + self.n_ties
        if total < 1:
            raise ValueError("counts must cover at least one synthetic row")
        if not (0.0 <= self.proportion <= 1.0):
            raise ValueError("proportion must lie in [0, 1]")

    @property
    def n_synthetic(self) -> int:
        return self.n_closer_to_train + self.n_closer_to_reference + self.n_ties

    def to_json_dict(self) -> dict:
        return {
            "proportion": self.proportion,
            "proportion_train_oriented": self.proportion_train_oriented,
            "n_closer_to_train": self.n_closer_to_train,
            "n_closer_to_reference": self.n_closer_to_reference,
            "n_ties": self.n_ties,
            "convention": CONVENTION,
        }


def dcr_prop(
    train: DataTable,
    reference: DataTable,
    synthetic: DataTable,
    transformer: FittedTransformer,
) -> DcrPropResult:
    """Compute DCR-Prop over a (train, reference, synthetic) triple.

    Exact distance ties get ½ credit, so swapping train and reference maps
    the proportion p to exactly 1 − p.

    Raises:
        SchemaMismatchError: table schemas differ from the transformer's.
    """
    if not train.schema.compatible(reference.schema) or not train.schema.compatible(
        synthetic.schema
    ):
        raise SchemaMismatchError("train, reference, and synthetic schemas must match")
    synth = transformer.transform(synthetic).values
    d_train = NeighborIndex(transformer.transform(train).values).nn_distance_batch(synth)
    d_reference = NeighborIndex(transformer.transform(reference).values).nn_distance_batch(
        synth
    )
    n_train_side = int((d_train < d_reference).sum())
    n_reference_side = int((d_reference < d_train).sum())
    n_ties = synth.shape[0] - n_train_side - n_reference_side
    proportion = (n_reference_side + 0.5 * n_ties) / synth.shape[0]
    return DcrPropResult(
        proportion=proportion,
        proportion_train_oriented=1.0 - proportion,
        n_closer_to_train=n_train_side,
        n_closer_to_reference=n_reference_side,
        n_ties=n_ties,
    )
