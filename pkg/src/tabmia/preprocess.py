"""Leakage-safe encoding of tables into numeric matrices.

Transformers are fit only on adversary-visible data (the synthetic table by
default, optionally the reference table) and then applied to every table in
the audit. Two modes exist:

* ``onehot`` — min-max scaled numerics + one-hot categorical blocks; the
  general-purpose encoding. Min-max (rather than z-score) keeps fit-source
  rows inside [0,1] per dimension so fixed neighborhood radii are comparable
  across datasets.
* ``ordinal`` — min-max scaled numerics + a single ordinal column per
  categorical (index/(k−1)); used by KDE-backed attacks, where one-hot blocks
  would bloat the dimension and stall density estimation.

Values are never clipped: rows outside the fit-source range transform outside
[0,1], which is signal, not error.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass

import numpy as np

from .core import NUMERIC, DataTable, SchemaMismatchError

ONEHOT = "onehot"
ORDINAL = "ordinal"
_MODES = (ONEHOT, ORDINAL)
FIT_SOURCES = ("synthetic", "reference")


@dataclass(frozen=True, eq=False)
class EncodedMatrix:
    """A finite n × m float matrix plus the digest of the transformer that made it."""

    values: np.ndarray
    transformer_id: str

    def __post_init__(self):
        values = np.ascontiguousarray(self.values, dtype=np.float64)
        if values.ndim != 2:
            raise ValueError("encoded matrix must be two-dimensional")
        if not np.all(np.isfinite(values)):
            raise ValueError("encoded matrix contains non-finite entries")
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    @property
    def n_rows(self) -> int:
        return self.values.shape[0]

    @property
    def width(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True)
class FittedTransformer:
    """Frozen encoding state: per-column bounds/vocabularies plus provenance.

    The state is a pure function of the fit-source table — fitting never sees
    train or holdout rows, and :meth:`transform` never mutates the state, so
    the digest doubles as an anti-leakage witness.
    """

    mode: str
    fit_source: str
    names: tuple[str, ...]
    kinds: tuple[str, ...]
    numeric_bounds: tuple[tuple[float, float] | None, ...]
    vocabularies: tuple[tuple[str, ...] | None, ...]

    def __post_init__(self):
        if self.mode not in _MODES:
            raise ValueError(f"unknown transformer mode {self.mode!r}")
        if self.fit_source not in FIT_SOURCES:
            raise ValueError(f"fit_source must be one of {FIT_SOURCES}")
        for name, bounds in zip(self.names, self.numeric_bounds):
            if bounds is not None and not (bounds[0] <= bounds[1]):
                raise ValueError(f"column {name!r} has inverted bounds {bounds}")

    @property
    def output_dim(self) -> int:
        return sum(self._column_widths())

    def _column_widths(self) -> list[int]:
        widths = []
        for kind, vocab in zip(self.kinds, self.vocabularies):
            if kind == NUMERIC:
                widths.append(1)
            else:
                widths.append(len(vocab) if self.mode == ONEHOT else 1)
        return widths

    def to_json_dict(self) -> dict:
        return {
            "mode": self.mode,
            "fit_source": self.fit_source,
            "columns": [
                {
                    "name": name,
                    "kind": kind,
                    **(
                        {"min": format(b[0], ".17g"), "max": format(b[1], ".17g")}
                        if b is not None
                        else {"categories": list(v)}
                    ),
                }
                for name, kind, b, v in zip(
                    self.names, self.kinds, self.numeric_bounds, self.vocabularies
                )
            ],
        }

    @classmethod
    def from_json_dict(cls, obj: dict) -> "FittedTransformer":
        names, kinds, bounds, vocabs = [], [], [], []
        for entry in obj["columns"]:
            names.append(entry["name"])
            kinds.append(entry["kind"])
            if entry["kind"] == NUMERIC:
                bounds.append((float(entry["min"]), float(entry["max"])))
                vocabs.append(None)
            else:
                bounds.append(None)
                vocabs.append(tuple(entry["categories"]))
        return cls(
            mode=obj["mode"],
            fit_source=obj["fit_source"],
            names=tuple(names),
            kinds=tuple(kinds),
            numeric_bounds=tuple(bounds),
            vocabularies=tuple(vocabs),
        )

    def digest(self) -> str:
        payload = json.dumps(self.to_json_dict(), separators=(",", ":")).encode("utf-8")
        return hashlib.blake2b(payload, digest_size=8).hexdigest()

    def transform(self, data: DataTable) -> EncodedMatrix:
        """Encode a table; see :func:`transform`."""
        return transform(self, data)


def fit_transformer(
    data: DataTable, mode: str, fit_source: str = "synthetic"
) -> FittedTransformer:
    """Fit an encoder on one adversary-visible table.

    Numeric columns get min-max bounds from the data; a constant column's
    bounds are widened to (v−0.5, v+0.5) so its values map to exactly 0.5.
    Categorical columns take the schema vocabulary when one is declared, else
    the observed values in first-appearance order.

    Args:
        data: the fit-source table (synthetic or reference — never train or
            holdout).
        mode: ``"onehot"`` or ``"ordinal"``.
        fit_source: provenance tag recording which audit role was fit on.
    """
    bounds: list[tuple[float, float] | None] = []
    vocabs: list[tuple[str, ...] | None] = []
    for col, values in zip(data.schema.columns, data.columns):
        if col.kind == NUMERIC:
            lo = float(values.min())
            hi = float(values.max())
            if lo == hi:
                lo, hi = lo - 0.5, hi + 0.5
            bounds.append((lo, hi))
            vocabs.append(None)
        else:
            bounds.append(None)
            if col.categories is not None:
                vocabs.append(col.categories)
            else:
                vocabs.append(tuple(dict.fromkeys(values)))
    return FittedTransformer(
        mode=mode,
        fit_source=fit_source,
        names=data.schema.names,
        kinds=data.schema.kinds,
        numeric_bounds=tuple(bounds),
        vocabularies=tuple(vocabs),
    )


def transform(t: FittedTransformer, data: DataTable) -> EncodedMatrix:
    """Encode a table under a fitted transformer.

    Numeric: (v − min)/(max − min), unclipped. Categorical one-hot: indicator
    block, unseen category → all zeros. Categorical ordinal: index/(k−1)
    (0.5 when k=1); unseen category → 1 + 1/k, strictly outside the seen
    range so novel values land far from everything observed.

    Raises:
        SchemaMismatchError: data column names/kinds differ from the
            transformer's fitting schema.
    """
    if data.schema.names != t.names or data.schema.kinds != t.kinds:
        raise SchemaMismatchError(
            "table schema does not match the transformer's fitting schema"
        )
    n = data.n_rows
    blocks: list[np.ndarray] = []
    for j, (kind, values) in enumerate(zip(t.kinds, data.columns)):
        if kind == NUMERIC:
            lo, hi = t.numeric_bounds[j]
            blocks.append(((values - lo) / (hi - lo)).reshape(n, 1))
            continue
        vocab = t.vocabularies[j]
        index = {c: i for i, c in enumerate(vocab)}
        k = len(vocab)
        if t.mode == ONEHOT:
            block = np.zeros((n, k))
            for i, v in enumerate(values):
                pos = index.get(v)
                if pos is not None:
                    block[i, pos] = 1.0
            blocks.append(block)
        else:
            unseen = 1.0 + 1.0 / k
            if k == 1:
                encoded = [0.5 if v in index else unseen for v in values]
            else:
                encoded = [
                    index[v] / (k - 1) if v in index else unseen for v in values
                ]
            blocks.append(np.array(encoded, dtype=np.float64).reshape(n, 1))
    return EncodedMatrix(values=np.hstack(blocks), transformer_id=t.digest())
