"""Core data model: schemas, tables, seeds, eval sets, attack results.

Everything downstream (ingest, preprocessing, attacks, evaluation) is built
on the small set of immutable value types defined here.
"""

from __future__ import annotations

import hashlib
import warnings
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

NUMERIC = "numeric"
CATEGORICAL = "categorical"
_KINDS = (NUMERIC, CATEGORICAL)


class SchemaMismatchError(ValueError):
    """Raised when tables that must share a schema do not."""


@dataclass(frozen=True)
class Column:
    """One column of a tabular schema.

    Args:
        name: column name, unique within its schema.
        kind: ``"numeric"`` or ``"categorical"``.
        categories: optional fixed vocabulary for a categorical column, in
            encoding order. ``None`` means the vocabulary is taken from data
            when an encoder is fit.
    """

    name: str
    kind: str
    categories: tuple[str, ...] | None = None

    def __post_init__(self):
        if not isinstance(self.name, str) or not self.name:
            raise ValueError("column name must be a non-empty string")
        if self.kind not in _KINDS:
            raise ValueError(f"unknown column kind {self.kind!r}")
        if self.kind == NUMERIC and self.categories is not None:
            raise ValueError(f"numeric column {self.name!r} cannot carry categories")
        if self.categories is not None:
            cats = tuple(self.categories)
            if not cats:
                raise ValueError(f"column {self.name!r} has an empty vocabulary")
            if len(set(cats)) != len(cats):
                raise ValueError(f"column {self.name!r} has duplicate categories")
            object.__setattr__(self, "categories", cats)


@dataclass(frozen=True)
class TableSchema:
    """An ordered collection of uniquely named columns."""

    columns: tuple[Column, ...]

    def __post_init__(self):
        cols = tuple(self.columns)
        if not cols:
            raise ValueError("schema needs at least one column")
        names = [c.name for c in cols]
        if len(set(names)) != len(names):
            raise ValueError("duplicate column names in schema")
        object.__setattr__(self, "columns", cols)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(c.name for c in self.columns)

    @property
    def kinds(self) -> tuple[str, ...]:
        return tuple(c.kind for c in self.columns)

    def __len__(self) -> int:
        return len(self.columns)

    def compatible(self, other: "TableSchema") -> bool:
        """True when column names and kinds match in order.

        Explicit categorical vocabularies are deliberately not compared:
        tables read from separate files may record different observed
        vocabularies for the same logical column, and encoders always take
        their vocabulary from the fit source alone.
        """
        return self.names == other.names and self.kinds == other.kinds

    def to_json_dict(self) -> dict:
        cols = []
        for c in self.columns:
            entry: dict = {"name": c.name, "kind": c.kind}
            if c.categories is not None:
                entry["categories"] = list(c.categories)
            cols.append(entry)
        return {"columns": cols}

    @classmethod
    def from_json_dict(cls, obj: dict) -> "TableSchema":
        try:
            raw = obj["columns"]
        except (TypeError, KeyError):
            raise ValueError("schema document must be an object with a 'columns' list")
        cols = []
        for entry in raw:
            cats = entry.get("categories")
            cols.append(
                Column(
                    name=entry["name"],
                    kind=entry["kind"],
                    categories=tuple(cats) if cats is not None else None,
                )
            )
        return cls(columns=tuple(cols))


def _as_column_array(col: Column, values: np.ndarray | Sequence) -> np.ndarray:
    if col.kind == NUMERIC:
        arr = np.asarray(values, dtype=np.float64)
        if arr.ndim != 1:
            raise ValueError(f"column {col.name!r} must be one-dimensional")
        if not np.all(np.isfinite(arr)):
            bad = int(np.flatnonzero(~np.isfinite(arr))[0])
            raise ValueError(
                f"non-finite value in numeric column {col.name!r} at row {bad + 1}"
            )
        return arr
    arr = np.empty(len(values), dtype=object)
    for i, v in enumerate(values):
        if not isinstance(v, str):
            raise ValueError(
                f"categorical column {col.name!r} holds a non-string cell at row {i + 1}"
            )
        arr[i] = v
    return arr


@dataclass(frozen=True, eq=False)
class DataTable:
    """Immutable column-major table conforming to a :class:`TableSchema`.

    Numeric columns are float64 arrays (finite values only); categorical
    columns are object arrays of ``str``.
    """

    schema: TableSchema
    columns: tuple[np.ndarray, ...]

    def __post_init__(self):
        if len(self.columns) != len(self.schema):
            raise ValueError("column count does not match schema")
        lengths = {len(c) for c in self.columns}
        if len(lengths) != 1:
            raise ValueError("columns have inconsistent lengths")
        n = lengths.pop()
        if n < 1:
            raise ValueError("table needs at least one row")
        frozen = []
        for col, arr in zip(self.schema.columns, self.columns):
            arr = _as_column_array(col, arr)
            arr.flags.writeable = False
            frozen.append(arr)
        object.__setattr__(self, "columns", tuple(frozen))

    @classmethod
    def from_rows(cls, schema: TableSchema, rows: Iterable[Sequence]) -> "DataTable":
        rows = list(rows)
        if not rows:
            raise ValueError("table needs at least one row")
        d = len(schema)
        for i, row in enumerate(rows):
            if len(row) != d:
                raise ValueError(f"row {i + 1} has {len(row)} cells, expected {d}")
        cols = tuple(
            np.asarray([row[j] for row in rows], dtype=object) for j in range(d)
        )
        return cls(schema=schema, columns=cols)

    @property
    def n_rows(self) -> int:
        return len(self.columns[0])

    @property
    def n_columns(self) -> int:
        return len(self.schema)

    def row(self, i: int) -> tuple:
        return tuple(col[i] for col in self.columns)

    def to_rows(self) -> list[tuple]:
        return [self.row(i) for i in range(self.n_rows)]

    def take(self, indices: Sequence[int] | np.ndarray) -> "DataTable":
        idx = np.asarray(indices, dtype=np.intp)
        if idx.size < 1:
            raise ValueError("cannot build an empty table")
        return DataTable(self.schema, tuple(col[idx] for col in self.columns))

    @classmethod
    def concat(cls, tables: Sequence["DataTable"]) -> "DataTable":
        if not tables:
            raise ValueError("need at least one table")
        head = tables[0]
        for t in tables[1:]:
            if not head.schema.compatible(t.schema):
                raise SchemaMismatchError("cannot concatenate tables with differing schemas")
        cols = tuple(
            np.concatenate([t.columns[j] for t in tables])
            for j in range(len(head.schema))
        )
        return cls(head.schema, cols)


@dataclass(frozen=True)
class RandomSeed:
    """A 64-bit seed with stable, tag-derived child streams.

    Child seeds depend only on ``(value, tag)``, never on how many other
    children were derived or in what order — the backbone of run-order- and
    worker-count-independent determinism.
    """

    value: int

    def __post_init__(self):
        if not isinstance(self.value, int) or not (0 <= self.value < 2**64):
            raise ValueError("seed must be an integer in [0, 2**64)")

    def child(self, tag: str) -> "RandomSeed":
        h = hashlib.blake2b(
            self.value.to_bytes(8, "little") + tag.encode("utf-8"), digest_size=8
        )
        return RandomSeed(int.from_bytes(h.digest(), "little"))

    def generator(self) -> np.random.Generator:
        return np.random.default_rng(self.value)


@dataclass(frozen=True)
class Quadruple:
    """A validated (train, holdout, synthetic, reference) dataset bundle."""

    train: DataTable
    holdout: DataTable
    synthetic: DataTable
    reference: DataTable | None = None

    @property
    def calibrated(self) -> bool:
        return self.reference is not None


def validate_quadruple(
    train: DataTable,
    holdout: DataTable,
    synthetic: DataTable,
    reference: DataTable | None = None,
) -> Quadruple:
    """Check cross-table schema compatibility and return a :class:`Quadruple`.

    Emits a warning when train and holdout share identical rows, which
    usually signals a broken split upstream.

    Raises:
        SchemaMismatchError: if any table's schema differs from train's.
    """
    tables = {"holdout": holdout, "synthetic": synthetic}
    if reference is not None:
        tables["reference"] = reference
    for name, t in tables.items():
        if not train.schema.compatible(t.schema):
            raise SchemaMismatchError(
                f"{name} schema does not match train schema "
                f"(names/kinds must agree in order)"
            )
    train_rows = set(map(tuple, train.to_rows()))
    overlap = sum(1 for r in holdout.to_rows() if tuple(r) in train_rows)
    if overlap:
        warnings.warn(
            f"train and holdout share {overlap} identical row(s); "
            "membership labels may be contaminated",
            stacklevel=2,
        )
    return Quadruple(train=train, holdout=holdout, synthetic=synthetic, reference=reference)


@dataclass(frozen=True, eq=False)
class EvalSet:
    """Attack targets with ground-truth membership labels (1=member)."""

    targets: DataTable
    labels: np.ndarray

    def __post_init__(self):
        labels = np.asarray(self.labels, dtype=np.int64)
        if labels.shape != (self.targets.n_rows,):
            raise ValueError("labels must be one per target row")
        if not np.isin(labels, (0, 1)).all():
            raise ValueError("labels must be 0 or 1")
        labels.flags.writeable = False
        object.__setattr__(self, "labels", labels)

    @property
    def n_members(self) -> int:
        return int(self.labels.sum())

    @property
    def n_nonmembers(self) -> int:
        return int((1 - self.labels).sum())


def build_eval_set(
    train: DataTable, holdout: DataTable, cap: int, seed: RandomSeed
) -> EvalSet:
    """Assemble the labeled target set an audit attacks.

    Each source is shuffled under its own child stream of ``seed``, then up
    to ``cap`` rows are taken: train rows labeled 1 (members), holdout rows
    labeled 0 (non-members).

    Args:
        train: member source.
        holdout: non-member source, same schema as train.
        cap: per-side row cap, at least 1.
        seed: shuffle seed.

    Returns:
        An :class:`EvalSet` with members first.
    """
    if cap < 1:
        raise ValueError("cap must be at least 1")
    if not train.schema.compatible(holdout.schema):
        raise SchemaMismatchError("train and holdout schemas differ")
    parts = []
    for tag, table in (("eval/train", train), ("eval/holdout", holdout)):
        rng = seed.child(tag).generator()
        perm = rng.permutation(table.n_rows)
        parts.append(table.take(perm[: min(cap, table.n_rows)]))
    n_members, n_nonmembers = parts[0].n_rows, parts[1].n_rows
    labels = np.concatenate(
        [np.ones(n_members, dtype=np.int64), np.zeros(n_nonmembers, dtype=np.int64)]
    )
    return EvalSet(targets=DataTable.concat(parts), labels=labels)


@dataclass(frozen=True, eq=False)
class AttackResult:
    """Raw output of one attack instance: one score per eval target.

    Higher scores mean "more likely a member". Infinities are clamped to
    ±1e308 at construction so every downstream metric stays finite.
    """

    attack_id: str
    scores: np.ndarray
    labels: np.ndarray
    hyperparams: dict = field(default_factory=dict)
    seed: int = 0

    def __post_init__(self):
        scores = np.asarray(self.scores, dtype=np.float64).copy()
        labels = np.asarray(self.labels, dtype=np.int64)
        if scores.ndim != 1 or scores.shape != labels.shape:
            raise ValueError("scores and labels must be 1-D and the same length")
        if scores.size < 1:
            raise ValueError("attack result needs at least one score")
        if np.isnan(scores).any():
            raise ValueError(f"attack {self.attack_id!r} produced NaN scores")
        np.clip(scores, -1e308, 1e308, out=scores)
        if not np.isin(labels, (0, 1)).all():
            raise ValueError("labels must be 0 or 1")
        scores.flags.writeable = False
        labels = labels.copy()
        labels.flags.writeable = False
        object.__setattr__(self, "scores", scores)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "hyperparams", dict(self.hyperparams))

    @property
    def n_members(self) -> int:
        return int(self.labels.sum())

    @property
    def n_nonmembers(self) -> int:
        return int((1 - self.labels).sum())
