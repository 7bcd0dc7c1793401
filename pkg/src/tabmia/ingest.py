"""CSV and schema I/O, content fingerprints, and the real-data split protocol.

CSV conventions: RFC-4180-style files, UTF-8, header row required, quoted
fields supported. Numeric cells are serialized with 17 significant digits so
float64 values round-trip exactly. Missing values (empty cells) are a hard
error — no scoring function downstream defines NaN behavior, so imputation
or silent dropping would falsify audit results.
"""

from __future__ import annotations

import csv
import hashlib
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from .core import (
    CATEGORICAL,
    NUMERIC,
    Column,
    DataTable,
    RandomSeed,
    TableSchema,
)


class IngestError(ValueError):
    """Raised for malformed input files; messages carry (row, column) coordinates."""


@dataclass(frozen=True)
class SplitSpec:
    """Protocol for partitioning real data into train/holdout/reference.

    ``test_fraction`` of the rows (ceiling) become the test pool, which is
    split as evenly as possible into holdout and reference (sizes differ by
    at most one; holdout gets the extra row). The fraction is interpreted as
    the decimal literal written by the caller, so ``0.2`` of 100 rows is
    exactly 20 regardless of binary-float representation.
    """

    test_fraction: float = 0.2
    seed: RandomSeed = RandomSeed(0)

    def __post_init__(self):
        if not (0.0 < self.test_fraction < 1.0):
            raise ValueError("test_fraction must lie strictly between 0 and 1")


def _parse_float(token: str) -> float | None:
    try:
        v = float(token)
    except ValueError:
        return None
    return v if math.isfinite(v) else None


def read_table(path: str | Path, schema: TableSchema | None = None) -> DataTable:
    """Read a CSV file into a :class:`DataTable`.

    With ``schema`` given, the header must match the schema's column names in
    order and cells are parsed against the declared kinds. Without it, a
    column is inferred numeric iff every cell parses as a finite real;
    otherwise it is categorical, with the vocabulary recorded from observed
    values in first-appearance order.

    Raises:
        IngestError: empty file, header mismatch, ragged row, empty cell, or
            unparsable numeric cell — messages name the data row (1-based)
            and column.
    """
    path = Path(path)
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise IngestError(f"{path}: empty file (header row required)") from None
        raw_rows = list(reader)
    if not raw_rows:
        raise IngestError(f"{path}: no data rows")
    if schema is not None and tuple(header) != schema.names:
        raise IngestError(
            f"{path}: header {header!r} does not match schema columns {list(schema.names)!r}"
        )
    d = len(header)
    for i, row in enumerate(raw_rows):
        if len(row) != d:
            raise IngestError(f"{path}: row {i + 1} has {len(row)} cells, expected {d}")
        for j, cell in enumerate(row):
            if cell == "":
                raise IngestError(f"{path}: missing value at row {i + 1}, column {header[j]!r}")

    columns: list[np.ndarray] = []
    out_cols: list[Column] = []
    for j, name in enumerate(header):
        tokens = [row[j] for row in raw_rows]
        if schema is not None:
            col = schema.columns[j]
            if col.kind == NUMERIC:
                values = np.empty(len(tokens), dtype=np.float64)
                for i, tok in enumerate(tokens):
                    v = _parse_float(tok)
                    if v is None:
                        raise IngestError(
                            f"{path}: cell {tok!r} at row {i + 1}, column {name!r} "
                            "is not a finite number"
                        )
                    values[i] = v
                columns.append(values)
            else:
                columns.append(np.array(tokens, dtype=object))
            out_cols.append(col)
        else:
            parsed = [_parse_float(tok) for tok in tokens]
            if all(v is not None for v in parsed):
                columns.append(np.array(parsed, dtype=np.float64))
                out_cols.append(Column(name, NUMERIC))
            else:
                columns.append(np.array(tokens, dtype=object))
                vocab = tuple(dict.fromkeys(tokens))
                out_cols.append(Column(name, CATEGORICAL, categories=vocab))
    return DataTable(TableSchema(tuple(out_cols)), tuple(columns))


def _format_cell(kind: str, value) -> str:
    if kind == NUMERIC:
        return format(float(value), ".17g")
    return str(value)


def write_table(table: DataTable, path: str | Path) -> None:
    """Write a table as CSV (header + rows, numeric cells at 17 significant digits)."""
    path = Path(path)
    kinds = table.schema.kinds
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(table.schema.names)
        for i in range(table.n_rows):
            writer.writerow(
                [_format_cell(kinds[j], col[i]) for j, col in enumerate(table.columns)]
            )


def read_schema(path: str | Path) -> TableSchema:
    """Load a sidecar schema JSON document."""
    with open(path, encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise IngestError(f"{path}: malformed schema JSON ({exc})") from None
    try:
        return TableSchema.from_json_dict(obj)
    except (ValueError, KeyError, TypeError) as exc:
        raise IngestError(f"{path}: invalid schema document ({exc})") from None


def write_schema(schema: TableSchema, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(schema.to_json_dict(), fh, indent=2)
        fh.write("\n")


def fingerprint(table: DataTable) -> int:
    """Order-sensitive 64-bit content hash of schema plus cells.

    Identical tables hash identically; any row permutation or single-cell
    change produces a different digest (up to 64-bit collisions).
    """
    h = hashlib.blake2b(digest_size=8)
    h.update(json.dumps(table.schema.to_json_dict(), separators=(",", ":")).encode("utf-8"))
    kinds = table.schema.kinds
    for i in range(table.n_rows):
        h.update(b"\x1e")
        for j, col in enumerate(table.columns):
            h.update(b"\x1f")
            h.update(_format_cell(kinds[j], col[i]).encode("utf-8"))
    return int.from_bytes(h.digest(), "little")


def split_real(data: DataTable, spec: SplitSpec) -> tuple[DataTable, DataTable, DataTable]:
    """Partition real data into (train, holdout, reference) under a seeded shuffle.

    Sizes: test = ⌈test_fraction·n⌉ rows, train = n − test; the test pool is
    split into holdout = ⌈test/2⌉ and reference = test − holdout. Partitions
    are disjoint by row index and cover the input.

    Raises:
        IngestError: n < 10, or any partition would be empty.
    """
    n = data.n_rows
    if n < 10:
        raise IngestError(f"need at least 10 rows to split, got {n}")
    n_test = math.ceil(Fraction(str(spec.test_fraction)) * n)
    n_train = n - n_test
    n_holdout = (n_test + 1) // 2
    n_reference = n_test - n_holdout
    if min(n_train, n_holdout, n_reference) < 1:
        raise IngestError(
            f"split of {n} rows at test_fraction={spec.test_fraction} leaves an "
            f"empty partition (train={n_train}, holdout={n_holdout}, reference={n_reference})"
        )
    perm = spec.seed.child("split").generator().permutation(n)
    train = data.take(perm[:n_train])
    holdout = data.take(perm[n_train : n_train + n_holdout])
    reference = data.take(perm[n_train + n_holdout :])
    return train, holdout, reference
