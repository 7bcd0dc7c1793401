"""CSV/schema I/O, fingerprints, and the real-data split protocol."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tabmia.core import CATEGORICAL, NUMERIC, Column, DataTable, RandomSeed, TableSchema
from tabmia.ingest import (
    IngestError,
    SplitSpec,
    fingerprint,
    read_schema,
    read_table,
    split_real,
    write_schema,
    write_table,
)

from .conftest import mixed_tables, numeric_table


# ---------------------------------------------------------------------------
# read_table
# ---------------------------------------------------------------------------


def _write(tmp_path, text, name="data.csv"):
    p = tmp_path / name
    p.write_text(text, encoding="utf-8")
    return p


def test_read_numeric_csv(tmp_path):
    p = _write(tmp_path, "a,b\n1,2\n3.5,4\n-1e3,0.25\n")
    t = read_table(p)
    assert t.n_rows == 3
    assert t.schema.kinds == (NUMERIC, NUMERIC)
    assert t.to_rows() == [(1.0, 2.0), (3.5, 4.0), (-1000.0, 0.25)]


def test_mixed_column_becomes_categorical(tmp_path):
    p = _write(tmp_path, "v\n1\n2\nx\n")
    t = read_table(p)
    assert t.schema.kinds == (CATEGORICAL,)
    # vocabulary recorded in first-appearance order
    assert t.schema.columns[0].categories == ("1", "2", "x")


def test_infinite_token_is_not_numeric(tmp_path):
    p = _write(tmp_path, "v\n1\ninf\n")
    t = read_table(p)
    assert t.schema.kinds == (CATEGORICAL,)


def test_empty_cell_names_row_and_column(tmp_path):
    rows = "\n".join(f"{i},{i}" for i in range(1, 5))
    p = _write(tmp_path, f"age,height\n{rows}\n5,\n")
    with pytest.raises(IngestError, match=r"row 5, column 'height'"):
        read_table(p)


def test_ragged_row_error(tmp_path):
    p = _write(tmp_path, "a,b\n1,2\n3\n")
    with pytest.raises(IngestError, match="row 2"):
        read_table(p)


def test_empty_file_and_headerless(tmp_path):
    with pytest.raises(IngestError, match="empty file"):
        read_table(_write(tmp_path, ""))
    with pytest.raises(IngestError, match="no data rows"):
        read_table(_write(tmp_path, "a,b\n"))


def test_schema_enforces_header_and_kinds(tmp_path):
    schema = TableSchema((Column("a", NUMERIC), Column("b", CATEGORICAL)))
    p = _write(tmp_path, "a,b\n1,x\n2,y\n")
    t = read_table(p, schema=schema)
    assert t.schema.kinds == (NUMERIC, CATEGORICAL)
    assert t.to_rows() == [(1.0, "x"), (2.0, "y")]

    with pytest.raises(IngestError, match="does not match schema"):
        read_table(_write(tmp_path, "b,a\n1,2\n", name="swapped.csv"), schema=schema)
    bad = _write(tmp_path, "a,b\n1,x\nz,y\n", name="bad.csv")
    with pytest.raises(IngestError, match=r"row 2, column 'a'"):
        read_table(bad, schema=schema)


def test_quoted_fields_round_trip(tmp_path):
    schema = TableSchema((Column("c", CATEGORICAL),))
    t = DataTable.from_rows(schema, [('with, comma',), ('with "quote"',)])
    p = tmp_path / "q.csv"
    write_table(t, p)
    assert read_table(p, schema=schema).to_rows() == t.to_rows()


# ---------------------------------------------------------------------------
# write_table round trips
# ---------------------------------------------------------------------------


def test_numeric_round_trip_is_exact(tmp_path):
    values = [0.1, 1 / 3, 1e-300, 1.7976931348e308, -0.0, 12345.678901234567]
    t = numeric_table([(v,) for v in values])
    p = tmp_path / "vals.csv"
    write_table(t, p)
    back = read_table(p, schema=t.schema)
    assert back.to_rows() == t.to_rows()


@given(mixed_tables())
@settings(max_examples=30, deadline=None)
def test_any_table_round_trips(tmp_path_factory, table):
    p = tmp_path_factory.mktemp("rt") / "t.csv"
    write_table(table, p)
    back = read_table(p, schema=table.schema)
    assert back.to_rows() == table.to_rows()


# ---------------------------------------------------------------------------
# schema sidecar
# ---------------------------------------------------------------------------


def test_schema_file_round_trip(tmp_path):
    schema = TableSchema(
        (Column("x", NUMERIC), Column("c", CATEGORICAL, categories=("a", "b")))
    )
    p = tmp_path / "schema.json"
    write_schema(schema, p)
    assert read_schema(p) == schema


def test_schema_file_errors(tmp_path):
    p = _write(tmp_path, "{not json", name="schema.json")
    with pytest.raises(IngestError, match="malformed"):
        read_schema(p)
    p2 = _write(tmp_path, '{"columns": [{"name": "x", "kind": "float"}]}', name="s2.json")
    with pytest.raises(IngestError, match="invalid schema"):
        read_schema(p2)


# ---------------------------------------------------------------------------
# fingerprint
# ---------------------------------------------------------------------------


def test_fingerprint_equal_for_copies():
    t = numeric_table([(1.0, 2.0), (3.0, 4.0)])
    copy = numeric_table([(1.0, 2.0), (3.0, 4.0)])
    assert fingerprint(t) == fingerprint(copy)


def test_fingerprint_changes_on_permutation_and_edit():
    t = numeric_table([(1.0,), (2.0,)])
    assert fingerprint(t) != fingerprint(t.take([1, 0]))
    assert fingerprint(t) != fingerprint(numeric_table([(1.0,), (2.5,)]))


def test_fingerprint_sensitive_to_schema():
    rows = [(1.0,), (2.0,)]
    a = numeric_table(rows, names=["x"])
    b = numeric_table(rows, names=["y"])
    assert fingerprint(a) != fingerprint(b)


def test_fingerprint_no_collisions_over_corpus(rng):
    """Hash-collision check: 100 distinct small tables, all digests distinct."""
    seen = set()
    for _ in range(100):
        n = int(rng.integers(1, 6))
        d = int(rng.integers(1, 4))
        t = numeric_table(rng.integers(-50, 50, size=(n, d)).astype(float).tolist())
        seen.add(fingerprint(t))
    # distinct tables may repeat by chance in generation; regenerate exactly
    assert len(seen) >= 95  # tolerate generator duplicates, not hash collisions


def test_fingerprint_is_64_bit():
    t = numeric_table([(1.0,)])
    assert 0 <= fingerprint(t) < 2**64


# ---------------------------------------------------------------------------
# split_real
# ---------------------------------------------------------------------------


def _range_table(n):
    return numeric_table([(float(i),) for i in range(n)])


def test_split_sizes_100():
    tr, ho, re = split_real(_range_table(100), SplitSpec(0.2, RandomSeed(1)))
    assert (tr.n_rows, ho.n_rows, re.n_rows) == (80, 10, 10)


def test_split_sizes_101():
    tr, ho, re = split_real(_range_table(101), SplitSpec(0.2, RandomSeed(1)))
    assert tr.n_rows == 80
    assert {ho.n_rows, re.n_rows} == {11, 10}
    assert ho.n_rows == 11  # holdout takes the ceiling half


def test_split_guards():
    with pytest.raises(IngestError, match="at least 10"):
        split_real(_range_table(5), SplitSpec(0.2, RandomSeed(1)))
    # 10 rows at 0.1 → test pool of 1 → empty reference
    with pytest.raises(IngestError, match="empty partition"):
        split_real(_range_table(10), SplitSpec(0.1, RandomSeed(1)))


def test_split_fraction_validation():
    with pytest.raises(ValueError):
        SplitSpec(0.0, RandomSeed(1))
    with pytest.raises(ValueError):
        SplitSpec(1.0, RandomSeed(1))


def test_split_fraction_arithmetic_is_decimal_exact():
    """0.1 of 30 rows must give exactly 3 test rows despite float 0.1·30 > 3."""
    tr, ho, re = split_real(_range_table(30), SplitSpec(0.1, RandomSeed(1)))
    assert (tr.n_rows, ho.n_rows, re.n_rows) == (27, 2, 1)


def test_split_deterministic_and_seed_sensitive():
    data = _range_table(40)
    a = split_real(data, SplitSpec(0.2, RandomSeed(5)))
    b = split_real(data, SplitSpec(0.2, RandomSeed(5)))
    c = split_real(data, SplitSpec(0.2, RandomSeed(6)))
    assert [t.to_rows() for t in a] == [t.to_rows() for t in b]
    assert [t.to_rows() for t in a] != [t.to_rows() for t in c]


@given(
    st.integers(min_value=10, max_value=200),
    st.sampled_from([0.1, 0.2, 0.25, 0.5, 0.8]),
    st.integers(min_value=0, max_value=2**32),
)
@settings(max_examples=60, deadline=None)
def test_split_is_a_partition(n, fraction, seed_value):
    data = _range_table(n)
    try:
        tr, ho, re = split_real(data, SplitSpec(fraction, RandomSeed(seed_value)))
    except IngestError:
        return  # legitimately unsplittable at this (n, fraction)
    assert tr.n_rows + ho.n_rows + re.n_rows == n
    all_rows = sorted(tr.to_rows() + ho.to_rows() + re.to_rows())
    assert all_rows == sorted(data.to_rows())
    # pairwise disjoint (rows here are unique by construction)
    assert not set(tr.to_rows()) & set(ho.to_rows())
    assert not set(tr.to_rows()) & set(re.to_rows())
    assert not set(ho.to_rows()) & set(re.to_rows())
    import math
    from fractions import Fraction

    assert ho.n_rows + re.n_rows == math.ceil(Fraction(str(fraction)) * n)
    assert ho.n_rows - re.n_rows in (0, 1)
