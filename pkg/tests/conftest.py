"""Shared builders and hypothesis strategies for the test suite."""

import numpy as np
import pytest
from hypothesis import strategies as st

from tabmia.core import (
    CATEGORICAL,
    NUMERIC,
    AttackResult,
    Column,
    DataTable,
    TableSchema,
)


def make_result(member_scores, nonmember_scores, attack_id="test"):
    """Build an AttackResult from two plain score lists (members first)."""
    scores = np.array(list(member_scores) + list(nonmember_scores), dtype=np.float64)
    labels = np.array([1] * len(member_scores) + [0] * len(nonmember_scores), dtype=np.int64)
    return AttackResult(attack_id, scores, labels)


def numeric_table(rows, names=None):
    """Build an all-numeric DataTable from a list of row tuples."""
    rows = [tuple(float(v) for v in r) for r in rows]
    d = len(rows[0])
    names = names or [f"x{j}" for j in range(d)]
    schema = TableSchema(tuple(Column(n, NUMERIC) for n in names))
    return DataTable.from_rows(schema, rows)


def table_as_row_set(table):
    """Rows of a table as a multiset (sorted tuple list) for equality checks."""
    return sorted(table.to_rows())


def row_set(table):
    """Distinct rows of a table, for subset/disjointness checks."""
    return set(table.to_rows())


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


# ---------------------------------------------------------------------------
# hypothesis strategies
# ---------------------------------------------------------------------------

# Scores drawn from a small grid produce heavy ties; mixing in continuous
# draws exercises both the tied and untied branches of every sweep.
_grid_scores = st.integers(min_value=-3, max_value=3).map(lambda v: float(v) / 2.0)
_cont_scores = st.floats(
    min_value=-100.0, max_value=100.0, allow_nan=False, allow_infinity=False
)
score_values = st.one_of(_grid_scores, _cont_scores)


@st.composite
def score_instances(draw, max_side=12):
    """(member_scores, nonmember_scores), both non-empty, heavy tie rate."""
    n1 = draw(st.integers(min_value=1, max_value=max_side))
    n2 = draw(st.integers(min_value=1, max_value=max_side))
    members = draw(st.lists(score_values, min_size=n1, max_size=n1))
    nonmembers = draw(st.lists(score_values, min_size=n2, max_size=n2))
    return members, nonmembers


@st.composite
def small_numeric_tables(draw, min_rows=1, max_rows=8, min_cols=1, max_cols=4):
    """A small all-numeric DataTable with values from a tie-prone grid."""
    n = draw(st.integers(min_value=min_rows, max_value=max_rows))
    d = draw(st.integers(min_value=min_cols, max_value=max_cols))
    cell = st.integers(min_value=-4, max_value=4).map(lambda v: float(v))
    rows = draw(
        st.lists(
            st.tuples(*[cell for _ in range(d)]),
            min_size=n,
            max_size=n,
        )
    )
    schema = TableSchema(tuple(Column(f"x{j}", NUMERIC) for j in range(d)))
    return DataTable.from_rows(schema, rows)


@st.composite
def mixed_tables(draw, min_rows=1, max_rows=8):
    """A DataTable mixing numeric and categorical columns."""
    n = draw(st.integers(min_value=min_rows, max_value=max_rows))
    n_num = draw(st.integers(min_value=0, max_value=3))
    n_cat = draw(st.integers(min_value=0 if n_num else 1, max_value=2))
    cols = []
    names = []
    for j in range(n_num):
        names.append(f"x{j}")
        cols.append(Column(f"x{j}", NUMERIC))
    for j in range(n_cat):
        names.append(f"c{j}")
        cols.append(Column(f"c{j}", CATEGORICAL))
    num_cell = st.integers(min_value=-4, max_value=4).map(float)
    cat_cell = st.sampled_from(["a", "b", "c", "d"])
    row = st.tuples(*([num_cell] * n_num + [cat_cell] * n_cat))
    rows = draw(st.lists(row, min_size=n, max_size=n))
    return DataTable.from_rows(TableSchema(tuple(cols)), rows)
