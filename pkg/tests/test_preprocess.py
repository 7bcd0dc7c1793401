"""Leakage-safe encoding: min-max numerics, one-hot/ordinal categoricals."""

import numpy as np
import pytest
from hypothesis import given, settings

from tabmia.core import (
    CATEGORICAL,
    NUMERIC,
    Column,
    DataTable,
    SchemaMismatchError,
    TableSchema,
)
from tabmia.preprocess import (
    ONEHOT,
    ORDINAL,
    FittedTransformer,
    fit_transformer,
    transform,
)

from .conftest import mixed_tables, numeric_table


def _cat_table(values, vocab=None, name="c"):
    schema = TableSchema((Column(name, CATEGORICAL, categories=vocab),))
    return DataTable.from_rows(schema, [(v,) for v in values])


# ---------------------------------------------------------------------------
# numeric encoding
# ---------------------------------------------------------------------------


def test_minmax_midpoint():
    t = fit_transformer(numeric_table([(0.0,), (10.0,)]), ONEHOT)
    enc = transform(t, numeric_table([(5.0,)]))
    assert enc.values[0, 0] == 0.5
    assert t.numeric_bounds[0] == (0.0, 10.0)


def test_constant_column_widened_bounds():
    t = fit_transformer(numeric_table([(7.0,), (7.0,), (7.0,)]), ONEHOT)
    assert t.numeric_bounds[0] == (6.5, 7.5)
    enc = transform(t, numeric_table([(7.0,)]))
    assert enc.values[0, 0] == 0.5


def test_no_clipping_outside_bounds():
    t = fit_transformer(numeric_table([(0.0,), (10.0,)]), ONEHOT)
    enc = transform(t, numeric_table([(15.0,), (-5.0,)]))
    assert enc.values[0, 0] == 1.5
    assert enc.values[1, 0] == -0.5


# ---------------------------------------------------------------------------
# categorical encoding
# ---------------------------------------------------------------------------


def test_onehot_width_and_blocks():
    t = fit_transformer(_cat_table(["a", "b", "a"]), ONEHOT)
    assert t.output_dim == 2
    enc = transform(t, _cat_table(["b", "a"]))
    assert enc.values.tolist() == [[0.0, 1.0], [1.0, 0.0]]


def test_onehot_unseen_category_is_zero_block():
    t = fit_transformer(_cat_table(["a", "b"]), ONEHOT)
    enc = transform(t, _cat_table(["z"]))
    assert enc.values.tolist() == [[0.0, 0.0]]


def test_ordinal_three_category_vocab():
    t = fit_transformer(_cat_table(["a", "b", "c"]), ORDINAL)
    enc = transform(t, _cat_table(["a", "b", "c"]))
    assert enc.values[:, 0].tolist() == [0.0, 0.5, 1.0]


def test_ordinal_singleton_vocab_maps_to_half():
    t = fit_transformer(_cat_table(["only"]), ORDINAL)
    enc = transform(t, _cat_table(["only"]))
    assert enc.values[0, 0] == 0.5


def test_ordinal_unseen_category_lands_outside_range():
    t = fit_transformer(_cat_table(["a", "b", "c"]), ORDINAL)
    enc = transform(t, _cat_table(["z"]))
    assert enc.values[0, 0] == 1.0 + 1.0 / 3.0
    singleton = fit_transformer(_cat_table(["a"]), ORDINAL)
    assert transform(singleton, _cat_table(["z"])).values[0, 0] == 2.0


def test_declared_vocabulary_wins_over_observed():
    # the schema vocabulary fixes encoding order even if data order differs
    t = fit_transformer(_cat_table(["b", "a"], vocab=("a", "b")), ORDINAL)
    enc = transform(t, _cat_table(["a", "b"], vocab=("a", "b")))
    assert enc.values[:, 0].tolist() == [0.0, 1.0]


def test_observed_vocabulary_is_first_appearance_order():
    t = fit_transformer(_cat_table(["b", "a", "b"]), ORDINAL)
    assert t.vocabularies[0] == ("b", "a")


# ---------------------------------------------------------------------------
# transformer state, serialization, digest
# ---------------------------------------------------------------------------


def test_fit_source_recorded_and_validated():
    data = numeric_table([(1.0,), (2.0,)])
    t = fit_transformer(data, ONEHOT, fit_source="reference")
    assert t.fit_source == "reference"
    with pytest.raises(ValueError):
        fit_transformer(data, ONEHOT, fit_source="train")
    with pytest.raises(ValueError):
        fit_transformer(data, "scaler")


def test_json_round_trip():
    data = DataTable.from_rows(
        TableSchema((Column("x", NUMERIC), Column("c", CATEGORICAL))),
        [(1.0, "a"), (2.0, "b")],
    )
    for mode in (ONEHOT, ORDINAL):
        t = fit_transformer(data, mode)
        back = FittedTransformer.from_json_dict(t.to_json_dict())
        assert back == t
        assert back.digest() == t.digest()


def test_digest_sensitive_to_state():
    a = fit_transformer(numeric_table([(0.0,), (1.0,)]), ONEHOT)
    b = fit_transformer(numeric_table([(0.0,), (2.0,)]), ONEHOT)
    c = fit_transformer(numeric_table([(0.0,), (1.0,)]), ORDINAL)
    assert a.digest() != b.digest()
    assert a.digest() != c.digest()
    assert a.digest() == fit_transformer(numeric_table([(0.0,), (1.0,)]), ONEHOT).digest()


def test_transform_schema_mismatch():
    t = fit_transformer(numeric_table([(0.0,), (1.0,)]), ONEHOT)
    other = DataTable.from_rows(TableSchema((Column("y", NUMERIC),)), [(0.0,)])
    with pytest.raises(SchemaMismatchError):
        transform(t, other)


def test_encoded_matrix_properties():
    data = DataTable.from_rows(
        TableSchema((Column("x", NUMERIC), Column("c", CATEGORICAL))),
        [(1.0, "a"), (2.0, "b"), (3.0, "a")],
    )
    t = fit_transformer(data, ONEHOT)
    enc = transform(t, data)
    assert enc.n_rows == 3
    assert enc.width == t.output_dim == 3
    assert enc.transformer_id == t.digest()
    with pytest.raises(ValueError):
        enc.values[0, 0] = 9.0


@given(mixed_tables(min_rows=2))
@settings(max_examples=40, deadline=None)
def test_transform_output_shape_and_finiteness(table):
    for mode in (ONEHOT, ORDINAL):
        t = fit_transformer(table, mode)
        enc = transform(t, table)
        assert enc.values.shape == (table.n_rows, t.output_dim)
        assert np.isfinite(enc.values).all()
        # fit-source rows always encode inside [0,1] in every block
        assert enc.values.min() >= 0.0
        assert enc.values.max() <= 1.0


@given(mixed_tables(min_rows=2), mixed_tables(min_rows=2))
@settings(max_examples=30, deadline=None)
def test_state_ignores_non_fit_tables(fit_table, other):
    """Anti-leakage: the fitted state is a pure function of the fit source."""
    t1 = fit_transformer(fit_table, ORDINAL)
    t2 = fit_transformer(fit_table, ORDINAL)
    assert t1.to_json_dict() == t2.to_json_dict()
    assert t1.digest() == t2.digest()
