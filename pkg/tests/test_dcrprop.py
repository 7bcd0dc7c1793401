"""DCR-Prop similarity diagnostic: orientation, tie credit, conventions."""

import numpy as np
import pytest

from tabmia.core import RandomSeed, SchemaMismatchError
from tabmia.dcrprop import DcrPropResult, dcr_prop
from tabmia.harness import make_case
from tabmia.preprocess import fit_transformer

from .conftest import numeric_table


def onehot_for(table):
    return fit_transformer(table, "onehot", "synthetic")


def test_synthetic_equal_to_train_scores_zero():
    train = numeric_table([[0.0], [1.0], [2.0]])
    reference = numeric_table([[10.0], [11.0], [12.0]])
    synthetic = numeric_table([[0.0], [1.0], [2.0]])
    result = dcr_prop(train, reference, synthetic, onehot_for(synthetic))
    assert result.proportion == 0.0
    assert result.proportion_train_oriented == 1.0
    assert result.n_closer_to_train == 3
    assert result.n_closer_to_reference == 0
    assert result.n_ties == 0


def test_reference_identical_to_train_is_all_ties():
    train = numeric_table([[0.0], [1.0], [2.0]])
    synthetic = numeric_table([[0.3], [1.4], [2.2]])
    result = dcr_prop(train, train, synthetic, onehot_for(synthetic))
    assert result.n_ties == 3
    assert result.proportion == 0.5


def test_single_equidistant_row_gets_half_credit():
    train = numeric_table([[0.0]])
    reference = numeric_table([[2.0]])
    synthetic = numeric_table([[1.0]])
    result = dcr_prop(train, reference, synthetic, onehot_for(synthetic))
    assert (result.n_closer_to_train, result.n_closer_to_reference, result.n_ties) == (0, 0, 1)
    assert result.proportion == 0.5


def test_counts_partition_the_synthetic_rows():
    rng = np.random.default_rng(9)
    train = numeric_table(rng.normal(size=(40, 3)).tolist())
    reference = numeric_table(rng.normal(size=(40, 3)).tolist())
    synthetic = numeric_table(rng.normal(size=(25, 3)).tolist())
    result = dcr_prop(train, reference, synthetic, onehot_for(synthetic))
    assert result.n_synthetic == 25
    assert (
        result.n_closer_to_train + result.n_closer_to_reference + result.n_ties == 25
    )
    assert 0.0 <= result.proportion <= 1.0


def test_swapping_train_and_reference_swaps_the_counts():
    rng = np.random.default_rng(10)
    train = numeric_table(rng.normal(size=(30, 2)).tolist())
    reference = numeric_table(rng.normal(size=(30, 2)).tolist())
    synthetic = numeric_table(rng.normal(size=(20, 2)).tolist())
    transformer = onehot_for(synthetic)
    forward = dcr_prop(train, reference, synthetic, transformer)
    swapped = dcr_prop(reference, train, synthetic, transformer)
    assert swapped.n_closer_to_train == forward.n_closer_to_reference
    assert swapped.n_closer_to_reference == forward.n_closer_to_train
    assert swapped.n_ties == forward.n_ties
    assert swapped.proportion == pytest.approx(1.0 - forward.proportion, abs=1e-12)


def test_independent_synthetic_is_balanced_at_equal_sizes():
    """Synthetic data independent of equally-sized train/reference hovers near 0.5."""
    from tabmia.harness import population_table

    proportions = []
    for i in range(10):
        rng = np.random.default_rng(300 + i)
        train = population_table(rng, 100, 2)
        reference = population_table(rng, 100, 2)
        synthetic = population_table(rng, 100, 2)
        transformer = fit_transformer(synthetic, "onehot", "synthetic")
        proportions.append(dcr_prop(train, reference, synthetic, transformer).proportion)
    assert abs(np.mean(proportions) - 0.5) < 0.1


def test_unbalanced_sizes_confound_the_proportion():
    """A much denser train set pulls nn distances down even without leakage;
    the 0.5-balance reading only holds for comparable train/reference sizes."""
    train, _, reference, synthetic = make_case("private", 60, 2, RandomSeed(301))
    assert train.n_rows == 8 * reference.n_rows
    transformer = fit_transformer(synthetic, "onehot", "synthetic")
    assert dcr_prop(train, reference, synthetic, transformer).proportion < 0.5


def test_memorizing_synthetic_skews_toward_train():
    train, _, reference, synthetic = make_case("noisy-0.05", 60, 2, RandomSeed(42))
    transformer = fit_transformer(synthetic, "onehot", "synthetic")
    result = dcr_prop(train, reference, synthetic, transformer)
    assert result.proportion < 0.2  # far below balanced


def test_json_dict_fields():
    train = numeric_table([[0.0], [1.0]])
    reference = numeric_table([[5.0], [6.0]])
    synthetic = numeric_table([[0.1], [5.1]])
    d = dcr_prop(train, reference, synthetic, onehot_for(synthetic)).to_json_dict()
    assert set(d) == {
        "proportion",
        "proportion_train_oriented",
        "n_closer_to_train",
        "n_closer_to_reference",
        "n_ties",
        "convention",
    }
    assert d["proportion"] == 0.5
    assert "higher = more private" in d["convention"]


def test_schema_mismatch_rejected():
    train = numeric_table([[0.0]], names=["x"])
    other = numeric_table([[0.0]], names=["y"])
    synthetic = numeric_table([[0.0]], names=["x"])
    with pytest.raises(SchemaMismatchError):
        dcr_prop(train, other, synthetic, onehot_for(synthetic))
    with pytest.raises(SchemaMismatchError):
        dcr_prop(train, train, other, onehot_for(train))


def test_result_validation():
    with pytest.raises(ValueError):
        DcrPropResult(
            proportion=0.5,
            proportion_train_oriented=0.5,
            n_closer_to_train=0,
            n_closer_to_reference=0,
            n_ties=0,
        )
    with pytest.raises(ValueError):
        DcrPropResult(
            proportion=1.5,
            proportion_train_oriented=-0.5,
            n_closer_to_train=1,
            n_closer_to_reference=0,
            n_ties=0,
        )