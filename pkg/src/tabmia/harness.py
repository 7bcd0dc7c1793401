"""Toy generators and fixtures with known leakage behavior.

Real generative models are out of scope; these stand-ins produce synthetic
tables whose leakage is known by construction, giving acceptance tests
analytic ground truth:

* ``memorizer(σ)`` — resamples train rows with replacement and adds N(0, σ²)
  noise to numeric cells; σ=0 emits exact copies (maximal leakage).
* ``marginal_resampler`` — samples each column independently from its
  empirical marginal, destroying joint structure (weak leakage).
* ``gaussian_fitter`` — fits a mean/covariance (ridge 1e−6) and samples;
  a coarse but honest model of the population (low leakage).

Fixtures draw 2n rows from a fixed d-dimensional Gaussian-mixture population
(three correlated components), split them 80:20 into train vs
holdout+reference, and synthesize |train| rows with the named generator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import CATEGORICAL, NUMERIC, Column, DataTable, RandomSeed, TableSchema
from .ingest import SplitSpec, split_real

GENERATOR_KINDS = ("memorizer", "marginal_resampler", "gaussian_fitter")
FIXTURES = ("leaky", "noisy-<sigma>", "private", "gaussian", "marginal")


@dataclass(frozen=True)
class ToyGenerator:
    """A synthetic-data generator stand-in; deterministic given its seed."""

    kind: str
    seed: RandomSeed
    noise: float = 0.0

    def __post_init__(self):
        if self.kind not in GENERATOR_KINDS:
            raise ValueError(f"unknown generator kind {self.kind!r}")
        if self.noise < 0:
            raise ValueError("noise must be non-negative")


def generate(gen: ToyGenerator, train: DataTable, m: int) -> DataTable:
    """Produce m synthetic rows from the generator fitted on train.

    Raises:
        ValueError: m < 1, or gaussian_fitter on categorical columns.
    """
    if m < 1:
        raise ValueError("m must be at least 1")
    rng = gen.seed.generator()
    n = train.n_rows
    if gen.kind == "memorizer":
        idx = rng.integers(0, n, size=m)
        cols = []
        for col, values in zip(train.schema.columns, train.columns):
            sampled = values[idx]
            if col.kind == NUMERIC and gen.noise > 0:
                sampled = sampled + rng.normal(0.0, gen.noise, size=m)
            cols.append(sampled)
        return DataTable(train.schema, tuple(cols))
    if gen.kind == "marginal_resampler":
        cols = tuple(values[rng.integers(0, n, size=m)] for values in train.columns)
        return DataTable(train.schema, cols)
    # gaussian_fitter
    if any(c.kind == CATEGORICAL for c in train.schema.columns):
        raise ValueError("gaussian_fitter requires numeric-only data")
    X = np.column_stack(train.columns)
    mean = X.mean(axis=0)
    cov = np.atleast_2d(np.cov(X, rowvar=False, ddof=1)) + 1e-6 * np.eye(X.shape[1])
    samples = rng.multivariate_normal(mean, cov, size=m)
    return DataTable(train.schema, tuple(samples[:, j] for j in range(X.shape[1])))


def _numeric_schema(d: int) -> TableSchema:
    return TableSchema(tuple(Column(f"x{j}", NUMERIC) for j in range(d)))


def _sample_population(rng: np.random.Generator, n: int, d: int) -> np.ndarray:
    """Draw from the fixed population: a 3-component correlated Gaussian mixture.

    Component c has mean μ_c along a fixed direction, per-coordinate scale
    σ_c, and a shared-factor term inducing 0.36 inter-coordinate correlation
    — enough joint structure that marginal resampling visibly destroys it.
    """
    u = np.ones(d) / math.sqrt(d)
    v = np.array([(-1.0) ** j for j in range(d)]) / math.sqrt(d)
    means = np.stack([np.zeros(d), 3.0 * math.sqrt(d) * u, 3.0 * math.sqrt(d) * v])
    scales = np.array([1.0, 0.8, 1.2])
    weights = np.array([0.5, 0.3, 0.2])
    components = rng.choice(3, size=n, p=weights)
    factor = rng.normal(size=n)
    noise = rng.normal(size=(n, d))
    sigma = scales[components][:, None]
    rows = (
        means[components]
        + 0.6 * sigma * factor[:, None] * np.ones(d)
        + 0.8 * sigma * noise
    )
    return rows


def population_table(rng: np.random.Generator, n: int, d: int) -> DataTable:
    rows = _sample_population(rng, n, d)
    return DataTable(_numeric_schema(d), tuple(rows[:, j] for j in range(d)))


def make_case(
    name: str,
    n: int,
    d: int,
    seed: RandomSeed,
    data_seed: RandomSeed | None = None,
) -> tuple[DataTable, DataTable, DataTable, DataTable]:
    """Build a named fixture quadruple (train, holdout, reference, synthetic).

    Fixtures:
        "leaky"       — synthetic is a full row-shuffled copy of train
                        (every train row covered; worst case).
        "noisy-σ"     — memorizer with noise σ, e.g. "noisy-0.1".
        "private"     — fresh population rows, never touching train
                        (no membership signal exists).
        "gaussian"    — gaussian_fitter on train.
        "marginal"    — marginal_resampler on train.

    The population draw and the split use ``data_seed`` when given (else
    ``seed``), so studies can hold the data partition fixed while varying
    only the generator seed.

    Args:
        name: fixture name.
        n: population scale; 2n rows are drawn, yielding ~1.6n train rows.
        d: numeric dimension.
        seed: generator seed (and data seed when ``data_seed`` is None).
        data_seed: optional separate seed for the population draw and split.
    """
    base = data_seed if data_seed is not None else seed
    rng = base.child("population").generator()
    population = population_table(rng, 2 * n, d)
    train, holdout, reference = split_real(
        population, SplitSpec(test_fraction=0.2, seed=base.child("split"))
    )
    m = train.n_rows
    gen_seed = seed.child("generator")
    if name == "leaky":
        perm = gen_seed.generator().permutation(m)
        synthetic = train.take(perm)
    elif name.startswith("noisy-"):
        sigma = float(name[len("noisy-") :])
        gen = ToyGenerator("memorizer", seed=gen_seed, noise=sigma)
        synthetic = generate(gen, train, m)
    elif name == "private":
        synthetic = population_table(seed.child("private").generator(), m, d)
    elif name == "gaussian":
        synthetic = generate(ToyGenerator("gaussian_fitter", seed=gen_seed), train, m)
    elif name == "marginal":
        synthetic = generate(ToyGenerator("marginal_resampler", seed=gen_seed), train, m)
    else:
        raise ValueError(f"unknown fixture {name!r} (known: {', '.join(FIXTURES)})")
    return train, holdout, reference, synthetic
