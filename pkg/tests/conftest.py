import random
from fractions import Fraction

import pytest

import lsglue as lg

F = Fraction


@pytest.fixture
def toy_dataset() -> lg.WeightedDataSet:
    return lg.WeightedDataSet.of([(-4, 2), (-1, 1), (1, 2), (2, 4), (5, 6)])


@pytest.fixture
def toy_cover(toy_dataset) -> lg.Cover:
    return lg.Cover.of(toy_dataset, [("D1", [1, 2, 3, 4]), ("D2", [2, 3, 4, 5])])


@pytest.fixture
def affine1() -> lg.FeatureMap:
    return lg.affine_features(1)


def rand_fraction(rng: random.Random, span: int = 9, zero_ok: bool = True) -> F:
    while True:
        value = F(rng.randint(-span, span), rng.randint(1, span))
        if zero_ok or value != 0:
            return value


def rand_nonneg_fraction(rng: random.Random, span: int = 9) -> F:
    return F(rng.randint(0, span), rng.randint(1, span))


def rand_points(rng: random.Random, count: int, dim: int):
    """Raw (x tuple, y) pairs of Fractions, consumable by package and oracle."""
    return [
        (tuple(rand_fraction(rng) for _ in range(dim)), rand_fraction(rng))
        for _ in range(count)
    ]


def make_dataset(points, weights) -> lg.WeightedDataSet:
    return lg.WeightedDataSet.of(
        [(x, y, w) for (x, y), w in zip(points, weights)]
    )
