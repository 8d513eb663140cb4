import itertools
from typing import Iterator, List

import pytest

from matsman.fixtures import load_algebra, load_matrix, load_rules
from matsman.logic import FiniteAlgebra, Matrix, Partition, RuleSet


@pytest.fixture
def b2() -> Matrix:
    return load_matrix("b2")


@pytest.fixture
def b2_imp() -> Matrix:
    return load_matrix("b2_imp")


@pytest.fixture
def l3() -> Matrix:
    return load_matrix("l3")


@pytest.fixture
def g3() -> Matrix:
    return load_matrix("g3")


@pytest.fixture
def b2xb2() -> Matrix:
    return load_matrix("b2xb2")


@pytest.fixture
def hilbert() -> RuleSet:
    return load_rules("hilbert")


@pytest.fixture
def b2_algebra() -> FiniteAlgebra:
    return load_algebra("b2")


def all_partitions(size: int) -> Iterator[Partition]:
    """Every partition of {0..size-1}, as restricted growth strings."""

    def grow(prefix: List[int], top: int) -> Iterator[List[int]]:
        if len(prefix) == size:
            yield prefix
            return
        for block in range(top + 2):
            yield from grow(prefix + [block], max(top, block))

    if size == 0:
        yield Partition(())
        return
    for labels in grow([0], 0):
        yield Partition.from_labels(labels)


def congruence_by_tuples(algebra: FiniteAlgebra, partition: Partition) -> bool:
    """Closure under related argument tuples, checked on every pair of tuples."""
    for connective in algebra.signature.operations():
        for left in itertools.product(range(algebra.size), repeat=connective.arity):
            for right in itertools.product(range(algebra.size), repeat=connective.arity):
                if not all(partition.related(a, b) for a, b in zip(left, right)):
                    continue
                if not partition.related(
                    algebra.apply(connective.symbol, *left),
                    algebra.apply(connective.symbol, *right),
                ):
                    return False
    return True
