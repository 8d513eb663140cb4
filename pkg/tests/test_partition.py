import random

import numpy as np
import pytest

from matsman.errors import PreconditionError
from matsman.logic.partition import Partition, Relation, merge_components, meet_all

from conftest import all_partitions


def test_blocks_are_canonical():
    assert Partition((3, 3, 1, 0)).blocks == (0, 0, 1, 2)
    assert Partition.from_labels([5, 2, 5]) == Partition((0, 1, 0))


def test_identity_and_total():
    assert Partition.identity(3).is_identity()
    assert Partition.total(3).is_total()
    assert Partition.identity(3).refines(Partition.total(3))
    assert not Partition.total(3).refines(Partition.identity(3))


def test_from_subset_and_classes():
    assert Partition.from_subset(4, {1, 3}).classes() == [frozenset({0, 2}), frozenset({1, 3})]
    assert Partition.from_subset(2, {0, 1}).is_total()
    assert Partition.from_classes(4, [[0, 2]]).blocks == (0, 1, 0, 2)
    with pytest.raises(PreconditionError):
        Partition.from_classes(3, [[0, 1], [1, 2]])


def test_generated_by_joins_chains():
    partition = Partition.generated_by(5, [(0, 3), (3, 4)])
    assert partition.classes() == [frozenset({0, 3, 4}), frozenset({1}), frozenset({2})]


def test_merge_components_keeps_least_representatives():
    labels = merge_components(np.arange(6), np.array([5, 4, 2]), np.array([4, 1, 5]))
    assert labels.tolist() == [0, 1, 1, 3, 1, 1]


def test_meet_and_join_against_brute_force():
    rng = random.Random(7)
    partitions = list(all_partitions(4))
    assert len(partitions) == 15
    for _ in range(60):
        a, b = rng.choice(partitions), rng.choice(partitions)
        meet, join = a.meet(b), a.join(b)
        lower = [p for p in partitions if p.refines(a) and p.refines(b)]
        upper = [p for p in partitions if a.refines(p) and b.refines(p)]
        assert meet in lower and all(p.refines(meet) for p in lower)
        assert join in upper and all(join.refines(p) for p in upper)


def test_meet_all_of_nothing_is_total():
    assert meet_all(3, []) == Partition.total(3)


def test_union_of_blocks_and_block_of():
    partition = Partition((0, 0, 1, 2))
    assert partition.is_union_of_blocks({0, 1, 3})
    assert not partition.is_union_of_blocks({0, 2})
    assert partition.block_of(1) == {0, 1}
    assert str(partition) == "{0, 1} | {2} | {3}"


def test_comparing_different_sizes_fails():
    with pytest.raises(PreconditionError):
        Partition.identity(2).meet(Partition.identity(3))


def test_relation_to_partition():
    relation = Relation(3, frozenset({(0, 0), (1, 1), (2, 2), (0, 2), (2, 0)}))
    assert relation.is_equivalence()
    assert relation.to_partition() == Partition((0, 1, 0))
    broken = Relation.from_matrix(np.array([[1, 1], [0, 1]], dtype=bool))
    assert broken.is_reflexive() and not broken.is_symmetric()
    with pytest.raises(PreconditionError):
        broken.to_partition()
