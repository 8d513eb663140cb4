"""Equivalence relations on {0, ..., n-1} as canonical block assignments."""

from dataclasses import dataclass
from typing import FrozenSet, Iterable, List, Sequence, Tuple

import numpy as np

from ..errors import PreconditionError


def _canonical(labels: Iterable[int]) -> Tuple[int, ...]:
    renumber: dict = {}
    return tuple(renumber.setdefault(int(label), len(renumber)) for label in labels)


def merge_components(labels: np.ndarray, left: np.ndarray, right: np.ndarray) -> np.ndarray:
    """Union-find over whole arrays of edges.

    `labels` maps every element to a representative that is the least element
    of its class; the result does the same for the classes joined by the edges
    left[i] ~ right[i].
    """
    parent = labels.copy()
    while True:
        root_left, root_right = parent[left], parent[right]
        pending = root_left != root_right
        if not pending.any():
            return parent
        low = np.minimum(root_left[pending], root_right[pending])
        high = np.maximum(root_left[pending], root_right[pending])
        np.minimum.at(parent, high, low)
        while True:
            jumped = parent[parent]
            if np.array_equal(jumped, parent):
                break
            parent = jumped


@dataclass(frozen=True)
class Partition:
    """A set partition stored as block ids in order of first occurrence, so
    that equal partitions are equal values."""

    blocks: Tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "blocks", _canonical(self.blocks))

    @classmethod
    def from_labels(cls, labels: Iterable[int]) -> "Partition":
        return cls(_canonical(labels))

    @classmethod
    def identity(cls, size: int) -> "Partition":
        return cls(tuple(range(size)))

    @classmethod
    def total(cls, size: int) -> "Partition":
        return cls((0,) * size)

    @classmethod
    def from_subset(cls, size: int, subset: Iterable[int]) -> "Partition":
        """The two-block equivalence {subset, complement} (one block if either is empty)."""
        members = frozenset(subset)
        return cls.from_labels(0 if a in members else 1 for a in range(size))

    @classmethod
    def from_classes(cls, size: int, classes: Iterable[Iterable[int]]) -> "Partition":
        labels = list(range(size))
        seen = set()
        for index, cls_members in enumerate(classes):
            for a in cls_members:
                if a in seen:
                    raise PreconditionError(f"element {a} appears in two classes")
                seen.add(a)
                labels[a] = size + index
        return cls.from_labels(labels)

    @classmethod
    def generated_by(cls, size: int, pairs: Iterable[Tuple[int, int]]) -> "Partition":
        edges = list(pairs)
        labels = np.arange(size)
        if edges:
            left = np.array([a for a, _ in edges], dtype=np.int64)
            right = np.array([b for _, b in edges], dtype=np.int64)
            labels = merge_components(labels, left, right)
        return cls.from_labels(labels.tolist())

    @property
    def size(self) -> int:
        return len(self.blocks)

    @property
    def block_count(self) -> int:
        return max(self.blocks) + 1 if self.blocks else 0

    @property
    def labels(self) -> np.ndarray:
        return np.asarray(self.blocks, dtype=np.int64)

    def representatives(self) -> np.ndarray:
        """For every element, the least element of its block."""
        first = {}
        for a, block in enumerate(self.blocks):
            first.setdefault(block, a)
        return np.array([first[b] for b in self.blocks], dtype=np.int64)

    def classes(self) -> List[FrozenSet[int]]:
        members: List[List[int]] = [[] for _ in range(self.block_count)]
        for a, block in enumerate(self.blocks):
            members[block].append(a)
        return [frozenset(m) for m in members]

    def related(self, a: int, b: int) -> bool:
        return self.blocks[a] == self.blocks[b]

    def pairs(self) -> List[Tuple[int, int]]:
        return [
            (a, b)
            for a in range(self.size)
            for b in range(self.size)
            if self.blocks[a] == self.blocks[b]
        ]

    def is_identity(self) -> bool:
        return self.block_count == self.size

    def is_total(self) -> bool:
        return self.block_count <= 1

    def refines(self, other: "Partition") -> bool:
        """True when every block of self lies inside a block of other."""
        self._check_size(other)
        image: dict = {}
        return all(
            image.setdefault(mine, theirs) == theirs
            for mine, theirs in zip(self.blocks, other.blocks)
        )

    def meet(self, other: "Partition") -> "Partition":
        self._check_size(other)
        return Partition.from_labels(
            a * other.block_count + b for a, b in zip(self.blocks, other.blocks)
        )

    def join(self, other: "Partition") -> "Partition":
        self._check_size(other)
        labels = merge_components(
            self.representatives(),
            np.arange(self.size),
            other.representatives(),
        )
        return Partition.from_labels(labels.tolist())

    def is_union_of_blocks(self, subset: Iterable[int]) -> bool:
        members = frozenset(subset)
        inside = {}
        return all(
            inside.setdefault(block, a in members) == (a in members)
            for a, block in enumerate(self.blocks)
        )

    def block_of(self, element: int) -> FrozenSet[int]:
        block = self.blocks[element]
        return frozenset(a for a, b in enumerate(self.blocks) if b == block)

    def _check_size(self, other: "Partition") -> None:
        if self.size != other.size:
            raise PreconditionError(
                f"partitions of {self.size} and {other.size} elements are not comparable"
            )

    def __str__(self) -> str:
        return " | ".join(
            "{" + ", ".join(str(a) for a in sorted(block)) + "}"
            for block in self.classes()
        )


def meet_all(size: int, partitions: Sequence[Partition]) -> Partition:
    result = Partition.total(size)
    for partition in partitions:
        result = result.meet(partition)
    return result


@dataclass(frozen=True)
class Relation:
    """A binary relation on {0, ..., n-1} that need not be an equivalence."""

    size: int
    pairs: FrozenSet[Tuple[int, int]]

    @classmethod
    def from_matrix(cls, matrix: np.ndarray) -> "Relation":
        rows, cols = np.nonzero(matrix)
        return cls(int(matrix.shape[0]), frozenset(zip(rows.tolist(), cols.tolist())))

    def __contains__(self, pair: object) -> bool:
        return pair in self.pairs

    def is_reflexive(self) -> bool:
        return all((a, a) in self.pairs for a in range(self.size))

    def is_symmetric(self) -> bool:
        return all((b, a) in self.pairs for a, b in self.pairs)

    def is_transitive(self) -> bool:
        successors: dict = {}
        for a, b in self.pairs:
            successors.setdefault(a, set()).add(b)
        return all(
            (a, c) in self.pairs
            for a, b in self.pairs
            for c in successors.get(b, ())
        )

    def is_equivalence(self) -> bool:
        return self.is_reflexive() and self.is_symmetric() and self.is_transitive()

    def to_partition(self) -> Partition:
        if not self.is_equivalence():
            raise PreconditionError("relation is not an equivalence")
        labels = list(range(self.size))
        for a in range(self.size):
            labels[a] = min(b for b in range(self.size) if (a, b) in self.pairs)
        return Partition.from_labels(labels)
