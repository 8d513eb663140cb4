"""Deciding whether one finite g-matrix validates every consequence of another.

Suppose the reference validates a sequent that the target refutes at some
valuation v. The values of v lie in the target algebra B, and every element of
B is a term over a generating set g1, ..., gk. Substituting those terms for the
variables gives, by structurality, a sequent over k variables that the
reference still validates and that the target refutes at qi -> gi. Over k
variables a formula matters to both structures only through the pair of term
functions it induces, so it suffices to close the k paired projections under
the connectives. For a fixed target tuple t and target filter F, the largest
premise set that holds at t is G_t = {h : h(t) in F}; by monotonicity the
containment fails iff for some t and F this G_t entails, in the reference, an
element that falls outside F at t.
"""

import itertools
import logging
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple, Union

import numpy as np

from ..config import DEFAULT_LIMITS, Limits
from ..errors import CapExceededError, SignatureError
from .algebra import FiniteAlgebra, minimal_generating_set, valuation_at
from .language import Formula, format_sequent, generated_variables
from .matrix import GMatrix, Matrix, as_gmatrix, gmatrix_consequence, paired_closure

_logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Counterexample:
    """A sequent valid in the reference and refuted by the target at `valuation`."""

    premises: Tuple[Formula, ...]
    conclusion: Formula
    valuation: Dict[str, int] = field(hash=False)
    filter_index: int = 0

    def __str__(self) -> str:
        return format_sequent(self.premises, self.conclusion)


@dataclass(frozen=True)
class ContainmentVerdict:
    holds: bool
    counterexample: Optional[Counterexample] = None

    def __bool__(self) -> bool:
        return self.holds


def _designation(masks: np.ndarray, rows: np.ndarray) -> np.ndarray:
    """Column block per filter: D[g, (filter, t)] is true when g(t) is designated."""
    return np.hstack([mask[rows] for mask in masks])


class _ContainmentChecker:
    """Paired term functions of a reference g-matrix and a target algebra,
    reused across the target filters asked about."""

    def __init__(
        self,
        reference: GMatrix,
        target_algebra: FiniteAlgebra,
        limits: Limits = DEFAULT_LIMITS,
    ):
        if reference.algebra.signature != target_algebra.signature:
            raise SignatureError("the g-matrices do not share a signature")
        self.reference = reference
        self.target_algebra = target_algebra
        self.limits = limits
        self.k = max(1, len(minimal_generating_set(target_algebra, limits)))
        same = reference.algebra == target_algebra
        algebras = [reference.algebra] if same else [reference.algebra, target_algebra]
        self.closure = paired_closure(algebras, self.k, limits=limits)
        reference_rows = self.closure.segment_rows(0)
        self.target_rows = reference_rows if same else self.closure.segment_rows(1)
        self.reference_table = _designation(reference.designated(), reference_rows)
        _logger.debug(
            "containment check over %d paired term functions of arity %d",
            len(self.closure), self.k,
        )

    def entailed(self, premises: np.ndarray) -> np.ndarray:
        holding = self.reference_table[premises].all(axis=0)
        return self.reference_table[:, holding].all(axis=1)

    def first_failure(self, filters: Sequence[FrozenSet[int]]) -> Optional[Counterexample]:
        masks = []
        for members in filters:
            mask = np.zeros(self.target_algebra.size, dtype=bool)
            mask[list(members)] = True
            masks.append(mask)
        for t in range(self.target_rows.shape[1]):
            values = self.target_rows[:, t]
            for index, mask in enumerate(masks):
                premises = mask[values]
                outside = self.entailed(premises) & ~premises
                if outside.any():
                    found = self._counterexample(premises, int(np.argmax(outside)), t, index)
                    self._verify(found, mask)
                    return found
        return None

    def _counterexample(
        self, premises: np.ndarray, conclusion: int, t: int, index: int
    ) -> Counterexample:
        chosen = np.nonzero(premises)[0].tolist()
        position = 0
        while position < len(chosen):
            trial = chosen[:position] + chosen[position + 1:]
            if self.entailed(np.asarray(trial, dtype=np.int64))[conclusion]:
                chosen = trial
            else:
                position += 1
        terms = self.closure.terms
        return Counterexample(
            tuple(terms[g] for g in chosen),
            terms[conclusion],
            valuation_at(self.target_algebra.size, generated_variables(self.k), t),
            index,
        )

    def _verify(self, found: Counterexample, designated: np.ndarray) -> None:
        """Re-check a counterexample by direct evaluation in both structures."""
        if not gmatrix_consequence(
            self.reference, found.premises, found.conclusion, self.limits
        ):
            raise RuntimeError(f"counterexample {found} is not valid in the reference")
        algebra = self.target_algebra
        if designated[algebra.evaluate(found.conclusion, found.valuation)] or not all(
            designated[algebra.evaluate(p, found.valuation)] for p in found.premises
        ):
            raise RuntimeError(f"counterexample {found} is not refuted by the target")


def models(
    target: Union[GMatrix, Matrix],
    reference: Union[GMatrix, Matrix],
    limits: Limits = DEFAULT_LIMITS,
) -> ContainmentVerdict:
    """True iff every consequence of the reference holds in the target."""
    target, reference = as_gmatrix(target), as_gmatrix(reference)
    checker = _ContainmentChecker(reference, target.algebra, limits)
    found = checker.first_failure(target.filters)
    if found is None:
        return ContainmentVerdict(True)
    _logger.info("containment fails: %s", found)
    return ContainmentVerdict(False, found)


@dataclass(frozen=True)
class SameSystemVerdict:
    holds: bool
    counterexample: Optional[Counterexample] = None
    # "first" when the counterexample is valid in the first and refuted by the second
    valid_in: Optional[str] = None

    def __bool__(self) -> bool:
        return self.holds


def same_system(
    a: Union[GMatrix, Matrix],
    b: Union[GMatrix, Matrix],
    limits: Limits = DEFAULT_LIMITS,
) -> SameSystemVerdict:
    forward = models(a, b, limits)
    if not forward:
        return SameSystemVerdict(False, forward.counterexample, "second")
    backward = models(b, a, limits)
    if not backward:
        return SameSystemVerdict(False, backward.counterexample, "first")
    return SameSystemVerdict(True)


def s_filters(
    m: Union[GMatrix, Matrix], limits: Limits = DEFAULT_LIMITS
) -> List[FrozenSet[int]]:
    """Every G such that the algebra with G designated validates the consequence
    of m, ordered by cardinality and then by members."""
    reference = as_gmatrix(m)
    n = reference.algebra.size
    if 2 ** n > limits.max_search:
        raise CapExceededError("candidate filters", 2 ** n, limits.max_search, "--max-search")
    checker = _ContainmentChecker(reference, reference.algebra, limits)
    found = []
    for count in range(n + 1):
        for members in itertools.combinations(range(n), count):
            if checker.first_failure([frozenset(members)]) is None:
                found.append(frozenset(members))
    _logger.debug("%d S-filters on %d elements", len(found), n)
    return found
