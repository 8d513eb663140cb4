"""Lindenbaum-Tarski quotients of k-variable reducts and bounded variety checks.

An identity A = 1 is a formula paired with the distinguished constant of a
pointed algebra; it holds when every assignment sends A to the distinguished
element.
"""

import logging
from dataclasses import dataclass
from typing import Dict, FrozenSet, Optional, Tuple

import numpy as np

from ..config import DEFAULT_LIMITS, Limits
from ..errors import PreconditionError, SignatureError
from .algebra import (
    FiniteAlgebra,
    PointedAlgebra,
    congruence_generated,
    valuation_at,
)
from .language import Formula, generated_variables
from .matrix import LindenbaumReduct, Matrix, lindenbaum_reduct, paired_closure
from .partition import Partition

_logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LindenbaumTarski:
    reduct: LindenbaumReduct
    congruence: Partition
    algebra: FiniteAlgebra
    projection: Tuple[int, ...]
    admits: bool

    @property
    def filter_class(self) -> Optional[int]:
        if not self.reduct.filter:
            return None
        return self.projection[min(self.reduct.filter)]

    @property
    def generator_classes(self) -> Tuple[int, ...]:
        return tuple(self.projection[g] for g in self.reduct.functions.generator_indices)

    def canonical_valuation(self) -> Dict[str, int]:
        names = generated_variables(self.reduct.functions.arity)
        return dict(zip(names, self.generator_classes))


def lt_algebra(m: Matrix, k: int, limits: Limits = DEFAULT_LIMITS) -> LindenbaumTarski:
    """Quotient F(k) by the congruence generated by identifying all tautologies.

    The matrix admits the quotient when the tautologies form exactly one class.
    """
    reduct = lindenbaum_reduct(m, k, limits)
    functions = reduct.functions.subpower
    members = sorted(reduct.filter)
    if members:
        theta = congruence_generated(
            functions, [(members[0], g) for g in members[1:]], limits
        )
    else:
        theta = Partition.identity(functions.size)
    quotient_algebra, projection = functions.quotient(theta, limits)
    admits = bool(members) and theta.block_of(members[0]) == frozenset(members)
    _logger.debug(
        "Lindenbaum-Tarski quotient: %d -> %d elements, admits=%s",
        functions.size, quotient_algebra.size, admits,
    )
    return LindenbaumTarski(reduct, theta, quotient_algebra, projection, admits)


def _require_admits(lt: LindenbaumTarski) -> None:
    if not lt.admits:
        raise PreconditionError(
            "the tautologies do not form a single class; the quotient has no "
            "univalent reading"
        )


def pointed_lt(m: Matrix, k: int, limits: Limits = DEFAULT_LIMITS) -> PointedAlgebra:
    lt = lt_algebra(m, k, limits)
    _require_admits(lt)
    assert lt.filter_class is not None
    return PointedAlgebra(lt.algebra, lt.filter_class)


@dataclass(frozen=True)
class SweepVerdict:
    """Result of a bounded sweep; `witness` is the first offending formula."""

    holds: bool
    witness: Optional[Formula] = None
    valuation: Optional[Dict[str, int]] = None
    checked: int = 0

    def __bool__(self) -> bool:
        return self.holds


def canonical_valuation_check(
    m: Matrix, k: int, depth: int, limits: Limits = DEFAULT_LIMITS
) -> SweepVerdict:
    """A formula over p1..pk of depth at most `depth` is a tautology iff the
    canonical valuation (p_i to the class of the i-th projection) sends it to
    the class of the tautologies."""
    lt = lt_algebra(m, k, limits)
    _require_admits(lt)
    valuation = lt.canonical_valuation()
    closure = paired_closure([m.algebra], k, depth, limits)
    theorem = m.designated[closure.rows].all(axis=1)
    for index, formula in enumerate(closure.terms):
        is_one = lt.algebra.evaluate(formula, valuation) == lt.filter_class
        if is_one != bool(theorem[index]):
            return SweepVerdict(False, formula, valuation, index + 1)
    return SweepVerdict(True, checked=len(closure))


def variety_membership(
    pointed: PointedAlgebra,
    m: Matrix,
    k: int,
    depth: int,
    limits: Limits = DEFAULT_LIMITS,
) -> SweepVerdict:
    """Check A = 1 in the pointed algebra for every tautology A of m over
    p1..pk up to `depth`; on failure the witness is the first such A."""
    if pointed.algebra.signature != m.algebra.signature:
        raise SignatureError("the pointed algebra and the matrix differ in signature")
    closure = paired_closure([m.algebra, pointed.algebra], k, depth, limits)
    theorem = m.designated[closure.segment_rows(0)].all(axis=1)
    values = closure.segment_rows(1)
    checked = 0
    for index in np.nonzero(theorem)[0].tolist():
        checked += 1
        wrong = np.nonzero(values[index] != pointed.one)[0]
        if len(wrong):
            valuation = valuation_at(
                pointed.algebra.size, generated_variables(k), int(wrong[0])
            )
            _logger.info("identity %s = 1 fails", closure.terms[index])
            return SweepVerdict(False, closure.terms[index], valuation, checked)
    return SweepVerdict(True, checked=checked)


def tautology_classes(lt: LindenbaumTarski) -> FrozenSet[int]:
    return frozenset(lt.projection[g] for g in lt.reduct.filter)
