"""Leibniz, Frege, Suszko, Tarski and Rasiowa relations, and matrix reduction.

The relations that live on the formula algebra are computed on the k-variable
term-function reduct F(k). Where a definition quantifies over context formulas
we use the congruence-theoretic form instead: the Suszko congruence of a theory
is the largest congruence of F(k) contained in its Frege relation.
"""

import itertools
import logging
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from ..config import DEFAULT_LIMITS, Limits
from ..errors import PreconditionError
from .algebra import (
    FiniteAlgebra,
    Segment,
    Subpower,
    generate_rows,
    largest_congruence_below,
    projection_rows,
    quotient,
)
from .equivalence import s_filters
from .language import Formula, Variable
from .matrix import (
    GMatrix,
    Matrix,
    TermFunctionAlgebra,
    closed_sets,
    lindenbaum_reduct,
    reduct_closure,
    term_function_algebra,
)
from .partition import Partition, Relation, meet_all

_logger = logging.getLogger(__name__)


def compatible(partition: Partition, members: Iterable[int]) -> bool:
    return partition.is_union_of_blocks(members)


def leibniz_congruence(m: Matrix) -> Partition:
    return largest_congruence_below(
        m.algebra, Partition.from_subset(m.algebra.size, m.filter)
    )


def unary_polynomials(
    algebra: FiniteAlgebra,
    limits: Limits = DEFAULT_LIMITS,
    parameters: Optional[Sequence[int]] = None,
) -> np.ndarray:
    """Rows of the subalgebra of A^A generated by the identity and the constant
    maps, one constant map per parameter (every element by default)."""
    n = algebra.size
    constants = list(range(n)) if parameters is None else sorted(set(parameters))
    generators = np.vstack([np.arange(n)] + [np.full(n, c) for c in constants])
    terms: List[Formula] = [Variable("p1")] + [Variable(f"c{c}") for c in constants]
    closure = generate_rows(
        algebra.signature, [Segment(algebra, n)], generators, terms, limits=limits
    )
    return closure.rows


def leibniz_by_polynomials(m: Matrix, limits: Limits = DEFAULT_LIMITS) -> Partition:
    """a and b are related iff every unary polynomial sends both into the
    filter or both out of it."""
    polynomials = unary_polynomials(m.algebra, limits)
    signature = m.designated[polynomials]
    _, inverse = np.unique(signature.T, axis=0, return_inverse=True)
    return Partition.from_labels(inverse.reshape(-1).tolist())


def reduce_with_projection(m: Matrix) -> Tuple[Matrix, Tuple[int, ...]]:
    congruence = leibniz_congruence(m)
    algebra, projection = quotient(m.algebra, congruence)
    return Matrix(algebra, frozenset(projection[a] for a in m.filter)), projection


def reduce(m: Matrix) -> Matrix:
    return reduce_with_projection(m)[0]


def gmatrix_leibniz_congruence(gm: GMatrix) -> Partition:
    """The largest congruence compatible with every filter."""
    n = gm.algebra.size
    return largest_congruence_below(
        gm.algebra, meet_all(n, [Partition.from_subset(n, f) for f in gm.filters])
    )


def reduce_gmatrix(gm: GMatrix) -> GMatrix:
    algebra, projection = quotient(gm.algebra, gmatrix_leibniz_congruence(gm))
    filters = tuple(frozenset(projection[a] for a in f) for f in gm.filters)
    return GMatrix(algebra, tuple(dict.fromkeys(filters)))


@dataclass(frozen=True)
class TheoryOnReduct:
    """A theory of a matrix's consequence, restricted to k-variable term functions.

    A theory is fixed by its points, the tuples of A^k at which all its members
    are designated. Whether g follows from the theory plus other formulas only
    depends on the values of g at those points, so the relations below are
    computed on the projection of F(k) onto them and pulled back.
    """

    matrix: Matrix
    functions: TermFunctionAlgebra
    members: FrozenSet[int]

    def __post_init__(self) -> None:
        if reduct_closure(self.matrix, self.functions, self.members) != self.members:
            raise PreconditionError("the set is not closed under the consequence")

    @cached_property
    def designation(self) -> np.ndarray:
        return self.functions.designation(self.matrix.designated)

    @cached_property
    def points(self) -> np.ndarray:
        if not self.members:
            return np.ones(self.designation.shape[1], dtype=bool)
        return self.designation[sorted(self.members)].all(axis=0)

    @cached_property
    def restriction(self) -> Tuple[Subpower, np.ndarray]:
        """F(k) projected onto the points, with the projection of each element."""
        return self.functions.subpower.restrict(np.nonzero(self.points)[0])

    @property
    def restricted_designation(self) -> np.ndarray:
        restricted, _ = self.restriction
        return self.matrix.designated[restricted.rows]

    def formulas(self) -> List[Formula]:
        return [self.functions.representatives[g] for g in sorted(self.members)]


def theories_on_reduct(
    m: Matrix, k: int, limits: Limits = DEFAULT_LIMITS
) -> List[TheoryOnReduct]:
    functions = term_function_algebra(m.algebra, k, limits)
    return [
        TheoryOnReduct(m, functions, members)
        for members in closed_sets(m, k, limits, functions)
    ]


def theorem_theory(m: Matrix, k: int, limits: Limits = DEFAULT_LIMITS) -> TheoryOnReduct:
    functions = term_function_algebra(m.algebra, k, limits)
    return TheoryOnReduct(m, functions, reduct_closure(m, functions, ()))


def _pattern_partition(table: np.ndarray) -> Partition:
    """Rows with equal entries share a block."""
    if not table.shape[1]:
        return Partition.total(len(table))
    _, inverse = np.unique(table, axis=0, return_inverse=True)
    return Partition.from_labels(inverse.reshape(-1).tolist())


def _pull_back(theory: TheoryOnReduct, partition: Partition) -> Partition:
    _, projection = theory.restriction
    return Partition.from_labels(partition.labels[projection].tolist())


def frege_relation(theory: TheoryOnReduct) -> Partition:
    """g and h are related iff each follows from the theory plus the other,
    that is iff they are designated at the same points."""
    return _pattern_partition(theory.designation[:, theory.points])


def _restricted_frege(theory: TheoryOnReduct) -> Partition:
    return _pattern_partition(theory.restricted_designation)


@lru_cache(maxsize=16)
def _point_relations(m: Matrix, k: int, limits: Limits) -> np.ndarray:
    """Row t labels the elements of A by their designation under every unary
    polynomial whose parameters are coordinates of the tuple t.

    A unary polynomial of F(k) is a (k+1)-ary term with the generators filled
    in, and at t it acts as a polynomial of A with parameters t1..tk. So two
    term functions are Suszko-related iff at every point t their values carry
    the same row-t label."""
    algebra = m.algebra
    tuples = projection_rows(algebra.size, k).T
    found: Dict[Tuple[int, ...], np.ndarray] = {}
    rows = []
    for t in tuples.tolist():
        parameters = tuple(sorted(set(t)))
        if parameters not in found:
            polynomials = unary_polynomials(algebra, limits, parameters)
            found[parameters] = _pattern_partition(
                m.designated[polynomials].T
            ).labels
        rows.append(found[parameters])
    return np.array(rows, dtype=np.int64).reshape(len(tuples), algebra.size)


def _restricted_suszko(theory: TheoryOnReduct, limits: Limits) -> Partition:
    restricted, _ = theory.restriction
    relations = _point_relations(theory.matrix, theory.functions.arity, limits)
    relations = relations[theory.points]
    keys = relations[np.arange(len(relations))[None, :], restricted.rows]
    return _pattern_partition(keys)


def _restricted_leibniz(theory: TheoryOnReduct, limits: Limits) -> Partition:
    restricted, _ = theory.restriction
    inside = theory.restricted_designation.all(axis=1)
    return largest_congruence_below(
        restricted, Partition.from_labels(inside.astype(np.int64).tolist()), limits
    )


def _restricted_quotient(
    theory: TheoryOnReduct, congruence: Partition, limits: Limits
) -> Matrix:
    restricted, _ = theory.restriction
    algebra, projection = restricted.quotient(congruence, limits)
    inside = np.nonzero(theory.restricted_designation.all(axis=1))[0]
    return Matrix(algebra, frozenset(projection[g] for g in inside.tolist()))


def suszko_congruence(theory: TheoryOnReduct, limits: Limits = DEFAULT_LIMITS) -> Partition:
    """The largest congruence of F(k) inside the Frege relation."""
    return _pull_back(theory, _restricted_suszko(theory, limits))


def leibniz_on_reduct(theory: TheoryOnReduct, limits: Limits = DEFAULT_LIMITS) -> Partition:
    return _pull_back(theory, _restricted_leibniz(theory, limits))


def tarski_congruence(m: Matrix, k: int, limits: Limits = DEFAULT_LIMITS) -> Partition:
    theories = theories_on_reduct(m, k, limits)
    return meet_all(
        theories[0].functions.size, [suszko_congruence(t, limits) for t in theories]
    )


def suszko_matrix(theory: TheoryOnReduct, limits: Limits = DEFAULT_LIMITS) -> Matrix:
    return _restricted_quotient(theory, _restricted_suszko(theory, limits), limits)


def leibniz_matrix(theory: TheoryOnReduct, limits: Limits = DEFAULT_LIMITS) -> Matrix:
    return _restricted_quotient(theory, _restricted_leibniz(theory, limits), limits)


def tarski_gmatrix(m: Matrix, k: int, limits: Limits = DEFAULT_LIMITS) -> GMatrix:
    theories = theories_on_reduct(m, k, limits)
    functions = theories[0].functions
    tarski = meet_all(functions.size, [suszko_congruence(t, limits) for t in theories])
    algebra, projection = functions.subpower.quotient(tarski, limits)
    filters = tuple(frozenset(projection[g] for g in t.members) for t in theories)
    return GMatrix(algebra, tuple(dict.fromkeys(filters)))


@dataclass(frozen=True)
class ChainRow:
    theory: TheoryOnReduct
    frege: Partition
    suszko: Partition
    leibniz: Partition

    @property
    def suszko_compatible(self) -> bool:
        return compatible(self.suszko, self.theory.members)


@dataclass(frozen=True)
class CongruenceChain:
    tarski: Partition
    rows: Tuple[ChainRow, ...]

    def violations(self) -> List[str]:
        """Human-readable failures of the inclusion chain; empty when it holds."""
        found = []
        for index, row in enumerate(self.rows):
            if not self.tarski.refines(row.suszko):
                found.append(f"theory {index}: Tarski does not refine Suszko")
            if not row.suszko.refines(row.frege):
                found.append(f"theory {index}: Suszko does not refine Frege")
            if not row.suszko.refines(row.leibniz):
                found.append(f"theory {index}: Suszko does not refine Leibniz")
            if not row.suszko_compatible:
                found.append(f"theory {index}: Suszko is not compatible with the theory")
        return found


def congruence_chain(m: Matrix, k: int, limits: Limits = DEFAULT_LIMITS) -> CongruenceChain:
    theories = theories_on_reduct(m, k, limits)
    rows = tuple(
        ChainRow(
            t,
            frege_relation(t),
            suszko_congruence(t, limits),
            leibniz_on_reduct(t, limits),
        )
        for t in theories
    )
    tarski = meet_all(theories[0].functions.size, [r.suszko for r in rows])
    _logger.debug("congruence chain over %d closed sets", len(rows))
    return CongruenceChain(tarski, rows)


def fregean_failure(
    m: Matrix, k: int, limits: Limits = DEFAULT_LIMITS
) -> Optional[TheoryOnReduct]:
    """The first closed set whose Frege relation is not a congruence."""
    for theory in theories_on_reduct(m, k, limits):
        if _restricted_frege(theory) != _restricted_suszko(theory, limits):
            return theory
    return None


def is_fregean(m: Matrix, k: int, limits: Limits = DEFAULT_LIMITS) -> bool:
    return fregean_failure(m, k, limits) is None


def is_selfextensional(m: Matrix, k: int, limits: Limits = DEFAULT_LIMITS) -> bool:
    theory = theorem_theory(m, k, limits)
    return _restricted_frege(theory) == _restricted_suszko(theory, limits)


def _check_arrow(m: Matrix, arrow: str) -> None:
    if arrow not in m.algebra.signature or m.algebra.signature.arity(arrow) != 2:
        raise PreconditionError(f"{arrow!r} is not a binary connective of the signature")


def rasiowa_relation(
    m: Matrix, arrow: str, k: int, limits: Limits = DEFAULT_LIMITS
) -> Relation:
    _check_arrow(m, arrow)
    reduct = lindenbaum_reduct(m, k, limits)
    n = reduct.functions.size
    table = reduct.functions.subpower.operation_table(arrow, limits).reshape(n, n)
    tautology = np.zeros(n, dtype=bool)
    tautology[list(reduct.filter)] = True
    forward = tautology[table]
    return Relation.from_matrix(forward & forward.T)


@dataclass(frozen=True)
class ImplicativeVerdict:
    holds: bool
    clause: Optional[str] = None
    s_filter: Optional[FrozenSet[int]] = None
    witness: Optional[Dict[str, int]] = None
    connective: Optional[str] = None

    def __bool__(self) -> bool:
        return self.holds


CLAUSES = ("i1", "i2", "i3", "i4", "i5")


def _clause_witness(
    algebra: FiniteAlgebra, arrow: str, designated: np.ndarray, clause: str
) -> Optional[Tuple[Dict[str, int], Optional[str]]]:
    n = algebra.size
    imp = algebra.arrays[arrow].reshape(n, n)
    inside = designated[imp]
    if clause == "i1":
        for a in range(n):
            if not inside[a, a]:
                return {"a": a}, None
    elif clause == "i2":
        for a, b in itertools.product(range(n), repeat=2):
            if designated[b] and not inside[a, b]:
                return {"a": a, "b": b}, None
    elif clause == "i3":
        for a, b, c in itertools.product(range(n), repeat=3):
            if inside[a, b] and inside[b, c] and not inside[a, c]:
                return {"a": a, "b": b, "c": c}, None
    elif clause == "i4":
        for a, b in itertools.product(range(n), repeat=2):
            if designated[a] and inside[a, b] and not designated[b]:
                return {"a": a, "b": b}, None
    else:
        related = inside & inside.T
        for connective in algebra.signature:
            r = connective.arity
            for values in itertools.product(range(n), repeat=2 * r):
                left, right = values[:r], values[r:]
                if not all(related[x, y] for x, y in zip(left, right)):
                    continue
                if not inside[algebra.apply(connective.symbol, *left),
                              algebra.apply(connective.symbol, *right)]:
                    witness = {f"a{i + 1}": x for i, x in enumerate(left)}
                    witness.update({f"b{i + 1}": y for i, y in enumerate(right)})
                    return witness, connective.symbol
    return None


def is_implicative_extensional(
    m: Matrix, arrow: str, limits: Limits = DEFAULT_LIMITS
) -> ImplicativeVerdict:
    """Check the five implicative-extensional conditions over every S-filter
    of the matrix's algebra (the algebraic reading of "every theory").

    Violations are reported for the first failing condition, then the first
    S-filter by (cardinality, members), then the least witness."""
    _check_arrow(m, arrow)
    filters = s_filters(m, limits)
    masks = []
    for members in filters:
        mask = np.zeros(m.algebra.size, dtype=bool)
        mask[list(members)] = True
        masks.append(mask)
    for clause in CLAUSES:
        for members, mask in zip(filters, masks):
            found = _clause_witness(m.algebra, arrow, mask, clause)
            if found is not None:
                witness, connective = found
                _logger.info("condition %s fails on S-filter %s", clause, sorted(members))
                return ImplicativeVerdict(False, clause, members, witness, connective)
    return ImplicativeVerdict(True)
