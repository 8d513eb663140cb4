"""Logical matrices, g-matrices and their consequence relations.

Theories are handled at finite scale on term functions: over k variables
every formula is, for the purposes of a finite matrix, nothing more than the
function A^k -> A it induces, so the k-variable fragment of the formula algebra
collapses onto the finite algebra F(k) of those functions.
"""

import logging
from dataclasses import dataclass, field
from typing import (
    Dict,
    FrozenSet,
    Iterable,
    List,
    Mapping,
    Optional,
    Sequence,
    Tuple,
    Union,
)

import numpy as np

from ..config import DEFAULT_LIMITS, Limits
from ..errors import CapExceededError, PreconditionError, SignatureError
from .algebra import (
    FiniteAlgebra,
    RowClosure,
    Segment,
    Subpower,
    generate_rows,
    projection_rows,
    valuation_at,
    valuation_columns,
)
from .language import (
    Application,
    Formula,
    Variable,
    check_formula,
    formulas_upto,
    generated_variables,
    sorted_variables,
    vars_of,
)

_logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Matrix:
    """An algebra with a set of designated elements.

    The constructor accepts an empty filter: the least theory of a reduct is
    empty for a system without theorems, and `leibniz_matrix` or
    `suszko_matrix` build matrices on it. Matrices read from fixtures go
    through `matrix_from_dict`, which rejects an empty filter.
    """

    algebra: FiniteAlgebra
    filter: FrozenSet[int]

    def __post_init__(self) -> None:
        members = frozenset(int(a) for a in self.filter)
        if any(not 0 <= a < self.algebra.size for a in members):
            raise SignatureError("filter leaves the universe")
        object.__setattr__(self, "filter", members)

    @property
    def designated(self) -> np.ndarray:
        mask = np.zeros(self.algebra.size, dtype=bool)
        mask[list(self.filter)] = True
        return mask

    def as_gmatrix(self) -> "GMatrix":
        return GMatrix(self.algebra, (self.filter,))


@dataclass(frozen=True)
class GMatrix:
    algebra: FiniteAlgebra
    filters: Tuple[FrozenSet[int], ...]

    def __post_init__(self) -> None:
        if not self.filters:
            raise SignatureError("a g-matrix needs at least one filter")
        filters = tuple(frozenset(int(a) for a in f) for f in self.filters)
        for members in filters:
            if any(not 0 <= a < self.algebra.size for a in members):
                raise SignatureError("filter leaves the universe")
        object.__setattr__(self, "filters", filters)

    def matrices(self) -> List[Matrix]:
        return [Matrix(self.algebra, f) for f in self.filters]

    def designated(self) -> np.ndarray:
        """One boolean row per filter."""
        mask = np.zeros((len(self.filters), self.algebra.size), dtype=bool)
        for row, members in enumerate(self.filters):
            mask[row, list(members)] = True
        return mask


def as_gmatrix(structure: Union[Matrix, GMatrix]) -> GMatrix:
    return structure.as_gmatrix() if isinstance(structure, Matrix) else structure


@dataclass(frozen=True)
class Verdict:
    """Outcome of a consequence check; a failed check names the least
    counter-valuation in enumeration order and the filter it refutes."""

    holds: bool
    valuation: Optional[Mapping[str, int]] = None
    filter_index: Optional[int] = None

    def __bool__(self) -> bool:
        return self.holds


def _check_all(algebra: FiniteAlgebra, formulas: Iterable[Formula]) -> None:
    for formula in formulas:
        check_formula(algebra.signature, formula)


def gmatrix_consequence(
    gm: Union[GMatrix, Matrix],
    premises: Sequence[Formula],
    conclusion: Formula,
    limits: Limits = DEFAULT_LIMITS,
) -> Verdict:
    gm = as_gmatrix(gm)
    algebra = gm.algebra
    _check_all(algebra, list(premises) + [conclusion])
    names = sorted_variables(vars_of(list(premises) + [conclusion]))
    columns, count = valuation_columns(algebra.size, names, limits)
    premise_values = [algebra.evaluate_columns(p, columns, count) for p in premises]
    conclusion_value = algebra.evaluate_columns(conclusion, columns, count)
    for index, mask in enumerate(gm.designated()):
        accepted = np.ones(count, dtype=bool)
        for values in premise_values:
            accepted &= mask[values]
        failing = np.nonzero(accepted & ~mask[conclusion_value])[0]
        if len(failing):
            return Verdict(False, valuation_at(algebra.size, names, int(failing[0])), index)
    return Verdict(True)


def matrix_consequence(
    m: Matrix,
    premises: Sequence[Formula],
    conclusion: Formula,
    limits: Limits = DEFAULT_LIMITS,
) -> Verdict:
    verdict = gmatrix_consequence(m, premises, conclusion, limits)
    return Verdict(verdict.holds, verdict.valuation)


def minimal_premises(
    m: Union[GMatrix, Matrix],
    premises: Sequence[Formula],
    conclusion: Formula,
    limits: Limits = DEFAULT_LIMITS,
) -> Tuple[Formula, ...]:
    """Drop premises one at a time, in order, while the consequence survives."""
    kept = list(dict.fromkeys(premises))
    if not gmatrix_consequence(m, kept, conclusion, limits):
        raise PreconditionError("the premises do not entail the conclusion")
    position = 0
    while position < len(kept):
        trial = kept[:position] + kept[position + 1:]
        if gmatrix_consequence(m, trial, conclusion, limits):
            kept = trial
        else:
            position += 1
    return tuple(kept)


def paired_closure(
    algebras: Sequence[FiniteAlgebra],
    k: int,
    max_depth: Optional[int] = None,
    limits: Limits = DEFAULT_LIMITS,
) -> RowClosure:
    """Close the k projections of every algebra in lockstep, so each element is
    the tuple of term functions one formula induces on all the algebras."""
    signature = algebras[0].signature
    if any(a.signature != signature for a in algebras):
        raise SignatureError("the algebras do not share a signature")
    if k < 1 and not signature.constants():
        raise PreconditionError("no variables and no constants: nothing to generate")
    widths = [a.size ** k for a in algebras]
    if sum(widths) > limits.max_cells:
        raise CapExceededError(
            f"tables of {k}-ary term functions", sum(widths), limits.max_cells, "--max-cells"
        )
    segments = [Segment(a, w) for a, w in zip(algebras, widths)]
    generators = np.hstack([projection_rows(a.size, k) for a in algebras])
    terms: List[Formula] = [Variable(v) for v in generated_variables(k)]
    return generate_rows(signature, segments, generators, terms, max_depth, limits)


@dataclass
class TermFunctionAlgebra:
    """The k-ary term functions of a finite algebra, in order of discovery.

    Row g of `tables` lists g(t) for the tuples t of A^k in lexicographic order;
    `representatives[g]` is a formula over p1..pk of least depth inducing g.
    """

    base: FiniteAlgebra
    arity: int
    closure: RowClosure = field(repr=False)
    _subpower: Optional[Subpower] = field(default=None, repr=False)
    _algebra: Optional[FiniteAlgebra] = field(default=None, repr=False)

    @property
    def tables(self) -> np.ndarray:
        return self.closure.rows

    @property
    def size(self) -> int:
        return len(self.closure)

    @property
    def representatives(self) -> List[Formula]:
        return self.closure.terms

    @property
    def depths(self) -> List[int]:
        return self.closure.depths

    @property
    def generator_indices(self) -> Tuple[int, ...]:
        rows = projection_rows(self.base.size, self.arity)
        if not len(rows):
            return ()
        return tuple(self.closure.lookup(rows).tolist())

    def index_of(self, table: Sequence[int]) -> int:
        return int(self.closure.lookup(np.asarray(table, dtype=np.int64))[0])

    def function_of(self, formula: Formula) -> np.ndarray:
        names = generated_variables(self.arity)
        extra = vars_of(formula) - set(names)
        if extra:
            raise PreconditionError(
                f"variables {sorted(extra)} are outside p1..p{self.arity}"
            )
        rows = projection_rows(self.base.size, self.arity)
        columns = {name: rows[i] for i, name in enumerate(names)}
        return self.base.evaluate_columns(formula, columns, rows.shape[1])

    def element_of(self, formula: Formula) -> int:
        return self.index_of(self.function_of(formula))

    def designation(self, designated: np.ndarray) -> np.ndarray:
        """D[g, t] is true when g(t) is designated."""
        return np.asarray(designated, dtype=bool)[self.tables]

    @property
    def subpower(self) -> Subpower:
        """The term functions as a subpower of A^(A^k), operations acting pointwise."""
        if self._subpower is None:
            labels = [str(r) for r in self.representatives]
            self._subpower = Subpower(self.base, self.tables, labels)
        return self._subpower

    def as_algebra(self, limits: Limits = DEFAULT_LIMITS) -> FiniteAlgebra:
        """The term functions with explicit tables. Needs |F(k)|^r table entries
        per r-ary connective; most callers should stay on `subpower`."""
        if self._algebra is None:
            self._algebra = self.subpower.as_algebra(limits)
        return self._algebra


def term_function_algebra(
    algebra: FiniteAlgebra, k: int, limits: Limits = DEFAULT_LIMITS
) -> TermFunctionAlgebra:
    closure = paired_closure([algebra], k, limits=limits)
    _logger.debug("F(%d) over %d elements has %d term functions", k, algebra.size, len(closure))
    return TermFunctionAlgebra(algebra, k, closure)


@dataclass
class LindenbaumReduct:
    """The term functions of a matrix's algebra with the tautologies designated."""

    source: Matrix
    functions: TermFunctionAlgebra
    filter: FrozenSet[int]

    def matrix(self, limits: Limits = DEFAULT_LIMITS) -> Matrix:
        return Matrix(self.functions.as_algebra(limits), self.filter)


def tautology_mask(m: Matrix, functions: TermFunctionAlgebra) -> np.ndarray:
    return functions.designation(m.designated).all(axis=1)


def lindenbaum_reduct(
    m: Matrix, k: int, limits: Limits = DEFAULT_LIMITS
) -> LindenbaumReduct:
    functions = term_function_algebra(m.algebra, k, limits)
    members = frozenset(np.nonzero(tautology_mask(m, functions))[0].tolist())
    return LindenbaumReduct(m, functions, members)


def _to_bits(mask: np.ndarray) -> int:
    return int.from_bytes(np.packbits(mask, bitorder="little").tobytes(), "little")


def _from_bits(bits: int) -> FrozenSet[int]:
    members = []
    position = 0
    while bits:
        if bits & 1:
            members.append(position)
        bits >>= 1
        position += 1
    return frozenset(members)


def closed_sets(
    m: Matrix,
    k: int,
    limits: Limits = DEFAULT_LIMITS,
    functions: Optional[TermFunctionAlgebra] = None,
) -> List[FrozenSet[int]]:
    """Every theory of the k-variable reduct: intersections of the sets
    Th_t = {g : g(t) designated} over sets T of tuples, the full set (T empty)
    included. Ordered by cardinality, then by sorted members."""
    if functions is None:
        functions = term_function_algebra(m.algebra, k, limits)
    table = functions.designation(m.designated)
    full = (1 << functions.size) - 1
    found = {full}
    for column in sorted({_to_bits(table[:, t]) for t in range(table.shape[1])}):
        found |= {theory & column for theory in found}
        if len(found) > limits.max_search:
            raise CapExceededError("closed sets", len(found), limits.max_search, "--max-search")
    theories = [_from_bits(bits) for bits in found]
    theories.sort(key=lambda s: (len(s), sorted(s)))
    _logger.debug("%d closed sets over %d term functions", len(theories), functions.size)
    return theories


def reduct_closure(
    m: Matrix, functions: TermFunctionAlgebra, members: Iterable[int]
) -> FrozenSet[int]:
    """The least theory of the reduct containing `members`."""
    table = functions.designation(m.designated)
    chosen = sorted(set(members))
    holds = table[chosen].all(axis=0) if chosen else np.ones(table.shape[1], dtype=bool)
    return frozenset(np.nonzero(table[:, holds].all(axis=1))[0].tolist())


def is_consistent(members: Iterable[int], functions: TermFunctionAlgebra) -> bool:
    return len(set(members)) < functions.size


def all_closed_sets_gmatrix(
    m: Matrix, k: int, limits: Limits = DEFAULT_LIMITS
) -> GMatrix:
    functions = term_function_algebra(m.algebra, k, limits)
    return GMatrix(functions.as_algebra(limits), tuple(closed_sets(m, k, limits, functions)))


def theorems_upto(
    m: Matrix, k: int, depth: int, limits: Limits = DEFAULT_LIMITS
) -> List[Formula]:
    """Tautologies over p1..pk of depth at most `depth`, in enumeration order."""
    algebra = m.algebra
    names = generated_variables(k)
    columns, count = valuation_columns(algebra.size, names, limits)
    designated = m.designated
    values: Dict[Formula, np.ndarray] = {}
    theorems = []
    for seen, formula in enumerate(formulas_upto(algebra.signature, names, depth), 1):
        if seen > limits.max_formulas:
            raise CapExceededError(
                f"formulas of depth {depth} over {k} variables",
                seen,
                limits.max_formulas,
                "--max-formulas",
            )
        if isinstance(formula, Variable):
            value = columns[formula.name]
        else:
            assert isinstance(formula, Application)
            table = algebra.arrays[formula.connective]
            if not formula.arguments:
                value = np.full(count, table[0], dtype=np.int64)
            else:
                index = np.zeros(count, dtype=np.int64)
                for argument in formula.arguments:
                    index = index * algebra.size + values[argument]
                value = table[index]
        values[formula] = value
        if designated[value].all():
            theorems.append(formula)
    return theorems


@dataclass(frozen=True)
class AdequacyVerdict:
    holds: bool
    witness: Optional[Formula] = None
    theorem_of_reference: Optional[bool] = None

    def __bool__(self) -> bool:
        return self.holds


def _reduct_theorems(reduct: LindenbaumReduct, rows: np.ndarray, k: int) -> np.ndarray:
    """Whether the term function of each k-variable row of the source algebra
    is designated in the reduct.

    Tautologies are closed under substitution, so a formula is a tautology of
    the reduct exactly when its own term function is designated."""
    arity = reduct.functions.arity
    if k > arity:
        raise PreconditionError(
            f"the reduct has {arity} variables, formulas over {k} were asked for"
        )
    n = reduct.source.algebra.size
    # a function of p1..pk read as a function of p1..p_arity
    lifted = rows[:, np.arange(n ** arity) // n ** (arity - k)]
    designated = np.zeros(reduct.functions.size, dtype=bool)
    designated[list(reduct.filter)] = True
    return designated[reduct.functions.subpower.locate(lifted)]


def is_weakly_adequate(
    m: Union[Matrix, LindenbaumReduct],
    reference: Matrix,
    k: int,
    depth: int,
    limits: Limits = DEFAULT_LIMITS,
) -> AdequacyVerdict:
    """Compare tautologies over p1..pk up to `depth`, sweeping the pairs of term
    functions such formulas induce rather than the formulas themselves.

    A Lindenbaum reduct is checked through the term functions of its source
    algebra, without building its operation tables."""
    source = m.source.algebra if isinstance(m, LindenbaumReduct) else m.algebra
    closure = paired_closure([source, reference.algebra], k, depth, limits)
    if isinstance(m, LindenbaumReduct):
        mine = _reduct_theorems(m, closure.segment_rows(0), k)
    else:
        mine = m.designated[closure.segment_rows(0)].all(axis=1)
    theirs = reference.designated[closure.segment_rows(1)].all(axis=1)
    differ = np.nonzero(mine != theirs)[0]
    if not len(differ):
        return AdequacyVerdict(True)
    first = int(differ[0])
    return AdequacyVerdict(False, closure.terms[first], bool(theirs[first]))
