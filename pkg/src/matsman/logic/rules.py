"""Hilbert-style rule sets: matrix models, bounded proof search and
independence certificates.

Rules are schemata. A rule with premises A1, ..., An and conclusion B licenses
every substitution instance of B once the matching instances of the premises
are available; a rule without premises is an axiom.
"""

import itertools
import logging
from dataclasses import dataclass, field
from typing import (
    Dict,
    FrozenSet,
    Iterable,
    Iterator,
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
from .algebra import FiniteAlgebra, projection_rows
from .language import (
    Application,
    Formula,
    Signature,
    Substitution,
    Variable,
    check_formula,
    format_formula,
    format_sequent,
    sorted_variables,
    subformulas,
    substitute,
    vars_of,
)
from .matrix import GMatrix, Matrix, gmatrix_consequence

_logger = logging.getLogger(__name__)

# rule name (None for a hypothesis), premise formulas, substitution
_Why = Tuple[Optional[str], Tuple[Formula, ...], Optional[Substitution]]


@dataclass(frozen=True)
class Rule:
    name: str
    premises: Tuple[Formula, ...]
    conclusion: Formula

    @property
    def is_axiom(self) -> bool:
        return not self.premises

    @property
    def formulas(self) -> Tuple[Formula, ...]:
        return self.premises + (self.conclusion,)

    @property
    def connectives(self) -> FrozenSet[str]:
        found = set()
        for formula in self.formulas:
            for node in subformulas(formula):
                if isinstance(node, Application):
                    found.add(node.connective)
        return frozenset(found)

    def __str__(self) -> str:
        return f"{self.name}: {format_sequent(self.premises, self.conclusion)}"


@dataclass(frozen=True)
class RuleSet:
    signature: Signature
    rules: Tuple[Rule, ...]

    def __post_init__(self) -> None:
        if not self.rules:
            raise SignatureError("a rule set needs at least one rule")
        names = [r.name for r in self.rules]
        duplicates = sorted({n for n in names if names.count(n) > 1})
        if duplicates:
            raise SignatureError(f"rule names used twice: {duplicates}")
        for rule in self.rules:
            for formula in rule.formulas:
                check_formula(self.signature, formula)

    @property
    def names(self) -> Tuple[str, ...]:
        return tuple(r.name for r in self.rules)

    def rule(self, name: str) -> Rule:
        for rule in self.rules:
            if rule.name == name:
                return rule
        raise PreconditionError(f"no rule named {name!r}")

    def without(self, name: str) -> "RuleSet":
        self.rule(name)
        return RuleSet(self.signature, tuple(r for r in self.rules if r.name != name))


@dataclass(frozen=True)
class ModelVerdict:
    holds: bool
    rule: Optional[str] = None
    valuation: Optional[Mapping[str, int]] = None

    def __bool__(self) -> bool:
        return self.holds


def is_model(
    m: Union[Matrix, GMatrix], rules: RuleSet, limits: Limits = DEFAULT_LIMITS
) -> ModelVerdict:
    """Every rule preserves designation under every valuation."""
    if m.algebra.signature != rules.signature:
        raise SignatureError(
            f"the matrix is over {m.algebra.signature.name!r}, "
            f"the rules over {rules.signature.name!r}"
        )
    for rule in rules.rules:
        verdict = gmatrix_consequence(m, rule.premises, rule.conclusion, limits)
        if not verdict:
            return ModelVerdict(False, rule.name, verdict.valuation)
    return ModelVerdict(True)


@dataclass(frozen=True)
class Step:
    formula: Formula
    # None for a hypothesis
    rule: Optional[str] = None
    premises: Tuple[int, ...] = ()
    substitution: Optional[Substitution] = field(default=None, hash=False)

    def justification(self) -> str:
        if self.rule is None:
            return "hypothesis"
        if not self.premises:
            return f"{self.rule}"
        return f"{self.rule} from " + ", ".join(str(i + 1) for i in self.premises)


@dataclass(frozen=True)
class Derivation:
    steps: Tuple[Step, ...]

    def __len__(self) -> int:
        return len(self.steps)

    def __iter__(self) -> Iterator[Step]:
        return iter(self.steps)

    @property
    def conclusion(self) -> Formula:
        return self.steps[-1].formula

    def lines(self) -> List[str]:
        return [
            f"{i + 1}. {format_formula(s.formula)}    [{s.justification()}]"
            for i, s in enumerate(self.steps)
        ]


@dataclass(frozen=True)
class DeriveBounds:
    depth: int = 5
    max_size: int = 20

    def __post_init__(self) -> None:
        if self.depth < 1 or self.max_size < 1:
            raise PreconditionError("derivation bounds must be positive")


def match(
    pattern: Formula, formula: Formula, binding: Mapping[str, Formula]
) -> Optional[Dict[str, Formula]]:
    """Extend `binding` so that the pattern, instantiated, equals the formula."""
    if isinstance(pattern, Variable):
        bound = binding.get(pattern.name)
        if bound is None:
            extended = dict(binding)
            extended[pattern.name] = formula
            return extended
        return dict(binding) if bound == formula else None
    assert isinstance(pattern, Application)
    if (
        not isinstance(formula, Application)
        or formula.connective != pattern.connective
        or len(formula.arguments) != len(pattern.arguments)
    ):
        return None
    current: Optional[Dict[str, Formula]] = dict(binding)
    for sub_pattern, sub_formula in zip(pattern.arguments, formula.arguments):
        assert current is not None
        current = match(sub_pattern, sub_formula, current)
        if current is None:
            return None
    return current


def _premise_matches(
    rule: Rule, known: Sequence[Formula], known_set: FrozenSet[Formula]
) -> Iterator[Tuple[Dict[str, Formula], Tuple[Formula, ...]]]:
    order = sorted(range(len(rule.premises)), key=lambda i: -rule.premises[i].size)
    chosen: Dict[int, Formula] = {}

    def walk(position: int, binding: Dict[str, Formula]) -> Iterator[
        Tuple[Dict[str, Formula], Tuple[Formula, ...]]
    ]:
        if position == len(order):
            yield binding, tuple(chosen[i] for i in range(len(rule.premises)))
            return
        index = order[position]
        pattern = rule.premises[index]
        if vars_of(pattern) <= binding.keys():
            instance = substitute(Substitution(binding), pattern)
            if instance in known_set:
                chosen[index] = instance
                yield from walk(position + 1, binding)
            return
        for formula in known:
            extended = match(pattern, formula, binding)
            if extended is not None:
                chosen[index] = formula
                yield from walk(position + 1, extended)

    yield from walk(0, {})


def _substitution_pool(
    rules: RuleSet, hypotheses: Iterable[Formula], goal: Formula, max_size: int
) -> List[Formula]:
    found = set()
    for formula in list(hypotheses) + [goal] + [f for r in rules.rules for f in r.formulas]:
        found.update(s for s in subformulas(formula) if s.size <= max_size)
    return sorted(found, key=lambda f: (f.size, format_formula(f)))


def _extract(
    goal: Formula,
    justification: Mapping[Formula, _Why],
) -> Derivation:
    lines: Dict[Formula, int] = {}
    steps: List[Step] = []

    def visit(formula: Formula) -> None:
        if formula in lines:
            return
        rule, premises, substitution = justification[formula]
        for premise in premises:
            visit(premise)
        lines[formula] = len(steps)
        steps.append(Step(formula, rule, tuple(lines[p] for p in premises), substitution))

    visit(goal)
    return Derivation(tuple(steps))


def derive(
    rules: RuleSet,
    hypotheses: Iterable[Formula],
    goal: Formula,
    bounds: DeriveBounds = DeriveBounds(),
    limits: Limits = DEFAULT_LIMITS,
) -> Optional[Derivation]:
    """Forward search for a linear derivation of `goal`.

    Each round applies every rule to the formulas known before the round,
    filling conclusion variables that no premise binds from the subformulas of
    the hypotheses, the goal and the rules. Instances larger than
    `bounds.max_size` are discarded. None means "not found within bounds".
    """
    given = list(dict.fromkeys(hypotheses))
    for formula in given + [goal]:
        check_formula(rules.signature, formula)
    justification: Dict[Formula, _Why] = {}
    known: List[Formula] = []

    def add(formula: Formula, why: _Why) -> None:
        if formula in justification or formula.size > bounds.max_size:
            return
        justification[formula] = why
        known.append(formula)
        if len(known) > limits.max_formulas:
            raise CapExceededError(
                "formulas derived during proof search",
                len(known),
                limits.max_formulas,
                "--max-formulas",
            )

    for hypothesis in given:
        add(hypothesis, (None, (), None))
    if goal in justification:
        return _extract(goal, justification)
    pool = _substitution_pool(rules, given, goal, bounds.max_size)
    for round_number in range(1, bounds.depth + 1):
        before = len(known)
        snapshot = list(known)
        snapshot_set = frozenset(snapshot)
        for rule in rules.rules:
            for binding, premises in _premise_matches(rule, snapshot, snapshot_set):
                unbound = sorted_variables(vars_of(rule.conclusion) - binding.keys())
                for values in itertools.product(pool, repeat=len(unbound)):
                    mapping = dict(binding)
                    mapping.update(zip(unbound, values))
                    sigma = Substitution(mapping)
                    add(substitute(sigma, rule.conclusion), (rule.name, premises, sigma))
        _logger.debug("proof search round %d: %d formulas known", round_number, len(known))
        if goal in justification:
            return _extract(goal, justification)
        if len(known) == before:
            break
    return None


def check_derivation(
    rules: RuleSet,
    hypotheses: Iterable[Formula],
    derivation: Derivation,
    goal: Optional[Formula] = None,
) -> bool:
    allowed = set(hypotheses)
    for index, step in enumerate(derivation.steps):
        if step.rule is None:
            if step.formula not in allowed:
                return False
            continue
        if step.rule not in rules.names or step.substitution is None:
            return False
        rule = rules.rule(step.rule)
        if len(step.premises) != len(rule.premises):
            return False
        if any(not 0 <= line < index for line in step.premises):
            return False
        sigma = step.substitution
        for line, premise in zip(step.premises, rule.premises):
            if substitute(sigma, premise) != derivation.steps[line].formula:
                return False
        if substitute(sigma, rule.conclusion) != step.formula:
            return False
    return goal is None or (len(derivation) > 0 and derivation.conclusion == goal)


def substitute_derivation(derivation: Derivation, sigma: Substitution) -> Derivation:
    """The image of a derivation under a substitution; still a derivation, of
    sigma(goal) from the sigma-images of the hypotheses."""
    steps = []
    for step in derivation.steps:
        inner = step.substitution
        steps.append(
            Step(
                substitute(sigma, step.formula),
                step.rule,
                step.premises,
                None if inner is None else sigma.compose(inner),
            )
        )
    return Derivation(tuple(steps))


def _table_values(
    formula: Formula,
    arrays: Mapping[str, np.ndarray],
    size: int,
    columns: Mapping[str, np.ndarray],
    count: int,
) -> np.ndarray:
    if isinstance(formula, Variable):
        return columns[formula.name]
    assert isinstance(formula, Application)
    table = arrays[formula.connective]
    if not formula.arguments:
        return np.full(count, table[0], dtype=np.int64)
    index = np.zeros(count, dtype=np.int64)
    for argument in formula.arguments:
        index = index * size + _table_values(argument, arrays, size, columns, count)
    return table[index]


def _preserving_filters(
    rule: Rule, arrays: Mapping[str, np.ndarray], size: int, masks: np.ndarray
) -> np.ndarray:
    """For each candidate filter, whether the rule preserves it."""
    names = sorted_variables(vars_of(list(rule.formulas)))
    rows = projection_rows(size, len(names))
    count = rows.shape[1]
    columns = {name: rows[i] for i, name in enumerate(names)}
    accepted = np.ones((len(masks), count), dtype=bool)
    for premise in rule.premises:
        accepted &= masks[:, _table_values(premise, arrays, size, columns, count)]
    conclusion = masks[:, _table_values(rule.conclusion, arrays, size, columns, count)]
    return ~(accepted & ~conclusion).any(axis=1)


@dataclass(frozen=True)
class IndependenceResult:
    """`status` is "derivable", "independent" or "not found"."""

    status: str
    derivation: Optional[Derivation] = None
    matrix: Optional[Matrix] = None
    valuation: Optional[Mapping[str, int]] = None
    visited: int = 0


def independence_search(
    rules: RuleSet,
    target: str,
    size_bound: int,
    limits: Limits = DEFAULT_LIMITS,
    bounds: DeriveBounds = DeriveBounds(depth=3),
) -> IndependenceResult:
    """Look for a matrix validating every rule but the target axiom and
    refuting the target, after first trying to derive the target from the rest.

    Matrices are visited by size, then operation tables in lexicographic order
    (connectives in signature order), then filters by cardinality and members.
    A rule is checked as soon as the tables of all its connectives are fixed.
    """
    axiom = rules.rule(target)
    if not axiom.is_axiom:
        raise PreconditionError(f"rule {target!r} has premises; only axioms can be tested")
    others = rules.without(target)
    derivation = derive(others, (), axiom.conclusion, bounds, limits)
    if derivation is not None:
        _logger.info("%s is derivable from the other rules", target)
        return IndependenceResult("derivable", derivation=derivation)

    connectives = rules.signature.connectives
    position = {c.symbol: i for i, c in enumerate(connectives)}

    def ready_at(rule: Rule) -> int:
        return max((position[c] for c in rule.connectives), default=-1)

    visited = 0
    for size in range(1, size_bound + 1):
        subsets = [
            combo
            for count in range(1, size + 1)
            for combo in itertools.combinations(range(size), count)
        ]
        masks = np.zeros((len(subsets), size), dtype=bool)
        for row, combo in enumerate(subsets):
            masks[row, list(combo)] = True
        arrays: Dict[str, np.ndarray] = {}

        def prune(level: int, alive: np.ndarray) -> np.ndarray:
            for rule in others.rules:
                if ready_at(rule) == level and alive.any():
                    alive = alive & _preserving_filters(rule, arrays, size, masks)
            if ready_at(axiom) == level and alive.any():
                alive = alive & ~_preserving_filters(axiom, arrays, size, masks)
            return alive

        def search(level: int, alive: np.ndarray) -> Optional[int]:
            nonlocal visited
            if level == len(connectives):
                hits = np.nonzero(alive)[0]
                return int(hits[0]) if len(hits) else None
            connective = connectives[level]
            for table in itertools.product(range(size), repeat=size ** connective.arity):
                visited += 1
                if visited > limits.max_search:
                    raise CapExceededError(
                        "matrices visited by the independence search",
                        visited,
                        limits.max_search,
                        "--max-search",
                    )
                arrays[connective.symbol] = np.asarray(table, dtype=np.int64)
                narrowed = prune(level, alive)
                if narrowed.any():
                    found = search(level + 1, narrowed)
                    if found is not None:
                        return found
            del arrays[connective.symbol]
            return None

        start = prune(-1, np.ones(len(subsets), dtype=bool))
        hit = search(0, start) if start.any() else None
        if hit is None:
            _logger.debug("no certificate of size %d (%d nodes so far)", size, visited)
            continue
        algebra = FiniteAlgebra(
            rules.signature, size, {s: tuple(a.tolist()) for s, a in arrays.items()}
        )
        matrix = Matrix(algebra, frozenset(subsets[hit]))
        verdict = gmatrix_consequence(matrix, (), axiom.conclusion, limits)
        if not is_model(matrix, others, limits) or verdict:
            raise RuntimeError("independence certificate failed re-verification")
        _logger.info("%s is independent: certificate of size %d", target, size)
        return IndependenceResult(
            "independent", matrix=matrix, valuation=verdict.valuation, visited=visited
        )
    return IndependenceResult("not found", visited=visited)
