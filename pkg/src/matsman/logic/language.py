"""Propositional languages: signatures, the formula algebra, parsing and substitution.

Formulas are immutable trees compared structurally. Construction computes the
size, depth and hash of a node once from its children, so formulas that share
subterms (as witnessing terms built during closures do) stay cheap to compare.
"""

import itertools
import re
from dataclasses import dataclass, field
from typing import (
    Any,
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

import pyparsing as pp

from ..errors import FormulaSyntaxError, SignatureError

IDENTIFIER = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
# generated variables are p1, p2, ...; no connective may take such a name
RESERVED_VARIABLE = re.compile(r"p[0-9]+\Z")


@dataclass(frozen=True)
class Connective:
    symbol: str
    arity: int


@dataclass(frozen=True)
class Signature:
    name: str
    connectives: Tuple[Connective, ...]
    _arities: Dict[str, int] = field(
        init=False, repr=False, compare=False, hash=False, default_factory=dict
    )

    def __post_init__(self) -> None:
        arities: Dict[str, int] = {}
        for connective in self.connectives:
            symbol = connective.symbol
            if not IDENTIFIER.match(symbol):
                raise SignatureError(f"connective {symbol!r} is not an identifier")
            if RESERVED_VARIABLE.match(symbol):
                raise SignatureError(
                    f"connective {symbol!r} collides with the reserved variable names"
                )
            if connective.arity < 0:
                raise SignatureError(f"connective {symbol!r} has negative arity")
            if symbol in arities:
                raise SignatureError(f"connective {symbol!r} declared twice")
            arities[symbol] = connective.arity
        object.__setattr__(self, "_arities", arities)

    @classmethod
    def from_pairs(cls, name: str, pairs: Iterable[Tuple[str, int]]) -> "Signature":
        return cls(name, tuple(Connective(s, a) for s, a in pairs))

    def __contains__(self, symbol: object) -> bool:
        return symbol in self._arities

    def __iter__(self) -> Iterator[Connective]:
        return iter(self.connectives)

    @property
    def symbols(self) -> Tuple[str, ...]:
        return tuple(c.symbol for c in self.connectives)

    def arity(self, symbol: str) -> int:
        try:
            return self._arities[symbol]
        except KeyError:
            raise SignatureError(
                f"unknown connective {symbol!r} in signature {self.name!r}"
            ) from None

    def constants(self) -> Tuple[str, ...]:
        return tuple(c.symbol for c in self.connectives if c.arity == 0)

    def operations(self) -> Tuple[Connective, ...]:
        return tuple(c for c in self.connectives if c.arity > 0)

    def extended(self, symbol: str, arity: int) -> "Signature":
        return Signature(self.name, self.connectives + (Connective(symbol, arity),))

    def fresh_symbol(self, base: str) -> str:
        symbol = base
        while symbol in self:
            symbol += "_"
        return symbol


class Formula:
    """A node of the formula tree: either a Variable or an Application."""

    size: int
    depth: int

    def __str__(self) -> str:
        return format_formula(self)


@dataclass(frozen=True)
class Variable(Formula):
    name: str
    size: int = field(init=False, repr=False, compare=False, default=1)
    depth: int = field(init=False, repr=False, compare=False, default=0)
    _hash: int = field(init=False, repr=False, compare=False, default=0)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_hash", hash(("var", self.name)))

    def __hash__(self) -> int:
        return self._hash


@dataclass(frozen=True)
class Application(Formula):
    connective: str
    arguments: Tuple[Formula, ...] = ()
    size: int = field(init=False, repr=False, compare=False, default=1)
    depth: int = field(init=False, repr=False, compare=False, default=0)
    _hash: int = field(init=False, repr=False, compare=False, default=0)

    def __post_init__(self) -> None:
        if not isinstance(self.arguments, tuple):
            object.__setattr__(self, "arguments", tuple(self.arguments))
        args = self.arguments
        object.__setattr__(self, "size", 1 + sum(a.size for a in args))
        object.__setattr__(self, "depth", 1 + max(a.depth for a in args) if args else 0)
        object.__setattr__(
            self, "_hash", hash((self.connective, tuple(hash(a) for a in args)))
        )

    def __hash__(self) -> int:
        return self._hash


def variable_key(name: str) -> Tuple[Any, ...]:
    """Natural order on variable names: p2 sorts before p10."""
    parts = re.split(r"([0-9]+)", name)
    return tuple(int(part) if i % 2 else part for i, part in enumerate(parts))


def sorted_variables(names: Iterable[str]) -> List[str]:
    return sorted(set(names), key=variable_key)


def generated_variables(k: int) -> List[str]:
    return [f"p{i}" for i in range(1, k + 1)]


def check_formula(signature: Signature, formula: Formula) -> None:
    stack = [formula]
    while stack:
        node = stack.pop()
        if isinstance(node, Application):
            arity = signature.arity(node.connective)
            if arity != len(node.arguments):
                raise SignatureError(
                    f"connective {node.connective!r} expects {arity} arguments, "
                    f"got {len(node.arguments)}"
                )
            stack.extend(node.arguments)
        elif not isinstance(node, Variable):
            raise SignatureError(f"not a formula: {node!r}")


def format_formula(formula: Formula) -> str:
    if isinstance(formula, Variable):
        return formula.name
    assert isinstance(formula, Application)
    if not formula.arguments:
        return formula.connective
    inner = ", ".join(format_formula(a) for a in formula.arguments)
    return f"{formula.connective}({inner})"


def format_sequent(premises: Sequence[Formula], conclusion: Formula) -> str:
    left = ", ".join(format_formula(p) for p in premises)
    return f"{left} |- {format_formula(conclusion)}" if left else f"|- {format_formula(conclusion)}"


def vars_of(x: Union[Formula, Iterable[Formula]]) -> FrozenSet[str]:
    """The variables occurring in a formula or in a set of formulas."""
    stack: List[Formula] = [x] if isinstance(x, Formula) else list(x)
    seen = set()
    names = set()
    while stack:
        node = stack.pop()
        if id(node) in seen:
            continue
        seen.add(id(node))
        if isinstance(node, Variable):
            names.add(node.name)
        else:
            stack.extend(node.arguments)  # type: ignore[attr-defined]
    return frozenset(names)


def subformulas(formula: Formula) -> List[Formula]:
    """Distinct subformulas, children before parents."""
    ordered: List[Formula] = []
    seen = set()

    def visit(node: Formula) -> None:
        if node in seen:
            return
        if isinstance(node, Application):
            for argument in node.arguments:
                visit(argument)
        seen.add(node)
        ordered.append(node)

    visit(formula)
    return ordered


def formulas_upto(
    signature: Signature, variables: Sequence[str], depth: int
) -> Iterator[Formula]:
    """Every formula over `variables` of depth at most `depth`, by depth first,
    then connective in signature order, then argument tuples lexicographically."""
    below: List[Formula] = [Variable(v) for v in variables]
    below.extend(Application(symbol) for symbol in signature.constants())
    yield from below
    layer_start = 0
    for _ in range(depth):
        layer: List[Formula] = []
        for connective in signature.operations():
            for indices in itertools.product(range(len(below)), repeat=connective.arity):
                if max(indices) < layer_start:
                    continue
                formula = Application(
                    connective.symbol, tuple(below[i] for i in indices)
                )
                layer.append(formula)
                yield formula
        if not layer:
            return
        layer_start = len(below)
        below.extend(layer)


@dataclass(frozen=True)
class Substitution:
    """A finite map from variable names to formulas; identity elsewhere."""

    mapping: Mapping[str, Formula] = field(default_factory=dict, hash=False)

    @classmethod
    def of(cls, **images: Formula) -> "Substitution":
        return cls(dict(images))

    def __call__(self, formula: Formula) -> Formula:
        return substitute(self, formula)

    def image(self, name: str) -> Formula:
        return self.mapping.get(name, Variable(name))

    def compose(self, inner: "Substitution") -> "Substitution":
        """(self ∘ inner)(p) = self(inner(p))."""
        images = {name: self(image) for name, image in inner.mapping.items()}
        for name, image in self.mapping.items():
            images.setdefault(name, image)
        return Substitution(images)


def substitute(
    substitution: Substitution,
    formula: Formula,
    signature: Optional[Signature] = None,
) -> Formula:
    """Apply a substitution as the endomorphism of the formula algebra it induces."""
    if signature is not None:
        check_formula(signature, formula)
        for image in substitution.mapping.values():
            check_formula(signature, image)
    memo: Dict[Formula, Formula] = {}

    def walk(node: Formula) -> Formula:
        cached = memo.get(node)
        if cached is not None:
            return cached
        if isinstance(node, Variable):
            result = substitution.image(node.name)
        else:
            assert isinstance(node, Application)
            result = Application(node.connective, tuple(walk(a) for a in node.arguments))
        memo[node] = result
        return result

    return walk(formula)


@dataclass
class _Node:
    name: str
    position: int
    arguments: Optional[List["_Node"]]


_LPAR, _RPAR, _COMMA = map(pp.Suppress, "(),")
_IDENT = pp.Regex(r"[A-Za-z_][A-Za-z0-9_]*")
_FORMULA = pp.Forward()
_ARGUMENTS = pp.Group(
    _LPAR + pp.Optional(_FORMULA + pp.ZeroOrMore(_COMMA + _FORMULA)) + _RPAR
)
_APPLICATION = (_IDENT + _ARGUMENTS).set_parse_action(
    lambda s, loc, toks: _Node(toks[0], loc, list(toks[1]))
)
_BARE = _IDENT.copy().set_parse_action(lambda s, loc, toks: _Node(toks[0], loc, None))
_FORMULA <<= _APPLICATION | _BARE
_SEQUENT = (
    pp.Group(pp.Optional(_FORMULA + pp.ZeroOrMore(_COMMA + _FORMULA)))
    + pp.Suppress("|-")
    + _FORMULA
)


def _build(signature: Signature, node: _Node) -> Formula:
    if node.arguments is None:
        if node.name not in signature:
            return Variable(node.name)
        arity = signature.arity(node.name)
        if arity != 0:
            raise FormulaSyntaxError(
                f"connective {node.name!r} expects {arity} arguments, got 0",
                node.position,
            )
        return Application(node.name)
    if node.name not in signature:
        if RESERVED_VARIABLE.match(node.name):
            raise FormulaSyntaxError(
                f"variable {node.name!r} used where a connective is expected",
                node.position,
            )
        raise FormulaSyntaxError(f"unknown connective {node.name!r}", node.position)
    arity = signature.arity(node.name)
    if arity != len(node.arguments):
        raise FormulaSyntaxError(
            f"connective {node.name!r} expects {arity} arguments, "
            f"got {len(node.arguments)}",
            node.position,
        )
    return Application(node.name, tuple(_build(signature, a) for a in node.arguments))


def parse_formula(signature: Signature, text: str) -> Formula:
    try:
        result = _FORMULA.parse_string(text, parse_all=True)
    except pp.ParseBaseException as exc:
        raise FormulaSyntaxError(exc.msg, exc.loc) from None
    return _build(signature, result[0])


def parse_sequent(signature: Signature, text: str) -> Tuple[Tuple[Formula, ...], Formula]:
    """Parse `A1, ..., An |- B`; the premise side may be empty."""
    try:
        result = _SEQUENT.parse_string(text, parse_all=True)
    except pp.ParseBaseException as exc:
        raise FormulaSyntaxError(exc.msg, exc.loc) from None
    premises = tuple(_build(signature, node) for node in result[0])
    return premises, _build(signature, result[1])
