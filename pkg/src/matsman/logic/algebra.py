"""Finite L-algebras with explicit operation tables.

Tables are stored row-major with the leftmost argument as the most significant
index: for an r-ary connective the value at (a1, ..., ar) sits at position
a1*n^(r-1) + ... + ar. The fixture format exposes this layout.

Congruences are handled through the basic one-coordinate translations
x -> F(c1, ..., x, ..., cr): a partition is a congruence iff every such map
sends related elements to related elements. This is equivalent to closure
under related tuples by induction on the coordinates.
"""

import itertools
import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import (
    Callable,
    Dict,
    Iterator,
    List,
    Mapping,
    Optional,
    Protocol,
    Sequence,
    Tuple,
)

import numpy as np

from ..config import DEFAULT_LIMITS, Limits
from ..errors import (
    CapExceededError,
    EvaluationError,
    NotACongruenceError,
    PreconditionError,
    SignatureError,
)
from .language import (
    Application,
    Formula,
    Signature,
    Variable,
    generated_variables,
    sorted_variables,
    vars_of,
)
from .partition import Partition, merge_components

_logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FiniteAlgebra:
    signature: Signature
    size: int
    tables: Mapping[str, Tuple[int, ...]] = field(hash=False)
    labels: Optional[Tuple[str, ...]] = field(default=None, hash=False, compare=False)

    def __post_init__(self) -> None:
        if self.size < 1:
            raise SignatureError("an algebra needs at least one element")
        tables: Dict[str, Tuple[int, ...]] = {}
        for connective in self.signature:
            if connective.symbol not in self.tables:
                raise SignatureError(f"no table for connective {connective.symbol!r}")
            table = tuple(int(v) for v in self.tables[connective.symbol])
            expected = self.size ** connective.arity
            if len(table) != expected:
                raise SignatureError(
                    f"table of {connective.symbol!r} has {len(table)} entries, "
                    f"expected {expected}"
                )
            if any(not 0 <= v < self.size for v in table):
                raise SignatureError(f"table of {connective.symbol!r} leaves the universe")
            tables[connective.symbol] = table
        extra = set(self.tables) - set(tables)
        if extra:
            raise SignatureError(f"tables for undeclared connectives: {sorted(extra)}")
        object.__setattr__(self, "tables", tables)
        if self.labels is not None:
            if len(self.labels) != self.size:
                raise SignatureError("one label per element is required")
            object.__setattr__(self, "labels", tuple(str(x) for x in self.labels))

    @cached_property
    def arrays(self) -> Dict[str, np.ndarray]:
        return {s: np.asarray(t, dtype=np.int64) for s, t in self.tables.items()}

    @cached_property
    def translations(self) -> np.ndarray:
        """All distinct basic translations, one per row, as maps on the universe."""
        n = self.size
        maps = []
        for connective in self.signature.operations():
            table = self.arrays[connective.symbol].reshape((n,) * connective.arity)
            for position in range(connective.arity):
                maps.append(np.moveaxis(table, position, -1).reshape(-1, n))
        if not maps:
            return np.empty((0, n), dtype=np.int64)
        return np.unique(np.concatenate(maps), axis=0)

    def translation_blocks(self, limits: Limits = DEFAULT_LIMITS) -> Iterator[np.ndarray]:
        if self.translations.size:
            yield self.translations

    def label(self, element: int) -> str:
        return self.labels[element] if self.labels is not None else str(element)

    def apply(self, symbol: str, *arguments: int) -> int:
        arity = self.signature.arity(symbol)
        if arity != len(arguments):
            raise SignatureError(
                f"connective {symbol!r} expects {arity} arguments, got {len(arguments)}"
            )
        index = 0
        for argument in arguments:
            index = index * self.size + argument
        return self.tables[symbol][index]

    def evaluate(self, formula: Formula, assignment: Mapping[str, int]) -> int:
        memo: Dict[Formula, int] = {}

        def walk(node: Formula) -> int:
            cached = memo.get(node)
            if cached is not None:
                return cached
            if isinstance(node, Variable):
                if node.name not in assignment:
                    raise EvaluationError(node.name)
                value = int(assignment[node.name])
            else:
                assert isinstance(node, Application)
                value = self.apply(node.connective, *(walk(a) for a in node.arguments))
            memo[node] = value
            return value

        return walk(formula)

    def evaluate_columns(
        self, formula: Formula, columns: Mapping[str, np.ndarray], length: int
    ) -> np.ndarray:
        """Evaluate a formula under many assignments at once; `columns` maps each
        variable to its values across the assignments."""
        memo: Dict[Formula, np.ndarray] = {}

        def walk(node: Formula) -> np.ndarray:
            cached = memo.get(node)
            if cached is not None:
                return cached
            if isinstance(node, Variable):
                if node.name not in columns:
                    raise EvaluationError(node.name)
                value = np.asarray(columns[node.name], dtype=np.int64)
            else:
                assert isinstance(node, Application)
                arity = self.signature.arity(node.connective)
                if arity != len(node.arguments):
                    raise SignatureError(
                        f"connective {node.connective!r} expects {arity} arguments"
                    )
                table = self.arrays[node.connective]
                if not node.arguments:
                    value = np.full(length, table[0], dtype=np.int64)
                else:
                    index = np.zeros(length, dtype=np.int64)
                    for argument in node.arguments:
                        index = index * self.size + walk(argument)
                    value = table[index]
            memo[node] = value
            return value

        return walk(formula)


def evaluate(algebra: FiniteAlgebra, assignment: Mapping[str, int], formula: Formula) -> int:
    return algebra.evaluate(formula, assignment)


def projection_rows(size: int, k: int) -> np.ndarray:
    """Row i lists the i-th coordinate of every tuple of {0..size-1}^k, tuples in
    lexicographic order (first coordinate most significant)."""
    tuples = np.array(list(itertools.product(range(size), repeat=k)), dtype=np.int64)
    return tuples.reshape(size ** k, k).T.copy()


def valuation_columns(
    size: int, names: Sequence[str], limits: Limits = DEFAULT_LIMITS
) -> Tuple[Dict[str, np.ndarray], int]:
    count = size ** len(names)
    if count > limits.max_valuations:
        raise CapExceededError(
            f"{len(names)} variables over {size} values",
            count,
            limits.max_valuations,
            "--max-valuations",
        )
    rows = projection_rows(size, len(names))
    return {name: rows[i] for i, name in enumerate(names)}, count


def valuation_at(size: int, names: Sequence[str], index: int) -> Dict[str, int]:
    values = []
    for _ in names:
        values.append(index % size)
        index //= size
    return dict(zip(names, reversed(values)))


class Translatable(Protocol):
    """Anything whose congruences can be computed from its basic translations."""

    @property
    def size(self) -> int: ...

    def translation_blocks(self, limits: Limits = DEFAULT_LIMITS) -> Iterator[np.ndarray]: ...


def is_congruence(
    algebra: Translatable, partition: Partition, limits: Limits = DEFAULT_LIMITS
) -> bool:
    labels = partition.labels
    representatives = partition.representatives()
    for maps in algebra.translation_blocks(limits):
        if not np.array_equal(labels[maps], labels[maps[:, representatives]]):
            return False
    return True


def largest_congruence_below(
    algebra: Translatable, equivalence: Partition, limits: Limits = DEFAULT_LIMITS
) -> Partition:
    """Split blocks until every translation respects them; partitions only
    refine, so the loop ends, and what survives is the largest congruence
    contained in the equivalence."""
    labels = equivalence.labels
    count = equivalence.block_count
    while True:
        settled = count
        for maps in algebra.translation_blocks(limits):
            keys = np.vstack([labels[None, :], labels[maps]])
            _, inverse = np.unique(keys.T, axis=0, return_inverse=True)
            labels = inverse.reshape(-1)
            count = int(labels.max()) + 1
        if count == settled:
            return Partition.from_labels(labels.tolist())


def congruence_generated(
    algebra: Translatable,
    pairs: Sequence[Tuple[int, int]],
    limits: Limits = DEFAULT_LIMITS,
) -> Partition:
    for a, b in pairs:
        if not (0 <= a < algebra.size and 0 <= b < algebra.size):
            raise PreconditionError(f"pair {(a, b)} leaves the universe")
    roots = Partition.generated_by(algebra.size, pairs).representatives()
    while True:
        settled = roots
        for maps in algebra.translation_blocks(limits):
            roots = merge_components(roots, maps.reshape(-1), maps[:, roots].reshape(-1))
        if np.array_equal(roots, settled):
            return Partition.from_labels(roots.tolist())


def _all_tuples(size: int, arity: int) -> np.ndarray:
    return np.indices((size,) * arity).reshape(arity, -1)


def quotient(
    algebra: FiniteAlgebra, congruence: Partition
) -> Tuple[FiniteAlgebra, Tuple[int, ...]]:
    if congruence.size != algebra.size or not is_congruence(algebra, congruence):
        raise NotACongruenceError("partition is not a congruence of the algebra")
    labels = congruence.labels
    count = congruence.block_count
    first = np.array([min(c) for c in congruence.classes()], dtype=np.int64)
    tables: Dict[str, Tuple[int, ...]] = {}
    for connective in algebra.signature:
        table = algebra.arrays[connective.symbol]
        if connective.arity == 0:
            tables[connective.symbol] = (int(labels[table[0]]),)
            continue
        grid = _all_tuples(count, connective.arity)
        index = np.zeros(grid.shape[1], dtype=np.int64)
        for position in range(connective.arity):
            index = index * algebra.size + first[grid[position]]
        tables[connective.symbol] = tuple(labels[table[index]].tolist())
    names = tuple(f"[{algebra.label(int(a))}]" for a in first)
    return FiniteAlgebra(algebra.signature, count, tables, names), congruence.blocks


def direct_product(left: FiniteAlgebra, right: FiniteAlgebra) -> FiniteAlgebra:
    """Pairs (x, y) are numbered x*|right| + y."""
    if left.signature != right.signature:
        raise SignatureError("direct product needs a common signature")
    n, m = left.size, right.size
    size = n * m
    tables: Dict[str, Tuple[int, ...]] = {}
    for connective in left.signature:
        if connective.arity == 0:
            value = left.arrays[connective.symbol][0] * m + right.arrays[connective.symbol][0]
            tables[connective.symbol] = (int(value),)
            continue
        grid = _all_tuples(size, connective.arity)
        index_left = np.zeros(grid.shape[1], dtype=np.int64)
        index_right = np.zeros(grid.shape[1], dtype=np.int64)
        for position in range(connective.arity):
            index_left = index_left * n + grid[position] // m
            index_right = index_right * m + grid[position] % m
        values = (
            left.arrays[connective.symbol][index_left] * m
            + right.arrays[connective.symbol][index_right]
        )
        tables[connective.symbol] = tuple(values.tolist())
    labels = tuple(
        f"({left.label(x)},{right.label(y)})" for x in range(n) for y in range(m)
    )
    return FiniteAlgebra(left.signature, size, tables, labels)


@dataclass(frozen=True)
class Segment:
    """A run of `width` coordinates of a power, all valued in `algebra`."""

    algebra: FiniteAlgebra
    width: int


class RowCoder:
    """Exact integer codes for rows of a product of finite sets."""

    def __init__(self, radices: Sequence[int]):
        total = 1
        for radix in radices:
            total *= radix
        weights = []
        weight = 1
        for radix in reversed(radices):
            weights.append(weight)
            weight *= radix
        weights.reverse()
        self.exact = total < 2 ** 62
        if self.exact:
            self.weights = np.asarray(weights, dtype=np.int64).reshape(-1)
        else:
            self.weights = np.asarray(weights, dtype=object).reshape(-1)

    def encode(self, rows: np.ndarray) -> np.ndarray:
        if self.exact:
            return rows @ self.weights
        return rows.astype(object) @ self.weights


@dataclass
class RowClosure:
    """Elements of a generated subpower with a witnessing term and the least
    depth at which the closure reached each one."""

    segments: Tuple[Segment, ...]
    rows: np.ndarray
    terms: List[Formula]
    depths: List[int]
    complete: bool
    _index: Dict[int, int] = field(default_factory=dict, repr=False)
    _coder: Optional[RowCoder] = field(default=None, repr=False)

    def __len__(self) -> int:
        return len(self.terms)

    def lookup(self, rows: np.ndarray) -> np.ndarray:
        assert self._coder is not None
        codes = self._coder.encode(np.atleast_2d(rows)).tolist()
        return np.array([self._index[c] for c in codes], dtype=np.int64)

    def segment_rows(self, position: int) -> np.ndarray:
        start = sum(s.width for s in self.segments[:position])
        return self.rows[:, start:start + self.segments[position].width]


def apply_rows(
    segments: Sequence[Segment], symbol: str, arguments: Sequence[np.ndarray], count: int
) -> np.ndarray:
    width = sum(s.width for s in segments)
    out = np.empty((count, width), dtype=np.int64)
    column = 0
    for segment in segments:
        table = segment.algebra.arrays[symbol]
        span = slice(column, column + segment.width)
        if not arguments:
            out[:, span] = table[0]
        else:
            index = arguments[0][:, span]
            for argument in arguments[1:]:
                index = index * segment.algebra.size + argument[:, span]
            out[:, span] = table[index]
        column += segment.width
    return out


def _candidate_batches(
    arity: int, start: int, end: int, batch_rows: int
) -> Iterator[List[np.ndarray]]:
    """Index tuples over [0, end) with at least one index in [start, end)."""
    chunk: List[Tuple[Tuple[int, ...], int]] = []
    pending = 0
    for prefix in itertools.product(range(end), repeat=arity - 1):
        low = 0 if any(i >= start for i in prefix) else start
        chunk.append((prefix, low))
        pending += end - low
        if pending >= batch_rows:
            yield _index_block(chunk, end, arity)
            chunk, pending = [], 0
    if chunk:
        yield _index_block(chunk, end, arity)


def _index_block(
    chunk: Sequence[Tuple[Tuple[int, ...], int]], end: int, arity: int
) -> List[np.ndarray]:
    columns: List[List[np.ndarray]] = [[] for _ in range(arity)]
    for prefix, low in chunk:
        span = end - low
        for position, i in enumerate(prefix):
            columns[position].append(np.full(span, i, dtype=np.int64))
        columns[-1].append(np.arange(low, end, dtype=np.int64))
    return [np.concatenate(c) for c in columns]


def generate_rows(
    signature: Signature,
    segments: Sequence[Segment],
    generators: np.ndarray,
    generator_terms: Sequence[Formula],
    max_depth: Optional[int] = None,
    limits: Limits = DEFAULT_LIMITS,
    batch_rows: int = 1 << 15,
) -> RowClosure:
    """Breadth-first closure of generator rows under the pointwise operations.

    Round d applies every connective to tuples of elements found before round
    d with at least one element from round d-1, so an element first appears
    in round d exactly when the least depth of a term for it is d.
    """
    for segment in segments:
        if segment.algebra.signature != signature:
            raise SignatureError("all coordinates must share the signature")
    width = sum(s.width for s in segments)
    coder = RowCoder([s.algebra.size for s in segments for _ in range(s.width)])
    index: Dict[int, int] = {}
    rows: List[np.ndarray] = []
    terms: List[Formula] = []
    depths: List[int] = []
    # sorted codes admitted so far; only kept for exact coders
    known = np.empty(0, dtype=np.int64)

    def admit(candidates: np.ndarray, make_term: Callable[[int], Formula], depth: int) -> None:
        nonlocal known
        codes = coder.encode(candidates)
        if coder.exact:
            _, first = np.unique(codes, return_index=True)
            order = np.sort(first)
            if len(known):
                position = np.minimum(np.searchsorted(known, codes[order]), len(known) - 1)
                order = order[known[position] != codes[order]]
            if len(order):
                known = np.union1d(known, codes[order])
        else:
            order = np.arange(len(codes))
        for j, code in zip(order.tolist(), codes[order].tolist()):
            if code in index:
                continue
            index[code] = len(terms)
            rows.append(candidates[j])
            terms.append(make_term(j))
            depths.append(depth)
        if len(terms) * max(width, 1) > limits.max_cells:
            raise CapExceededError(
                "term-function closure", len(terms) * width, limits.max_cells, "--max-cells"
            )

    admit(np.asarray(generators, dtype=np.int64).reshape(-1, width),
          lambda j: generator_terms[j], 0)
    for symbol in signature.constants():
        admit(apply_rows(segments, symbol, [], 1), lambda j, s=symbol: Application(s), 0)

    start, end, depth = 0, len(terms), 0
    while start < end and (max_depth is None or depth < max_depth):
        depth += 1
        current = np.vstack(rows[:end])
        for connective in signature.operations():
            symbol = connective.symbol
            for columns in _candidate_batches(connective.arity, start, end, batch_rows):
                produced = apply_rows(
                    segments, symbol, [current[c] for c in columns], len(columns[0])
                )
                admit(
                    produced,
                    lambda j, s=symbol, cs=columns: Application(
                        s, tuple(terms[int(c[j])] for c in cs)
                    ),
                    depth,
                )
        start, end = end, len(terms)
    complete = start == end
    _logger.debug(
        "closure of %d generators: %d elements, depth %d%s",
        len(generator_terms), len(terms), depth, "" if complete else " (truncated)",
    )
    matrix = np.vstack(rows) if rows else np.empty((0, width), dtype=np.int64)
    return RowClosure(tuple(segments), matrix, terms, depths, complete, index, coder)


def _digits(flat: np.ndarray, base: int, count: int) -> List[np.ndarray]:
    """The `count` base-`base` digits of each entry, most significant first."""
    digits = []
    rest = flat
    for _ in range(count):
        digits.append(rest % base)
        rest = rest // base
    digits.reverse()
    return digits


class Subpower:
    """A subuniverse of a finite power A^w, one distinct row per element, with
    the operations acting coordinatewise.

    Operation tables are not stored: a result is computed row by row and found
    again through its code, so work on large subpowers is streamed in blocks
    of at most `max_cells` coordinates.
    """

    def __init__(
        self,
        base: FiniteAlgebra,
        rows: np.ndarray,
        labels: Optional[Sequence[str]] = None,
    ):
        self.base = base
        self.rows = np.asarray(rows, dtype=np.int64)
        if self.rows.ndim != 2 or not len(self.rows):
            raise PreconditionError("a subpower needs a nonempty table of rows")
        self.labels = tuple(labels) if labels is not None else None
        self._coder = RowCoder([base.size] * self.width)
        codes = self._coder.encode(self.rows)
        self._order = np.argsort(codes, kind="stable")
        self._sorted = codes[self._order]
        if len(self._sorted) > 1 and bool(np.any(self._sorted[1:] == self._sorted[:-1])):
            raise PreconditionError("subpower rows must be distinct")

    @property
    def size(self) -> int:
        return len(self.rows)

    @property
    def width(self) -> int:
        return self.rows.shape[1]

    @property
    def signature(self) -> Signature:
        return self.base.signature

    def label(self, element: int) -> str:
        return self.labels[element] if self.labels is not None else str(element)

    def locate(self, rows: np.ndarray) -> np.ndarray:
        codes = self._coder.encode(rows)
        position = np.minimum(np.searchsorted(self._sorted, codes), self.size - 1)
        if not bool(np.all(self._sorted[position] == codes)):
            raise PreconditionError("an operation leaves the subuniverse")
        return self._order[position]

    def apply(self, symbol: str, arguments: Sequence[np.ndarray]) -> np.ndarray:
        """Elements symbol(a1, ..., ar) for equally long arrays of arguments."""
        table = self.base.arrays[symbol]
        if not arguments:
            return self.locate(np.full((1, self.width), table[0], dtype=np.int64))
        index = self.rows[arguments[0]]
        for argument in arguments[1:]:
            index = index * self.base.size + self.rows[argument]
        return self.locate(table[index])

    def _step(self, limits: Limits) -> int:
        return max(1, limits.max_cells // max(1, self.width))

    def translation_blocks(self, limits: Limits = DEFAULT_LIMITS) -> Iterator[np.ndarray]:
        """Basic translations in blocks of rows. A position whose translations
        repeat those of the first position (the table is symmetric in the two)
        is skipped."""
        n = self.size
        everything = np.arange(n, dtype=np.int64)
        per_block = max(1, self._step(limits) // n)
        for connective in self.signature.operations():
            arity = connective.arity
            table = self.base.arrays[connective.symbol].reshape((self.base.size,) * arity)
            for position in range(arity):
                if position and np.array_equal(table, np.swapaxes(table, 0, position)):
                    continue
                total = n ** (arity - 1)
                for start in range(0, total, per_block):
                    combos = np.arange(start, min(total, start + per_block), dtype=np.int64)
                    constants = iter(_digits(combos, n, arity - 1))
                    arguments = [
                        np.tile(everything, len(combos)) if slot == position
                        else np.repeat(next(constants), n)
                        for slot in range(arity)
                    ]
                    yield self.apply(connective.symbol, arguments).reshape(len(combos), n)

    def _table(self, symbol: str, over: np.ndarray, limits: Limits) -> np.ndarray:
        """The table of `symbol` on the elements `over`, as positions in the subpower."""
        arity = self.signature.arity(symbol)
        cells = len(over) ** arity
        if cells > limits.max_cells:
            raise CapExceededError(
                f"operation table of {symbol!r} on {len(over)} elements",
                cells,
                limits.max_cells,
                "--max-cells",
            )
        if arity == 0:
            return self.apply(symbol, [])
        step = self._step(limits)
        values = []
        for start in range(0, cells, step):
            flat = np.arange(start, min(cells, start + step), dtype=np.int64)
            values.append(
                self.apply(symbol, [over[d] for d in _digits(flat, len(over), arity)])
            )
        return np.concatenate(values)

    def operation_table(self, symbol: str, limits: Limits = DEFAULT_LIMITS) -> np.ndarray:
        return self._table(symbol, np.arange(self.size, dtype=np.int64), limits)

    def as_algebra(self, limits: Limits = DEFAULT_LIMITS) -> FiniteAlgebra:
        tables = {
            c.symbol: tuple(self.operation_table(c.symbol, limits).tolist())
            for c in self.signature
        }
        labels = tuple(self.label(a) for a in range(self.size))
        return FiniteAlgebra(self.signature, self.size, tables, labels)

    def quotient(
        self, congruence: Partition, limits: Limits = DEFAULT_LIMITS
    ) -> Tuple[FiniteAlgebra, Tuple[int, ...]]:
        """Like `quotient`, with tables computed on one element per class."""
        if congruence.size != self.size or not is_congruence(self, congruence, limits):
            raise NotACongruenceError("partition is not a congruence of the subpower")
        labels = congruence.labels
        first = np.array([min(c) for c in congruence.classes()], dtype=np.int64)
        tables = {
            c.symbol: tuple(labels[self._table(c.symbol, first, limits)].tolist())
            for c in self.signature
        }
        names = tuple(f"[{self.label(int(a))}]" for a in first)
        algebra = FiniteAlgebra(self.signature, len(first), tables, names)
        return algebra, congruence.blocks

    def restrict(self, columns: Sequence[int]) -> Tuple["Subpower", np.ndarray]:
        """The image under the projection onto `columns`, and the projection as
        an array of element positions. Images keep the order in which their
        first preimage appears."""
        part = self.rows[:, list(columns)]
        if not part.shape[1]:
            first = np.zeros(1, dtype=np.int64)
            projection = np.zeros(self.size, dtype=np.int64)
        else:
            _, first, inverse = np.unique(
                part, axis=0, return_index=True, return_inverse=True
            )
            order = np.argsort(first)
            rank = np.empty_like(order)
            rank[order] = np.arange(len(order))
            first = first[order]
            projection = rank[inverse.reshape(-1)]
        labels = [self.label(int(a)) for a in first] if self.labels is not None else None
        return Subpower(self.base, part[first], labels), projection


@dataclass(frozen=True)
class Subalgebra:
    generators: Tuple[int, ...]
    elements: Tuple[int, ...]
    terms: Tuple[Formula, ...]


def subalgebra_generated(
    algebra: FiniteAlgebra, generators: Sequence[int], limits: Limits = DEFAULT_LIMITS
) -> Subalgebra:
    """The least subuniverse containing the generators; generator i is
    witnessed by the variable p(i+1) in ascending order of the generators."""
    gens = sorted(set(int(g) for g in generators))
    if any(not 0 <= g < algebra.size for g in gens):
        raise PreconditionError("generators must lie in the universe")
    if not gens and not algebra.signature.constants():
        raise PreconditionError("empty generator set and no constants")
    names = generated_variables(len(gens))
    closure = generate_rows(
        algebra.signature,
        [Segment(algebra, 1)],
        np.array(gens, dtype=np.int64).reshape(-1, 1),
        [Variable(v) for v in names],
        limits=limits,
    )
    return Subalgebra(
        tuple(gens), tuple(closure.rows[:, 0].tolist()), tuple(closure.terms)
    )


def minimal_generating_set(
    algebra: FiniteAlgebra, limits: Limits = DEFAULT_LIMITS
) -> Tuple[int, ...]:
    """A smallest generating subset, first in lexicographic order."""
    smallest = 0 if algebra.signature.constants() else 1
    tried = 0
    for count in range(smallest, algebra.size + 1):
        for candidate in itertools.combinations(range(algebra.size), count):
            tried += 1
            if tried > limits.max_search:
                raise CapExceededError(
                    "generating-set search", tried, limits.max_search, "--max-search"
                )
            if len(subalgebra_generated(algebra, candidate, limits).elements) == algebra.size:
                return candidate
    raise AssertionError("the whole universe always generates")


def _invariants(algebra: FiniteAlgebra) -> List[Tuple[int, ...]]:
    n = algebra.size
    features: List[List[int]] = [[] for _ in range(n)]
    for connective in algebra.signature:
        table = algebra.arrays[connective.symbol]
        if connective.arity == 0:
            for x in range(n):
                features[x].append(int(table[0] == x))
        elif connective.arity == 1:
            indegree = np.bincount(table, minlength=n)
            for x in range(n):
                features[x].extend((int(table[x] == x), int(indegree[x])))
        else:
            diagonal = table[np.arange(n) * sum(n ** i for i in range(connective.arity))]
            indegree = np.bincount(table, minlength=n)
            for x in range(n):
                features[x].extend((int(diagonal[x] == x), int(indegree[x])))
    return [tuple(f) for f in features]


def is_isomorphism(
    source: FiniteAlgebra, target: FiniteAlgebra, mapping: Sequence[int]
) -> bool:
    if source.signature != target.signature or source.size != target.size:
        return False
    image = np.asarray(mapping, dtype=np.int64)
    if sorted(image.tolist()) != list(range(target.size)):
        return False
    n = source.size
    for connective in source.signature:
        arity = connective.arity
        left = image[source.arrays[connective.symbol]]
        if arity == 0:
            right = target.arrays[connective.symbol]
        else:
            grid = _all_tuples(n, arity)
            index = np.zeros(grid.shape[1], dtype=np.int64)
            for position in range(arity):
                index = index * n + image[grid[position]]
            right = target.arrays[connective.symbol][index]
        if not np.array_equal(left, right):
            return False
    return True


def find_isomorphism(
    source: FiniteAlgebra, target: FiniteAlgebra
) -> Optional[Tuple[int, ...]]:
    """Backtracking over images of 0, 1, ... with invariant pruning; every
    complete assignment forces the images of operation results it reaches."""
    if source.signature != target.signature or source.size != target.size:
        return None
    n = source.size
    source_inv, target_inv = _invariants(source), _invariants(target)
    if sorted(source_inv) != sorted(target_inv):
        return None
    candidates = [[y for y in range(n) if target_inv[y] == source_inv[x]] for x in range(n)]
    forced: Dict[int, int] = {}
    for symbol in source.signature.constants():
        x, y = source.tables[symbol][0], target.tables[symbol][0]
        if forced.setdefault(x, y) != y:
            return None
    operations = source.signature.operations()
    mapping = [-1] * n
    used = [False] * n

    def propagate(x: int, forced: Dict[int, int]) -> Optional[Dict[int, int]]:
        extended = dict(forced)
        for connective in operations:
            for args in itertools.product(range(x + 1), repeat=connective.arity):
                if x not in args:
                    continue
                z = source.apply(connective.symbol, *args)
                w = target.apply(connective.symbol, *(mapping[a] for a in args))
                if z <= x:
                    if mapping[z] != w:
                        return None
                elif extended.setdefault(z, w) != w:
                    return None
        return extended

    def search(x: int, forced: Dict[int, int]) -> Optional[Tuple[int, ...]]:
        if x == n:
            result = tuple(mapping)
            return result if is_isomorphism(source, target, result) else None
        options = [forced[x]] if x in forced else candidates[x]
        for y in options:
            if used[y] or y not in candidates[x]:
                continue
            mapping[x], used[y] = y, True
            extended = propagate(x, forced)
            if extended is not None:
                found = search(x + 1, extended)
                if found is not None:
                    return found
            mapping[x], used[y] = -1, False
        return None

    return search(0, forced)


@dataclass(frozen=True)
class PointedAlgebra:
    """An algebra expanded by a distinguished element written as a constant."""

    algebra: FiniteAlgebra
    one: int
    symbol: str = "one"

    def __post_init__(self) -> None:
        if not 0 <= self.one < self.algebra.size:
            raise PreconditionError("the distinguished element must lie in the universe")
        if self.symbol in self.algebra.signature:
            object.__setattr__(self, "symbol", self.algebra.signature.fresh_symbol(self.symbol))

    def expanded(self) -> FiniteAlgebra:
        tables = dict(self.algebra.tables)
        tables[self.symbol] = (self.one,)
        return FiniteAlgebra(
            self.algebra.signature.extended(self.symbol, 0),
            self.algebra.size,
            tables,
            self.algebra.labels,
        )

    @property
    def one_formula(self) -> Formula:
        return Application(self.symbol)


def identity_counterexample(
    pointed: PointedAlgebra,
    lhs: Formula,
    rhs: Formula,
    limits: Limits = DEFAULT_LIMITS,
) -> Optional[Dict[str, int]]:
    """The least assignment (in enumeration order) separating lhs from rhs."""
    algebra = pointed.expanded()
    names = sorted_variables(vars_of([lhs, rhs]))
    columns, count = valuation_columns(algebra.size, names, limits)
    left = algebra.evaluate_columns(lhs, columns, count)
    right = algebra.evaluate_columns(rhs, columns, count)
    differ = np.nonzero(left != right)[0]
    if not len(differ):
        return None
    return valuation_at(algebra.size, names, int(differ[0]))


def check_identity(
    pointed: PointedAlgebra, lhs: Formula, rhs: Formula, limits: Limits = DEFAULT_LIMITS
) -> bool:
    return identity_counterexample(pointed, lhs, rhs, limits) is None
