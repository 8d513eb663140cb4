import itertools
import random

import numpy as np
import pytest

from matsman.config import Limits
from matsman.errors import (
    CapExceededError,
    EvaluationError,
    NotACongruenceError,
    PreconditionError,
    SignatureError,
)
from matsman.logic.algebra import (
    FiniteAlgebra,
    PointedAlgebra,
    RowCoder,
    Subpower,
    check_identity,
    congruence_generated,
    direct_product,
    evaluate,
    find_isomorphism,
    identity_counterexample,
    is_congruence,
    is_isomorphism,
    largest_congruence_below,
    minimal_generating_set,
    projection_rows,
    quotient,
    subalgebra_generated,
    valuation_at,
    valuation_columns,
)
from matsman.logic.language import Signature, Substitution, Variable, formulas_upto, parse_formula
from matsman.logic.partition import Partition

from conftest import all_partitions, congruence_by_tuples

UNARY_BINARY = Signature.from_pairs("small", [("f", 2), ("g", 1)])


def random_algebra(rng, size):
    return FiniteAlgebra(
        UNARY_BINARY,
        size,
        {
            "f": tuple(rng.randrange(size) for _ in range(size * size)),
            "g": tuple(rng.randrange(size) for _ in range(size)),
        },
    )


def test_tables_are_validated(b2_algebra):
    signature = b2_algebra.signature
    tables = dict(b2_algebra.tables)
    tables["neg"] = (1,)
    with pytest.raises(SignatureError):
        FiniteAlgebra(signature, 2, tables)
    tables["neg"] = (1, 2)
    with pytest.raises(SignatureError):
        FiniteAlgebra(signature, 2, tables)
    del tables["neg"]
    with pytest.raises(SignatureError):
        FiniteAlgebra(signature, 2, tables)


def test_apply_is_row_major(l3):
    algebra = l3.algebra
    # imp(1/2, 0) = 1/2 and imp(1, 1/2) = 1/2 in Lukasiewicz logic
    assert algebra.apply("imp", 1, 0) == 1
    assert algebra.apply("imp", 2, 1) == 1
    assert algebra.apply("imp", 0, 2) == 2


def test_evaluate_and_unbound_variables(b2_algebra):
    formula = parse_formula(b2_algebra.signature, "imp(p, and(q, const1))")
    assert evaluate(b2_algebra, {"p": 1, "q": 0}, formula) == 0
    assert evaluate(b2_algebra, {"p": 0, "q": 0}, formula) == 1
    with pytest.raises(EvaluationError) as info:
        evaluate(b2_algebra, {"p": 1}, formula)
    assert info.value.variable == "q"


def test_evaluate_columns_matches_pointwise(l3):
    algebra = l3.algebra
    formula = parse_formula(algebra.signature, "or(imp(p, q), neg(and(q, p)))")
    columns, count = valuation_columns(3, ["p", "q"])
    values = algebra.evaluate_columns(formula, columns, count)
    for index in range(count):
        assignment = valuation_at(3, ["p", "q"], index)
        assert values[index] == algebra.evaluate(formula, assignment)


def test_evaluation_commutes_with_substitution(l3):
    rng = random.Random(5)
    algebra = l3.algebra
    formulas = list(formulas_upto(algebra.signature, ["p", "q"], 1))
    for _ in range(30):
        sigma = Substitution.of(p=rng.choice(formulas), q=rng.choice(formulas))
        target = rng.choice(formulas)
        assignment = {"p": rng.randrange(3), "q": rng.randrange(3)}
        shifted = {name: algebra.evaluate(sigma.image(name), assignment) for name in ("p", "q")}
        assert algebra.evaluate(sigma(target), assignment) == algebra.evaluate(target, shifted)


def test_valuation_order_is_lexicographic():
    assert projection_rows(2, 2).tolist() == [[0, 0, 1, 1], [0, 1, 0, 1]]
    assert valuation_at(3, ["p", "q"], 5) == {"p": 1, "q": 2}


def test_valuation_cap():
    with pytest.raises(CapExceededError) as info:
        valuation_columns(3, ["p", "q", "r"], Limits(max_valuations=26))
    assert info.value.needed == 27
    assert info.value.exit_code == 3


def test_is_congruence_against_brute_force():
    rng = random.Random(11)
    for _ in range(15):
        algebra = random_algebra(rng, 4)
        for partition in all_partitions(4):
            assert is_congruence(algebra, partition) == congruence_by_tuples(algebra, partition)


def test_largest_congruence_below_is_largest():
    rng = random.Random(3)
    for _ in range(15):
        algebra = random_algebra(rng, 4)
        congruences = [p for p in all_partitions(4) if congruence_by_tuples(algebra, p)]
        for equivalence in all_partitions(4):
            found = largest_congruence_below(algebra, equivalence)
            assert is_congruence(algebra, found)
            assert found.refines(equivalence)
            below = [c for c in congruences if c.refines(equivalence)]
            assert all(c.refines(found) for c in below)


def test_congruence_generated_is_least():
    rng = random.Random(5)
    for _ in range(15):
        algebra = random_algebra(rng, 4)
        a, b = rng.randrange(4), rng.randrange(4)
        found = congruence_generated(algebra, [(a, b)])
        assert found.related(a, b)
        assert is_congruence(algebra, found)
        for candidate in all_partitions(4):
            if candidate.related(a, b) and congruence_by_tuples(algebra, candidate):
                assert found.refines(candidate)


def test_quotient_of_product_by_a_projection_kernel(b2xb2, b2_algebra):
    kernel = largest_congruence_below(b2xb2.algebra, _first_coordinate())
    algebra, projection = quotient(b2xb2.algebra, kernel)
    assert projection == (0, 0, 1, 1)
    assert find_isomorphism(algebra, b2_algebra) is not None
    assert algebra.labels == ("[(0,0)]", "[(1,0)]")


def _first_coordinate():
    return Partition((0, 0, 1, 1))


def test_quotient_rejects_non_congruences(l3):
    with pytest.raises(NotACongruenceError):
        quotient(l3.algebra, Partition((0, 0, 1)))


def full_square(algebra):
    return Subpower(algebra, projection_rows(algebra.size, 2).T)


def test_subpower_of_the_full_square_is_the_product(l3):
    square = full_square(l3.algebra)
    assert square.size == 9
    assert square.as_algebra().tables == direct_product(l3.algebra, l3.algebra).tables


def test_streamed_congruences_agree_with_tables(l3):
    # a tiny cell budget forces many small blocks of translations
    limits = Limits(max_cells=20)
    rng = random.Random(23)
    for algebra in [l3.algebra] + [random_algebra(rng, 3) for _ in range(6)]:
        square = full_square(algebra)
        product = direct_product(algebra, algebra)
        for _ in range(10):
            equivalence = Partition.from_labels([rng.randrange(3) for _ in range(9)])
            assert is_congruence(square, equivalence, limits) == is_congruence(
                product, equivalence
            )
            assert largest_congruence_below(
                square, equivalence, limits
            ) == largest_congruence_below(product, equivalence)
            a, b = rng.randrange(9), rng.randrange(9)
            assert congruence_generated(square, [(a, b)], limits) == congruence_generated(
                product, [(a, b)]
            )


def test_subpower_quotient_and_restriction(l3):
    square = full_square(l3.algebra)
    first, projection = square.restrict([0])
    assert first.size == 3
    assert projection.tolist() == [a // 3 for a in range(9)]
    assert first.as_algebra().tables == l3.algebra.tables
    kernel = Partition.from_labels(projection.tolist())
    algebra, blocks = square.quotient(kernel)
    expected, expected_blocks = quotient(direct_product(l3.algebra, l3.algebra), kernel)
    assert algebra.tables == expected.tables
    assert blocks == expected_blocks
    with pytest.raises(NotACongruenceError):
        square.quotient(Partition.from_labels([0, 1, 1, 1, 1, 1, 1, 1, 1]))


def test_subpower_rejects_foreign_and_repeated_rows(l3):
    rows = np.array([[0, 0], [2, 2]])
    boolean = Subpower(l3.algebra, rows)
    # {0, 2} is a subuniverse of l3
    assert boolean.apply("neg", [np.array([0, 1])]).tolist() == [1, 0]
    with pytest.raises(PreconditionError):
        boolean.locate(np.array([[1, 1]]))
    with pytest.raises(PreconditionError):
        Subpower(l3.algebra, np.array([[0, 0], [0, 0]]))


def test_subpower_operation_table_cap(l3):
    with pytest.raises(CapExceededError):
        full_square(l3.algebra).operation_table("imp", Limits(max_cells=80))


def test_direct_product_encoding(b2_algebra):
    product = direct_product(b2_algebra, b2_algebra)
    assert product.size == 4
    for x, y, u, v in itertools.product(range(2), repeat=4):
        expected = b2_algebra.apply("imp", x, u) * 2 + b2_algebra.apply("imp", y, v)
        assert product.apply("imp", x * 2 + y, u * 2 + v) == expected
    assert product.labels[1] == "(0,1)"


def test_direct_product_needs_one_signature(b2_algebra, b2_imp):
    with pytest.raises(SignatureError):
        direct_product(b2_algebra, b2_imp.algebra)


def test_row_coder_switches_to_exact_objects():
    small = RowCoder([3, 3, 3])
    assert small.exact
    assert small.encode(np.array([[1, 2, 0]])).tolist() == [15]
    big = RowCoder([2] * 70)
    assert not big.exact
    row = np.zeros((1, 70), dtype=np.int64)
    row[0, 0] = 1
    assert big.encode(row).tolist() == [2 ** 69]


def test_subalgebra_generated(b2_imp, l3):
    assert subalgebra_generated(b2_imp.algebra, [0]).elements == (0, 1)
    generated = subalgebra_generated(b2_imp.algebra, [1])
    assert generated.elements == (1,)
    assert generated.terms == (Variable("p1"),)
    # the constants already give 0 and 1; 1/2 is not reachable from them
    assert sorted(subalgebra_generated(l3.algebra, []).elements) == [0, 2]


def test_subalgebra_without_generators_or_constants(b2_imp):
    with pytest.raises(PreconditionError):
        subalgebra_generated(b2_imp.algebra, [])


def test_minimal_generating_set(b2_algebra, b2xb2, b2_imp, l3):
    assert minimal_generating_set(b2_algebra) == ()
    assert minimal_generating_set(b2_imp.algebra) == (0,)
    assert minimal_generating_set(l3.algebra) == (1,)
    assert len(minimal_generating_set(b2xb2.algebra)) == 1


def test_find_isomorphism_on_relabelled_copies():
    rng = random.Random(13)
    for _ in range(10):
        algebra = random_algebra(rng, 4)
        permutation = list(range(4))
        rng.shuffle(permutation)
        inverse = [permutation.index(x) for x in range(4)]
        tables = {
            "f": tuple(
                permutation[algebra.apply("f", inverse[a], inverse[b])]
                for a in range(4)
                for b in range(4)
            ),
            "g": tuple(permutation[algebra.apply("g", inverse[a])] for a in range(4)),
        }
        copy = FiniteAlgebra(UNARY_BINARY, 4, tables)
        found = find_isomorphism(algebra, copy)
        assert found is not None
        assert is_isomorphism(algebra, copy, found)


def test_l3_and_g3_are_not_isomorphic(l3, g3):
    assert find_isomorphism(l3.algebra, g3.algebra) is None


def test_pointed_identities(b2_algebra):
    pointed = PointedAlgebra(b2_algebra, 1)
    signature = b2_algebra.signature
    assert pointed.symbol == "one"
    assert check_identity(pointed, parse_formula(signature, "imp(p, p)"), pointed.one_formula)
    witness = identity_counterexample(
        pointed, parse_formula(signature, "imp(p, q)"), pointed.one_formula
    )
    assert witness == {"p": 1, "q": 0}


def test_pointed_symbol_is_fresh(b2_algebra):
    pointed = PointedAlgebra(b2_algebra, 0, symbol="const1")
    assert pointed.symbol == "const1_"
    assert pointed.expanded().apply("const1_") == 0
    with pytest.raises(PreconditionError):
        PointedAlgebra(b2_algebra, 5)
