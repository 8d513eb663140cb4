import random

import pytest

from matsman.errors import PreconditionError
from matsman.logic.algebra import (
    FiniteAlgebra,
    find_isomorphism,
    is_congruence,
    largest_congruence_below,
    quotient,
)
from matsman.logic.congruence import (
    TheoryOnReduct,
    compatible,
    congruence_chain,
    fregean_failure,
    frege_relation,
    gmatrix_leibniz_congruence,
    is_fregean,
    is_implicative_extensional,
    is_selfextensional,
    leibniz_by_polynomials,
    leibniz_congruence,
    leibniz_matrix,
    leibniz_on_reduct,
    rasiowa_relation,
    reduce,
    reduce_gmatrix,
    suszko_congruence,
    suszko_matrix,
    tarski_congruence,
    tarski_gmatrix,
    theorem_theory,
    theories_on_reduct,
)
from matsman.logic.language import Signature
from matsman.logic.matrix import GMatrix, Matrix, term_function_algebra
from matsman.logic.partition import Partition, meet_all

from conftest import all_partitions, congruence_by_tuples

SMALL = Signature.from_pairs("small", [("f", 2), ("g", 1)])


def random_matrix(rng, size):
    algebra = FiniteAlgebra(
        SMALL,
        size,
        {
            "f": tuple(rng.randrange(size) for _ in range(size * size)),
            "g": tuple(rng.randrange(size) for _ in range(size)),
        },
    )
    members = frozenset(a for a in range(size) if rng.random() < 0.5) or frozenset({0})
    return Matrix(algebra, members)


def test_leibniz_of_the_square(b2xb2):
    assert leibniz_congruence(b2xb2).blocks == (0, 0, 1, 1)


@pytest.mark.parametrize("name", ["b2", "b2_imp", "l3", "g3"])
def test_standard_matrices_are_reduced(name, request):
    m = request.getfixturevalue(name)
    assert leibniz_congruence(m).is_identity()


def test_leibniz_against_brute_force():
    rng = random.Random(23)
    for _ in range(20):
        m = random_matrix(rng, 4)
        compatible_congruences = [
            p
            for p in all_partitions(4)
            if congruence_by_tuples(m.algebra, p) and compatible(p, m.filter)
        ]
        omega = leibniz_congruence(m)
        assert omega in compatible_congruences
        assert all(p.refines(omega) for p in compatible_congruences)


def test_leibniz_by_polynomials_agrees():
    rng = random.Random(29)
    for _ in range(20):
        m = random_matrix(rng, 4)
        assert leibniz_by_polynomials(m) == leibniz_congruence(m)


def test_reduce_the_square(b2xb2, b2):
    reduced = reduce(b2xb2)
    assert reduced.algebra.size == 2
    mapping = find_isomorphism(reduced.algebra, b2.algebra)
    assert mapping is not None
    assert frozenset(mapping[a] for a in reduced.filter) == b2.filter
    assert leibniz_congruence(reduced).is_identity()


def test_gmatrix_leibniz_meets_all_filters(b2xb2):
    gm = GMatrix(b2xb2.algebra, (frozenset({2, 3}), frozenset({1, 3})))
    assert gmatrix_leibniz_congruence(gm).is_identity()
    single = reduce_gmatrix(GMatrix(b2xb2.algebra, (frozenset({2, 3}), frozenset({2, 3}))))
    assert single.algebra.size == 2
    assert len(single.filters) == 1


def test_theory_must_be_closed(b2):
    functions = term_function_algebra(b2.algebra, 1)
    p1 = functions.generator_indices[0]
    with pytest.raises(PreconditionError):
        TheoryOnReduct(b2, functions, frozenset({p1}))


def test_congruence_chain_holds(b2, l3, g3):
    for m in (b2, l3, g3):
        chain = congruence_chain(m, 1)
        assert chain.violations() == []
        for row in chain.rows:
            assert row.suszko.refines(row.frege)
            assert row.suszko_compatible


def test_tarski_is_the_meet_of_suszko(l3):
    chain = congruence_chain(l3, 1)
    tarski = tarski_congruence(l3, 1)
    assert tarski == chain.tarski
    assert all(tarski.refines(row.suszko) for row in chain.rows)


def test_suszko_is_a_congruence_below_frege(g3):
    theory = theorem_theory(g3, 1)
    algebra = theory.functions.as_algebra()
    suszko = suszko_congruence(theory)
    assert is_congruence(algebra, suszko)
    assert suszko.refines(frege_relation(theory))


def test_reduced_models_of_the_theorems(b2):
    theory = theorem_theory(b2, 1)
    assert leibniz_matrix(theory).algebra.size == 4
    assert suszko_matrix(theory).algebra.size == 4


MATRICES = ["b2", "b2_imp", "b2xb2", "l3", "g3"]

BY_ARITY = [
    pytest.param(name, k, marks=pytest.mark.slow) if k == 2 and name in ("l3", "g3")
    else (name, k)
    for name in MATRICES
    for k in (1, 2)
]


@pytest.mark.parametrize("name, k", BY_ARITY)
def test_congruence_chain_for_every_fixture(name, k, request):
    m = request.getfixturevalue(name)
    chain = congruence_chain(m, k)
    assert chain.violations() == []
    assert chain.tarski == tarski_congruence(m, k)
    for row in chain.rows:
        assert compatible(row.leibniz, row.theory.members)


@pytest.mark.parametrize(
    "name, k", [(name, 1) for name in MATRICES] + [("b2", 2), ("b2_imp", 2), ("b2xb2", 2)]
)
def test_tarski_is_the_meet_of_leibniz(name, k, request):
    m = request.getfixturevalue(name)
    theories = theories_on_reduct(m, k)
    size = theories[0].functions.size
    assert tarski_congruence(m, k) == meet_all(size, [leibniz_on_reduct(t) for t in theories])


@pytest.mark.parametrize(
    "name, k", [(name, 1) for name in MATRICES] + [("b2", 2), ("b2xb2", 2)]
)
def test_theory_relations_agree_with_operation_tables(name, k, request):
    m = request.getfixturevalue(name)
    theories = theories_on_reduct(m, k)
    algebra = theories[0].functions.as_algebra()
    fregean = True
    for theory in theories:
        frege = frege_relation(theory)
        suszko = largest_congruence_below(algebra, frege)
        assert suszko_congruence(theory) == suszko
        leibniz = largest_congruence_below(
            algebra, Partition.from_subset(algebra.size, theory.members)
        )
        assert leibniz_on_reduct(theory) == leibniz
        expected, projection = quotient(algebra, suszko)
        found = suszko_matrix(theory)
        assert found.algebra.tables == expected.tables
        assert found.algebra.labels == expected.labels
        assert found.filter == frozenset(projection[g] for g in theory.members)
        assert leibniz_matrix(theory).algebra.size == quotient(algebra, leibniz)[0].size
        fregean = fregean and is_congruence(algebra, frege)
    assert is_fregean(m, k) == fregean
    theorems = theorem_theory(m, k)
    assert is_selfextensional(m, k) == is_congruence(algebra, frege_relation(theorems))


def test_tarski_gmatrix_of_classical_logic(b2):
    gm = tarski_gmatrix(b2, 1)
    assert gm.algebra.size <= 4
    assert len(gm.filters) == 4


def test_classical_logic_is_fregean(b2):
    assert is_fregean(b2, 1)
    assert is_selfextensional(b2, 1)
    assert fregean_failure(b2, 1) is None


def test_lukasiewicz_is_not_selfextensional(l3):
    # p and neg(imp(p, neg(p))) are interderivable but their negations are not
    assert not is_selfextensional(l3, 1)
    assert not is_fregean(l3, 1)
    assert fregean_failure(l3, 1) is not None


def test_rasiowa_relation_of_classical_logic(b2):
    relation = rasiowa_relation(b2, "imp", 1)
    assert relation.is_equivalence()
    assert relation.to_partition() == Partition.identity(4)
    with pytest.raises(PreconditionError):
        rasiowa_relation(b2, "neg", 1)


def test_implicative_extensional_classical(b2, g3):
    assert is_implicative_extensional(b2, "imp")
    assert is_implicative_extensional(g3, "imp")


def test_conjunction_is_not_an_implication(b2):
    verdict = is_implicative_extensional(b2, "and")
    assert not verdict
    assert verdict.clause == "i1"
    assert verdict.s_filter == frozenset({1})
    assert verdict.witness == {"a": 0}


def test_implicative_requires_a_binary_connective(b2):
    with pytest.raises(PreconditionError):
        is_implicative_extensional(b2, "const0")
