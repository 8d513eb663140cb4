import pytest

from matsman.errors import PreconditionError, SignatureError
from matsman.logic.algebra import PointedAlgebra, find_isomorphism, is_congruence
from matsman.logic.congruence import rasiowa_relation
from matsman.logic.lindenbaum import (
    canonical_valuation_check,
    lt_algebra,
    pointed_lt,
    tautology_classes,
    variety_membership,
)
from matsman.logic.matrix import Matrix, term_function_algebra


def test_classical_quotient(b2):
    lt = lt_algebra(b2, 1)
    assert lt.admits
    assert lt.algebra.size == 4
    assert lt.congruence.is_identity()
    assert tautology_classes(lt) == {lt.filter_class}
    assert is_congruence(lt.reduct.functions.as_algebra(), lt.congruence)


def test_canonical_valuation_sends_p1_to_its_class(b2):
    lt = lt_algebra(b2, 1)
    valuation = lt.canonical_valuation()
    assert list(valuation) == ["p1"]
    assert valuation["p1"] == lt.projection[lt.reduct.functions.generator_indices[0]]


@pytest.mark.parametrize("name", ["b2", "l3", "g3"])
def test_canonical_valuation_check(name, request):
    m = request.getfixturevalue(name)
    verdict = canonical_valuation_check(m, 1, 3)
    assert verdict
    assert verdict.checked > 0


def test_empty_filter_does_not_admit(b2):
    empty = Matrix(b2.algebra, frozenset())
    lt = lt_algebra(empty, 1)
    assert not lt.admits
    assert lt.filter_class is None
    with pytest.raises(PreconditionError):
        pointed_lt(empty, 1)
    with pytest.raises(PreconditionError):
        canonical_valuation_check(empty, 1, 2)


def test_quotient_lies_in_the_variety(l3):
    pointed = pointed_lt(l3, 1)
    assert variety_membership(pointed, l3, 1, 3)


def test_b2_pointed_at_top_satisfies_classical_theorems(b2):
    assert variety_membership(PointedAlgebra(b2.algebra, 1), b2, 2, 2)


def test_b2_pointed_at_bottom_fails(b2):
    verdict = variety_membership(PointedAlgebra(b2.algebra, 0), b2, 1, 2)
    assert not verdict
    # constants come before any compound formula in the sweep
    assert str(verdict.witness) == "const1"
    assert verdict.checked == 1


def test_variety_membership_needs_one_signature(b2, b2_imp):
    with pytest.raises(SignatureError):
        variety_membership(PointedAlgebra(b2_imp.algebra, 1), b2, 1, 1)


@pytest.mark.parametrize("k", [1, 2])
def test_classical_quotient_is_the_free_algebra(b2, k):
    lt = lt_algebra(b2, k)
    assert lt.admits
    assert tautology_classes(lt) == {lt.filter_class}
    assert rasiowa_relation(b2, "imp", k).to_partition() == lt.congruence
    free = term_function_algebra(b2.algebra, k).as_algebra()
    assert lt.algebra.size == 2 ** 2 ** k
    assert find_isomorphism(lt.algebra, free) is not None


def test_two_variable_quotient_lies_in_the_variety(b2):
    verdict = variety_membership(pointed_lt(b2, 2), b2, 2, 3)
    assert verdict
    assert verdict.checked > 0


@pytest.mark.slow
def test_lukasiewicz_quotient_over_two_variables(l3):
    lt = lt_algebra(l3, 2)
    assert lt.admits
    assert lt.reduct.functions.size == 3888
    assert is_congruence(lt.reduct.functions.subpower, lt.congruence)
