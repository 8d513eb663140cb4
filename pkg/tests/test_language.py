import random

import pytest

from matsman.errors import FormulaSyntaxError, SignatureError
from matsman.logic.language import (
    Application,
    Signature,
    Substitution,
    Variable,
    format_formula,
    format_sequent,
    formulas_upto,
    generated_variables,
    parse_formula,
    parse_sequent,
    sorted_variables,
    subformulas,
    substitute,
    vars_of,
)

CLASSICAL = Signature.from_pairs(
    "classical",
    [("and", 2), ("or", 2), ("imp", 2), ("neg", 1), ("const0", 0), ("const1", 0)],
)
IMPLICATIONAL = Signature.from_pairs("implicational", [("imp", 2)])


def test_parse_and_format_are_inverse():
    for text in ["p", "const1", "imp(p, q)", "and(neg(p1), or(p2, const0))"]:
        formula = parse_formula(CLASSICAL, text)
        assert parse_formula(CLASSICAL, format_formula(formula)) == formula


def test_parse_builds_the_expected_tree():
    formula = parse_formula(CLASSICAL, "imp(p,neg(q))")
    assert formula == Application("imp", (Variable("p"), Application("neg", (Variable("q"),))))
    assert formula.size == 4
    assert formula.depth == 2
    assert format_formula(formula) == "imp(p, neg(q))"


def test_constant_is_not_a_variable():
    assert parse_formula(CLASSICAL, "const0") == Application("const0")
    assert parse_formula(IMPLICATIONAL, "const0") == Variable("const0")


@pytest.mark.parametrize(
    "text",
    ["imp(p)", "neg(p, q)", "foo(p)", "imp(p, q", "imp(p,, q)", "", "p1(q)", "neg"],
)
def test_parse_rejects(text):
    with pytest.raises(FormulaSyntaxError):
        parse_formula(CLASSICAL, text)


def test_syntax_error_reports_position():
    with pytest.raises(FormulaSyntaxError) as info:
        parse_formula(CLASSICAL, "imp(p, foo(q))")
    assert info.value.position == 7
    assert info.value.exit_code == 2


def test_parse_sequent():
    premises, conclusion = parse_sequent(CLASSICAL, "p, imp(p, q) |- q")
    assert premises == (Variable("p"), parse_formula(CLASSICAL, "imp(p,q)"))
    assert conclusion == Variable("q")
    assert format_sequent(premises, conclusion) == "p, imp(p, q) |- q"
    assert parse_sequent(CLASSICAL, "|- or(p, neg(p))")[0] == ()


def test_signature_rejects_reserved_and_duplicate_names():
    with pytest.raises(SignatureError):
        Signature.from_pairs("bad", [("p1", 0)])
    with pytest.raises(SignatureError):
        Signature.from_pairs("bad", [("imp", 2), ("imp", 1)])
    with pytest.raises(SignatureError):
        Signature.from_pairs("bad", [("1x", 1)])


def test_fresh_symbol_avoids_existing_connectives():
    assert CLASSICAL.fresh_symbol("one") == "one"
    assert CLASSICAL.fresh_symbol("neg") == "neg_"


def test_variable_order_is_natural():
    assert sorted_variables(["p10", "p2", "q", "p1", "p2"]) == ["p1", "p2", "p10", "q"]
    assert generated_variables(3) == ["p1", "p2", "p3"]


def test_vars_of_and_subformulas():
    formula = parse_formula(CLASSICAL, "imp(and(p, q), and(p, q))")
    assert vars_of(formula) == {"p", "q"}
    subs = subformulas(formula)
    assert [format_formula(s) for s in subs] == ["p", "q", "and(p, q)", "imp(and(p, q), and(p, q))"]


def test_formulas_upto_counts_and_order():
    layer = list(formulas_upto(IMPLICATIONAL, ["p1"], 2))
    # p1; imp(p1,p1); then the three pairs that use the new formula
    assert [format_formula(f) for f in layer] == [
        "p1",
        "imp(p1, p1)",
        "imp(p1, imp(p1, p1))",
        "imp(imp(p1, p1), p1)",
        "imp(imp(p1, p1), imp(p1, p1))",
    ]
    assert len(set(layer)) == len(layer)
    assert all(f.depth <= 2 for f in layer)


def test_formulas_upto_counts_depth_one_over_classical():
    formulas = list(formulas_upto(CLASSICAL, ["p1"], 1))
    # p1, const0, const1, then 3 binary connectives on 3 atoms and neg on 3
    assert len(formulas) == 3 + 3 * 9 + 3


def test_substitution_is_an_endomorphism():
    sigma = Substitution.of(p=parse_formula(CLASSICAL, "neg(q)"), q=Variable("r"))
    formula = parse_formula(CLASSICAL, "imp(p, q)")
    assert format_formula(sigma(formula)) == "imp(neg(q), r)"
    assert substitute(sigma, Application("const1")) == Application("const1")


def test_substitution_composition():
    inner = Substitution.of(p=parse_formula(CLASSICAL, "and(q, q)"))
    outer = Substitution.of(q=Variable("r"), p=Variable("s"))
    formula = parse_formula(CLASSICAL, "or(p, q)")
    composed = outer.compose(inner)
    assert composed(formula) == outer(inner(formula))


def test_substitute_checks_signature():
    with pytest.raises(SignatureError):
        substitute(
            Substitution.of(p=Application("neg", (Variable("q"),))),
            Variable("p"),
            IMPLICATIONAL,
        )


BOOLEAN = {
    "and": lambda a, b: a & b,
    "or": lambda a, b: a | b,
    "imp": lambda a, b: (1 - a) | b,
    "neg": lambda a: 1 - a,
    "const0": lambda: 0,
    "const1": lambda: 1,
}


def random_formula(rng, depth, names=("p", "q", "r")):
    if depth == 0 or rng.random() < 0.25:
        if rng.random() < 0.2:
            return Application(rng.choice(["const0", "const1"]))
        return Variable(rng.choice(names))
    symbol = rng.choice(["and", "or", "imp", "neg"])
    arity = CLASSICAL.arity(symbol)
    return Application(symbol, tuple(random_formula(rng, depth - 1, names) for _ in range(arity)))


def truth_value(formula, valuation):
    if isinstance(formula, Variable):
        return valuation[formula.name]
    return BOOLEAN[formula.connective](*(truth_value(a, valuation) for a in formula.arguments))


def test_random_formulas_survive_formatting():
    rng = random.Random(5)
    for _ in range(300):
        formula = random_formula(rng, rng.randrange(6))
        text = format_formula(formula)
        assert parse_formula(CLASSICAL, text) == formula
        assert parse_formula(CLASSICAL, text.replace(" ", "")) == formula
        assert parse_formula(CLASSICAL, text.replace(", ", " ,  ")) == formula


def test_substitution_commutes_with_evaluation():
    # v(sigma(f)) equals w(f) where w sends each variable x to v(sigma(x))
    rng = random.Random(11)
    for _ in range(200):
        formula = random_formula(rng, 4)
        sigma = Substitution.of(
            **{name: random_formula(rng, 3, ("p", "q")) for name in ("p", "q", "r")}
        )
        valuation = {"p": rng.randrange(2), "q": rng.randrange(2)}
        lifted = {name: truth_value(sigma.image(name), valuation) for name in ("p", "q", "r")}
        assert truth_value(sigma(formula), valuation) == truth_value(formula, lifted)
        assert vars_of(sigma(formula)) <= {"p", "q"}
