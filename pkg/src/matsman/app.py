import logging
from typing import Any, Callable, Dict, List, Mapping, Optional, Sequence

from .config import DEFAULT_LIMITS, Limits
from .fixtures import (
    load_algebra,
    load_gmatrix,
    load_matrix,
    load_rules,
    to_dict,
    write_fixture,
)
from .logic import congruence, equivalence, lindenbaum, matrix, rules
from .logic.algebra import is_congruence
from .logic.language import (
    Formula,
    format_formula,
    format_sequent,
    parse_formula,
    parse_sequent,
)
from .ui.components import (
    AlgebraTable,
    FormulaList,
    PartitionTable,
    TextBlock,
    ValuationTable,
)
from .ui.renderer import Report, ReportRenderer

_logger = logging.getLogger(__name__)


def _formulas(items: Sequence[Formula]) -> List[str]:
    return [format_formula(f) for f in items]


def _valuation(valuation: Optional[Mapping[str, int]]) -> Optional[Dict[str, int]]:
    return None if valuation is None else {k: int(v) for k, v in valuation.items()}


def _term_labels(functions: matrix.TermFunctionAlgebra) -> Callable[[int], str]:
    return lambda g: format_formula(functions.representatives[g])


class MatsManApp:
    """Runs one subcommand: loads fixtures, calls the library, builds a Report."""

    def __init__(
        self,
        limits: Limits = DEFAULT_LIMITS,
        output_format: str = "text",
        no_color: bool = False,
    ):
        self.limits = limits
        self.renderer = ReportRenderer(output_format, no_color)

    def render(self, report: Report) -> str:
        return self.renderer.render(report)

    def check(self, source: str, sequent: str) -> Report:
        gm = load_gmatrix(source)
        premises, conclusion = parse_sequent(gm.algebra.signature, sequent)
        verdict = matrix.gmatrix_consequence(gm, premises, conclusion, self.limits)
        text = format_sequent(premises, conclusion)
        report = Report(
            "check",
            f"consequence in {source}",
            f"{text}: {'holds' if verdict else 'fails'}",
            verdict.holds,
            data={
                "sequent": text,
                "valuation": _valuation(verdict.valuation),
                "filter_index": verdict.filter_index,
            },
        )
        if verdict.valuation is not None:
            report.add("counter-valuation", ValuationTable(verdict.valuation, gm.algebra.label))
        return report

    def theorems(self, source: str, k: int, depth: int) -> Report:
        m = load_matrix(source)
        found = matrix.theorems_upto(m, k, depth, self.limits)
        return Report(
            "theorems",
            f"tautologies of {source}",
            f"{len(found)} tautologies",
            bound=f"{k} variables, depth {depth}",
            data={"theorems": _formulas(found)},
        ).add("tautologies", FormulaList(found))

    def leibniz(self, source: str, check: bool = False) -> Report:
        m = load_matrix(source)
        omega = congruence.leibniz_congruence(m)
        rows = [("Leibniz", omega)]
        data: Dict[str, Any] = {"congruence": to_dict(omega), "reduced": omega.is_identity()}
        holds: Optional[bool] = None
        verdict = "reduced" if omega.is_identity() else f"{omega.block_count} classes"
        if check:
            by_polynomials = congruence.leibniz_by_polynomials(m, self.limits)
            rows.append(("by polynomials", by_polynomials))
            holds = by_polynomials == omega
            data["polynomial_check"] = holds
            verdict += "; polynomial characterization " + ("agrees" if holds else "differs")
        return Report(
            "leibniz", f"Leibniz congruence of {source}", verdict, holds, data=data
        ).add("congruence", PartitionTable(rows, m.algebra.label))

    def reduce(self, source: str, output: Optional[str] = None) -> Report:
        m = load_matrix(source)
        reduced = congruence.reduce(m)
        if output is not None:
            write_fixture(reduced, output)
            _logger.info("reduced matrix written to %s", output)
        filter_text = ", ".join(reduced.algebra.label(a) for a in sorted(reduced.filter))
        return (
            Report(
                "reduce",
                f"Leibniz reduction of {source}",
                f"{m.algebra.size} -> {reduced.algebra.size} elements",
                data={"matrix": to_dict(reduced)},
            )
            .add("operations", AlgebraTable(reduced.algebra))
            .add("filter", TextBlock([f"{{{filter_text}}}"]))
        )

    def free(self, source: str, k: int) -> Report:
        algebra = load_algebra(source)
        functions = matrix.term_function_algebra(algebra, k, self.limits)
        return Report(
            "free",
            f"{k}-generated free algebra in the variety of {source}",
            f"{functions.size} term functions",
            bound=f"{k} variables",
            data={
                "size": functions.size,
                "representatives": _formulas(functions.representatives),
                "tables": functions.tables.tolist(),
            },
        ).add("representatives", FormulaList(functions.representatives))

    def lt(self, source: str, k: int, depth: int) -> Report:
        m = load_matrix(source)
        lt = lindenbaum.lt_algebra(m, k, self.limits)
        data: Dict[str, Any] = {
            "admits": lt.admits,
            "size": lt.algebra.size,
            "algebra": to_dict(lt.algebra),
            "one": lt.filter_class,
        }
        lines = [
            f"reduct: {lt.reduct.functions.size} term functions, "
            f"{len(lt.reduct.filter)} tautologies",
            f"quotient: {lt.algebra.size} elements",
            f"admits: {'yes' if lt.admits else 'no'}",
        ]
        holds = lt.admits
        if lt.admits:
            sweep = lindenbaum.canonical_valuation_check(m, k, depth, self.limits)
            holds = sweep.holds
            data["canonical_valuation"] = sweep.holds
            lines.append(
                f"canonical valuation: {'agrees' if sweep else 'differs'} "
                f"on {sweep.checked} term functions"
            )
            if sweep.witness is not None:
                data["witness"] = format_formula(sweep.witness)
                lines.append(f"witness: {format_formula(sweep.witness)}")
        report = Report(
            "lt",
            f"Lindenbaum-Tarski quotient of {source}",
            "admits the quotient" if lt.admits else "does not admit the quotient",
            holds,
            bound=f"{k} variables, depth {depth}",
            data=data,
        ).add("summary", TextBlock(lines))
        return report.add("quotient operations", AlgebraTable(lt.algebra))

    def congruences(self, source: str, k: int) -> Report:
        m = load_matrix(source)
        chain = congruence.congruence_chain(m, k, self.limits)
        functions = chain.rows[0].theory.functions
        label = _term_labels(functions)
        violations = chain.violations()
        report = Report(
            "congruences",
            f"Frege, Suszko, Leibniz and Tarski relations of {source}",
            "inclusion chain holds" if not violations else "inclusion chain broken",
            not violations,
            bound=f"{k} variables",
            data={
                "tarski": to_dict(chain.tarski),
                "theories": [
                    {
                        "members": sorted(row.theory.members),
                        "frege": to_dict(row.frege),
                        "suszko": to_dict(row.suszko),
                        "leibniz": to_dict(row.leibniz),
                    }
                    for row in chain.rows
                ],
                "violations": violations,
            },
        )
        report.add("Tarski congruence", PartitionTable([("Tarski", chain.tarski)], label))
        for index, row in enumerate(chain.rows):
            members = ", ".join(label(g) for g in sorted(row.theory.members))
            report.add(
                f"theory {index}: {{{members}}}",
                PartitionTable(
                    [("Frege", row.frege), ("Suszko", row.suszko), ("Leibniz", row.leibniz)],
                    label,
                ),
            )
        if violations:
            report.add("violations", TextBlock(violations))
        return report

    def rasiowa(self, source: str, arrow: str, k: int) -> Report:
        m = load_matrix(source)
        relation = congruence.rasiowa_relation(m, arrow, k, self.limits)
        data: Dict[str, Any] = {
            "pairs": sorted(list(p) for p in relation.pairs),
            "equivalence": relation.is_equivalence(),
        }
        report = Report(
            "rasiowa", f"Rasiowa relation of {source} for {arrow}", "", bound=f"{k} variables"
        )
        if relation.is_equivalence():
            partition = relation.to_partition()
            functions = matrix.term_function_algebra(m.algebra, k, self.limits)
            holds = is_congruence(functions.subpower, partition, self.limits)
            data.update(partition=to_dict(partition), congruence=holds)
            report.verdict = "a congruence" if holds else "an equivalence, not a congruence"
            report.holds = holds
            label = _term_labels(functions)
            report.add("classes", PartitionTable([("Rasiowa", partition)], label))
        else:
            report.verdict = "not an equivalence"
            report.holds = False
        report.data = data
        return report

    def implicative(self, source: str, arrow: str) -> Report:
        m = load_matrix(source)
        verdict = congruence.is_implicative_extensional(m, arrow, self.limits)
        report = Report(
            "implicative",
            f"implicative extensionality of {source} for {arrow}",
            "implicative extensional" if verdict else f"condition ({verdict.clause}) fails",
            verdict.holds,
            bound="conditions checked over all S-filters of the algebra",
            data={
                "clause": verdict.clause,
                "s_filter": None if verdict.s_filter is None else sorted(verdict.s_filter),
                "witness": verdict.witness,
                "connective": verdict.connective,
            },
        )
        if not verdict:
            assert verdict.s_filter is not None and verdict.witness is not None
            members = ", ".join(m.algebra.label(a) for a in sorted(verdict.s_filter))
            lines = [f"S-filter: {{{members}}}"]
            if verdict.connective is not None:
                lines.append(f"connective: {verdict.connective}")
            report.add("violation", TextBlock(lines))
            report.add("witness", ValuationTable(verdict.witness, m.algebra.label))
        return report

    def equiv(self, first: str, second: str) -> Report:
        a, b = load_gmatrix(first), load_gmatrix(second)
        verdict = equivalence.same_system(a, b, self.limits)
        data: Dict[str, Any] = {"equivalent": verdict.holds}
        report = Report(
            "equiv",
            f"{first} against {second}",
            "equivalent" if verdict else "not equivalent",
            verdict.holds,
            data=data,
        )
        found = verdict.counterexample
        if found is not None:
            valid, refuted = (first, second) if verdict.valid_in == "first" else (second, first)
            refuting = b if verdict.valid_in == "first" else a
            data["counterexample"] = {
                "sequent": str(found),
                "valid_in": valid,
                "refuted_by": refuted,
                "valuation": _valuation(found.valuation),
                "filter_index": found.filter_index,
            }
            report.add(
                "counterexample",
                TextBlock([str(found), f"valid in {valid}, refuted by {refuted}"]),
            )
            report.add("refuting valuation", ValuationTable(found.valuation, refuting.algebra.label))
        return report

    def model_check(self, source: str, rules_source: str) -> Report:
        gm = load_gmatrix(source)
        rule_set = load_rules(rules_source)
        verdict = rules.is_model(gm, rule_set, self.limits)
        report = Report(
            "model-check",
            f"{source} against the rules of {rules_source}",
            "a model" if verdict else f"rule {verdict.rule} fails",
            verdict.holds,
            data={"rule": verdict.rule, "valuation": _valuation(verdict.valuation)},
        )
        if verdict.valuation is not None:
            report.add("counter-valuation", ValuationTable(verdict.valuation, gm.algebra.label))
        return report

    def derive(
        self,
        rules_source: str,
        goal: str,
        hypotheses: Sequence[str],
        depth: int,
        max_size: int,
    ) -> Report:
        rule_set = load_rules(rules_source)
        signature = rule_set.signature
        goal_formula = parse_formula(signature, goal)
        given = [parse_formula(signature, h) for h in hypotheses]
        bounds = rules.DeriveBounds(depth, max_size)
        derivation = rules.derive(rule_set, given, goal_formula, bounds, self.limits)
        report = Report(
            "derive",
            f"derivation of {format_formula(goal_formula)}",
            f"found, {len(derivation)} lines" if derivation else "not found within bounds",
            derivation is not None,
            bound=f"{depth} rounds, instances of size at most {max_size}",
            data={
                "lines": None if derivation is None else [
                    {
                        "formula": format_formula(s.formula),
                        "justification": s.justification(),
                    }
                    for s in derivation
                ],
            },
        )
        if derivation is not None:
            report.add("derivation", TextBlock(derivation.lines()))
        return report

    def independence(
        self, rules_source: str, target: str, size_bound: int, depth: int
    ) -> Report:
        rule_set = load_rules(rules_source)
        result = rules.independence_search(
            rule_set, target, size_bound, self.limits, rules.DeriveBounds(depth=depth)
        )
        verdicts = {
            "independent": f"{target} is independent",
            "derivable": f"{target} is derivable from the other rules",
            "not found": f"no certificate up to size {size_bound}",
        }
        data: Dict[str, Any] = {"status": result.status, "visited": result.visited}
        report = Report(
            "independence",
            f"independence of {target} in {rules_source}",
            verdicts[result.status],
            result.status == "independent",
            bound=f"matrices up to size {size_bound}, proof search {depth} rounds",
            data=data,
        )
        if result.derivation is not None:
            data["derivation"] = result.derivation.lines()
            report.add("derivation", TextBlock(result.derivation.lines()))
        if result.matrix is not None:
            data["matrix"] = to_dict(result.matrix)
            data["valuation"] = _valuation(result.valuation)
            report.add("certificate", AlgebraTable(result.matrix.algebra))
            report.add("filter", TextBlock([str(sorted(result.matrix.filter))]))
            if result.valuation is not None:
                report.add("refuting valuation", ValuationTable(result.valuation))
        return report

    def closed_sets(self, source: str, k: int) -> Report:
        m = load_matrix(source)
        functions = matrix.term_function_algebra(m.algebra, k, self.limits)
        theories = matrix.closed_sets(m, k, self.limits, functions)
        label = _term_labels(functions)
        lines = [
            f"{index}. {{{', '.join(label(g) for g in sorted(t))}}}"
            + ("" if matrix.is_consistent(t, functions) else "  (inconsistent)")
            for index, t in enumerate(theories, 1)
        ]
        return Report(
            "closed-sets",
            f"theories of {source} over term functions",
            f"{len(theories)} closed sets over {functions.size} term functions",
            bound=f"{k} variables",
            data={
                "representatives": _formulas(functions.representatives),
                "closed_sets": [sorted(t) for t in theories],
            },
        ).add("closed sets", TextBlock(lines))

    def fregean(self, source: str, k: int) -> Report:
        m = load_matrix(source)
        failure = congruence.fregean_failure(m, k, self.limits)
        selfextensional = congruence.is_selfextensional(m, k, self.limits)
        lines = [
            f"Fregean: {'yes' if failure is None else 'no'}",
            f"selfextensional: {'yes' if selfextensional else 'no'}",
        ]
        data: Dict[str, Any] = {
            "fregean": failure is None,
            "selfextensional": selfextensional,
        }
        if failure is not None:
            data["failing_theory"] = _formulas(failure.formulas())
            lines.append("first theory whose Frege relation is not a congruence:")
            lines.extend(f"  {f}" for f in data["failing_theory"])
        return Report(
            "fregean",
            f"Fregean status of {source}",
            "Fregean" if failure is None else "not Fregean",
            failure is None,
            bound=f"{k} variables",
            data=data,
        ).add("summary", TextBlock(lines))
