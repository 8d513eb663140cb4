"""JSON fixture files: one object per file, one of five kinds.

    algebra    {"signature": ..., "size": n, "tables": {...}, "labels": [...]}
    matrix     {"algebra": ..., "filter": [...]}
    gmatrix    {"algebra": ..., "filters": [[...], ...]}
    rules      {"signature": ..., "rules": [{"name", "premises", "conclusion"}, ...]}
    partition  {"size": n, "blocks": [...]}

A signature is {"name": ..., "connectives": [{"sym": "imp", "arity": 2}, ...]}.
Tables are row-major with the leftmost argument most significant.
"""

import json
import logging
from importlib import resources
from pathlib import Path
from typing import Any, Dict, Tuple, Union

from .errors import FixtureError, MatsmanError
from .logic.algebra import FiniteAlgebra
from .logic.language import Signature, format_formula, parse_formula
from .logic.matrix import GMatrix, Matrix
from .logic.partition import Partition
from .logic.rules import Rule, RuleSet

_logger = logging.getLogger(__name__)

Fixture = Union[FiniteAlgebra, Matrix, GMatrix, RuleSet, Partition]


def bundled_names() -> Tuple[str, ...]:
    folder = resources.files("matsman") / "data"
    return tuple(sorted(p.name[:-5] for p in folder.iterdir() if p.name.endswith(".json")))


def read_text(source: str) -> Tuple[str, str]:
    """Text of a fixture given a path or the name of a bundled fixture."""
    path = Path(source)
    if path.is_file():
        return path.read_text(encoding="utf-8"), str(path)
    name = source[:-5] if source.endswith(".json") else source
    if name in bundled_names():
        bundled = resources.files("matsman") / "data" / f"{name}.json"
        return bundled.read_text(encoding="utf-8"), f"bundled:{name}"
    raise FixtureError(f"no fixture file or bundled fixture named {source!r}")


def kind_of(data: Dict[str, Any]) -> str:
    if "filters" in data:
        return "gmatrix"
    if "filter" in data:
        return "matrix"
    if "rules" in data:
        return "rules"
    if "blocks" in data:
        return "partition"
    if "tables" in data:
        return "algebra"
    raise FixtureError("cannot tell the fixture kind from its keys")


def signature_from_dict(data: Dict[str, Any]) -> Signature:
    return Signature.from_pairs(
        str(data.get("name", "")),
        ((str(c["sym"]), int(c["arity"])) for c in data["connectives"]),
    )


def algebra_from_dict(data: Dict[str, Any]) -> FiniteAlgebra:
    labels = data.get("labels")
    return FiniteAlgebra(
        signature_from_dict(data["signature"]),
        int(data["size"]),
        {str(s): tuple(int(v) for v in t) for s, t in data["tables"].items()},
        tuple(str(x) for x in labels) if labels is not None else None,
    )


def matrix_from_dict(data: Dict[str, Any]) -> Matrix:
    if not data["filter"]:
        raise FixtureError("a matrix fixture needs a nonempty filter")
    return Matrix(algebra_from_dict(data["algebra"]), frozenset(data["filter"]))


def gmatrix_from_dict(data: Dict[str, Any]) -> GMatrix:
    return GMatrix(
        algebra_from_dict(data["algebra"]),
        tuple(frozenset(int(a) for a in f) for f in data["filters"]),
    )


def rules_from_dict(data: Dict[str, Any]) -> RuleSet:
    signature = signature_from_dict(data["signature"])
    return RuleSet(
        signature,
        tuple(
            Rule(
                str(r["name"]),
                tuple(parse_formula(signature, p) for p in r.get("premises", [])),
                parse_formula(signature, r["conclusion"]),
            )
            for r in data["rules"]
        ),
    )


def partition_from_dict(data: Dict[str, Any]) -> Partition:
    blocks = [int(b) for b in data["blocks"]]
    if len(blocks) != int(data["size"]):
        raise FixtureError("partition size does not match its block list")
    return Partition.from_labels(blocks)


_READERS = {
    "algebra": algebra_from_dict,
    "matrix": matrix_from_dict,
    "gmatrix": gmatrix_from_dict,
    "rules": rules_from_dict,
    "partition": partition_from_dict,
}


def parse_fixture(text: str, origin: str = "<string>") -> Fixture:
    try:
        data = json.loads(text)
        if not isinstance(data, dict):
            raise FixtureError("a fixture must be a single JSON object")
        fixture: Fixture = _READERS[kind_of(data)](data)
    except (MatsmanError, ValueError, KeyError, TypeError) as exc:
        raise FixtureError(f"{origin}: {exc}") from None
    _logger.debug("loaded %s from %s", type(fixture).__name__, origin)
    return fixture


def load_fixture(source: str) -> Fixture:
    text, origin = read_text(source)
    return parse_fixture(text, origin)


def load_algebra(source: str) -> FiniteAlgebra:
    fixture = load_fixture(source)
    if isinstance(fixture, (Matrix, GMatrix)):
        return fixture.algebra
    if not isinstance(fixture, FiniteAlgebra):
        raise FixtureError(f"{source}: expected an algebra or a matrix")
    return fixture


def load_matrix(source: str) -> Matrix:
    fixture = load_fixture(source)
    if isinstance(fixture, GMatrix) and len(fixture.filters) == 1 and fixture.filters[0]:
        return fixture.matrices()[0]
    if not isinstance(fixture, Matrix):
        raise FixtureError(f"{source}: expected a matrix")
    return fixture


def load_gmatrix(source: str) -> GMatrix:
    fixture = load_fixture(source)
    if isinstance(fixture, Matrix):
        return fixture.as_gmatrix()
    if not isinstance(fixture, GMatrix):
        raise FixtureError(f"{source}: expected a matrix or a g-matrix")
    return fixture


def load_rules(source: str) -> RuleSet:
    fixture = load_fixture(source)
    if not isinstance(fixture, RuleSet):
        raise FixtureError(f"{source}: expected a rule set")
    return fixture


def signature_to_dict(signature: Signature) -> Dict[str, Any]:
    return {
        "name": signature.name,
        "connectives": [{"sym": c.symbol, "arity": c.arity} for c in signature],
    }


def algebra_to_dict(algebra: FiniteAlgebra) -> Dict[str, Any]:
    data: Dict[str, Any] = {
        "signature": signature_to_dict(algebra.signature),
        "size": algebra.size,
        "tables": {s: list(t) for s, t in algebra.tables.items()},
    }
    if algebra.labels is not None:
        data["labels"] = list(algebra.labels)
    return data


def to_dict(fixture: Fixture) -> Dict[str, Any]:
    """The fixture-format object for any fixture kind."""
    if isinstance(fixture, FiniteAlgebra):
        return algebra_to_dict(fixture)
    if isinstance(fixture, Matrix):
        return {"algebra": algebra_to_dict(fixture.algebra), "filter": sorted(fixture.filter)}
    if isinstance(fixture, GMatrix):
        return {
            "algebra": algebra_to_dict(fixture.algebra),
            "filters": [sorted(f) for f in fixture.filters],
        }
    if isinstance(fixture, RuleSet):
        return {
            "signature": signature_to_dict(fixture.signature),
            "rules": [
                {
                    "name": r.name,
                    "premises": [format_formula(p) for p in r.premises],
                    "conclusion": format_formula(r.conclusion),
                }
                for r in fixture.rules
            ],
        }
    if isinstance(fixture, Partition):
        return {"size": fixture.size, "blocks": list(fixture.blocks)}
    raise TypeError(f"not a fixture: {type(fixture).__name__}")


def dumps(fixture: Fixture) -> str:
    return json.dumps(to_dict(fixture), sort_keys=True, indent=2) + "\n"


def write_fixture(fixture: Fixture, path: str) -> None:
    Path(path).write_text(dumps(fixture), encoding="utf-8")
