from .language import (
    Application,
    Connective,
    Formula,
    Signature,
    Substitution,
    Variable,
    format_formula,
    parse_formula,
    parse_sequent,
    substitute,
)
from .partition import Partition, Relation
from .algebra import FiniteAlgebra, PointedAlgebra
from .matrix import GMatrix, Matrix, TermFunctionAlgebra
from .rules import Rule, RuleSet

__all__ = [
    'Application',
    'Connective',
    'Formula',
    'Signature',
    'Substitution',
    'Variable',
    'format_formula',
    'parse_formula',
    'parse_sequent',
    'substitute',
    'Partition',
    'Relation',
    'FiniteAlgebra',
    'PointedAlgebra',
    'GMatrix',
    'Matrix',
    'TermFunctionAlgebra',
    'Rule',
    'RuleSet',
]
