from .header_footer import HeaderFooter
from .verdict_panel import VerdictPanel
from .partition_table import PartitionTable
from .algebra_table import AlgebraTable
from .formula_list import FormulaList
from .valuation_table import ValuationTable
from .text_block import TextBlock

__all__ = [
    'HeaderFooter',
    'VerdictPanel',
    'PartitionTable',
    'AlgebraTable',
    'FormulaList',
    'ValuationTable',
    'TextBlock'
]
