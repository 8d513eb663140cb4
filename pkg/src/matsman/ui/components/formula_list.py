from typing import List, Sequence

from rich.console import RenderableType
from rich.table import Table
from rich.text import Text

from ...logic.language import Formula, format_formula


class FormulaList:

    def __init__(self, formulas: Sequence[Formula], numbered: bool = True, limit: int = 200):
        self.formulas = list(formulas)
        self.numbered = numbered
        self.limit = limit

    def render(self) -> Table:
        table = Table(show_header=False, box=None, pad_edge=False)
        if self.numbered:
            table.add_column(justify="right", style="bright_black")
        table.add_column(overflow="fold")
        for index, formula in enumerate(self.formulas[:self.limit], 1):
            cells: List[RenderableType] = [Text(format_formula(formula))]
            if self.numbered:
                cells.insert(0, f"{index}.")
            table.add_row(*cells)
        hidden = len(self.formulas) - self.limit
        if hidden > 0:
            table.add_row(*([""] if self.numbered else []), f"... {hidden} more")
        return table
