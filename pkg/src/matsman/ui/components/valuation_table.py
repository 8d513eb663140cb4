from typing import Callable, Mapping, Optional

from rich.table import Table
from rich.text import Text

from ...logic.language import sorted_variables


class ValuationTable:

    def __init__(self, valuation: Mapping[str, int], label: Optional[Callable[[int], str]] = None):
        self.valuation = valuation
        self.label = label or str

    def render(self) -> Table:
        table = Table(show_header=True, header_style="bold")
        table.add_column("variable")
        table.add_column("value", justify="center")
        for name in sorted_variables(self.valuation):
            table.add_row(name, Text(self.label(self.valuation[name])))
        return table
