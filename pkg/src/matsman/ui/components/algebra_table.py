from typing import List

from rich.console import Group
from rich.table import Table
from rich.text import Text

from ...logic.algebra import FiniteAlgebra


class AlgebraTable:
    """Operation tables: constants and unary operations as a list, binary ones
    as Cayley squares. Higher arities are listed row-major."""

    def __init__(self, algebra: FiniteAlgebra, max_size: int = 16):
        self.algebra = algebra
        self.max_size = max_size

    def render(self) -> Group:
        algebra = self.algebra
        label = algebra.label
        if algebra.size > self.max_size:
            return Group(Text(f"{algebra.size} elements (tables omitted)"))
        parts: List = []
        for connective in algebra.signature:
            symbol, arity = connective.symbol, connective.arity
            table = algebra.tables[symbol]
            if arity == 0:
                parts.append(Text(f"{symbol} = {label(table[0])}"))
            elif arity == 2:
                grid = Table(title=symbol, show_header=True, header_style="bold")
                grid.add_column(symbol)
                for b in range(algebra.size):
                    grid.add_column(Text(label(b)), justify="center")
                for a in range(algebra.size):
                    row = table[a * algebra.size:(a + 1) * algebra.size]
                    grid.add_row(Text(label(a)), *(Text(label(v)) for v in row))
                parts.append(grid)
            else:
                values = ", ".join(label(v) for v in table)
                parts.append(Text(f"{symbol}/{arity}: [{values}]"))
        return Group(*parts)
