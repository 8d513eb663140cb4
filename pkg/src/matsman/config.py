from dataclasses import dataclass


@dataclass(frozen=True)
class Limits:
    """Hard caps that turn exponential blowups into explicit errors."""

    max_valuations: int = 2 ** 20
    max_cells: int = 2 ** 20
    max_formulas: int = 2 ** 20
    max_search: int = 2 ** 20


DEFAULT_LIMITS = Limits()
