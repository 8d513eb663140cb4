from typing import Optional

from rich.rule import Rule
from rich.text import Text


class HeaderFooter:

    def __init__(self, title: str, bound: Optional[str] = None):
        self.title = title
        self.bound = bound

    def render_header(self) -> Rule:
        return Rule(Text(f"matsman - {self.title}", style="bold bright_blue"))

    def render_footer(self) -> Text:
        if self.bound is None:
            return Text("exact: no bounds apply", style="bright_black")
        return Text(f"bounds: {self.bound}", style="bright_black")
