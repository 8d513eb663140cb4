from typing import Optional

from rich.panel import Panel
from rich.text import Text


class VerdictPanel:

    def __init__(self, verdict: str, holds: Optional[bool] = None):
        self.verdict = verdict
        self.holds = holds

    def render(self) -> Panel:
        if self.holds is None:
            style = "bright_cyan"
        elif self.holds:
            style = "bold green"
        else:
            style = "bold red"
        return Panel(Text(self.verdict, style=style), title="verdict", expand=False)
