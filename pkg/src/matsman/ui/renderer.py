import io
import json
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Protocol

from rich.console import Console, RenderableType
from rich.text import Text

from .components import HeaderFooter, VerdictPanel


class Component(Protocol):

    def render(self) -> RenderableType:
        ...


@dataclass
class Section:
    heading: str
    component: Component


@dataclass
class Report:
    """What a subcommand found: the text sections for people and `data` for
    machines. `holds` is None for reports that carry no verdict."""

    command: str
    title: str
    verdict: str
    holds: Optional[bool] = None
    bound: Optional[str] = None
    sections: List[Section] = field(default_factory=list)
    data: Dict[str, Any] = field(default_factory=dict)

    def add(self, heading: str, component: Component) -> "Report":
        self.sections.append(Section(heading, component))
        return self

    @property
    def exit_code(self) -> int:
        return 1 if self.holds is False else 0


class ReportRenderer:

    def __init__(self, output_format: str = "text", no_color: bool = False, width: int = 100):
        if output_format not in ("text", "json"):
            raise ValueError(f"unknown output format {output_format!r}")
        self.output_format = output_format
        self.no_color = no_color
        self.width = width

    def render(self, report: Report) -> str:
        if self.output_format == "json":
            return self.render_json(report)
        return self.render_text(report)

    def render_json(self, report: Report) -> str:
        payload = {
            "command": report.command,
            "title": report.title,
            "verdict": report.verdict,
            "holds": report.holds,
            "bound": report.bound,
            "data": report.data,
        }
        return json.dumps(payload, sort_keys=True, indent=2) + "\n"

    def render_text(self, report: Report) -> str:
        buffer = io.StringIO()
        console = Console(
            file=buffer,
            width=self.width,
            no_color=self.no_color,
            color_system=None if self.no_color else "standard",
            force_terminal=not self.no_color,
            highlight=False,
            emoji=False,
        )
        frame = HeaderFooter(report.title, report.bound)
        console.print(frame.render_header())
        console.print(VerdictPanel(report.verdict, report.holds).render())
        for section in report.sections:
            console.print(Text(section.heading, style="bold"))
            console.print(section.component.render())
        console.print(frame.render_footer())
        return buffer.getvalue()
