from typing import Sequence

from rich.text import Text


class TextBlock:

    def __init__(self, lines: Sequence[str]):
        self.lines = list(lines)

    def render(self) -> Text:
        return Text("\n".join(self.lines))
