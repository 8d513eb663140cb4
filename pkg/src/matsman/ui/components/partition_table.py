from typing import Callable, Optional, Sequence, Tuple

from rich.table import Table
from rich.text import Text

from ...logic.partition import Partition


class PartitionTable:
    """Several partitions of one universe, one row per partition."""

    def __init__(
        self,
        rows: Sequence[Tuple[str, Partition]],
        label: Optional[Callable[[int], str]] = None,
    ):
        self.rows = list(rows)
        self.label = label or str

    def _blocks(self, partition: Partition) -> str:
        return " | ".join(
            "{" + ", ".join(self.label(a) for a in sorted(block)) + "}"
            for block in partition.classes()
        )

    def render(self) -> Table:
        table = Table(show_header=True, header_style="bold")
        table.add_column("relation")
        table.add_column("blocks", justify="right")
        table.add_column("classes", overflow="fold")
        for name, partition in self.rows:
            table.add_row(name, str(partition.block_count), Text(self._blocks(partition)))
        return table
