import logging
import sys
from typing import Any, Optional, Sequence, Tuple

import click
from rich.console import Console
from rich.logging import RichHandler

from . import __version__
from .app import MatsManApp
from .config import DEFAULT_LIMITS, Limits
from .errors import MatsmanError
from .ui.renderer import Report


def setup_logging(verbosity: int) -> None:
    level = logging.WARNING
    if verbosity == 1:
        level = logging.INFO
    elif verbosity > 1:
        level = logging.DEBUG
    handler = RichHandler(console=Console(stderr=True), show_path=False)
    logger = logging.getLogger("matsman")
    logger.handlers[:] = [handler]
    logger.setLevel(level)
    logger.propagate = False


class MatsmanGroup(click.Group):
    """Turns library errors into a message on stderr and their exit code."""

    def invoke(self, ctx: click.Context) -> Any:
        try:
            return super().invoke(ctx)
        except MatsmanError as exc:
            click.echo(f"error: {exc}", err=True)
            ctx.exit(exc.exit_code)


def _emit(ctx: click.Context, report: Report) -> None:
    app: MatsManApp = ctx.obj
    click.echo(app.render(report), nl=False)
    ctx.exit(report.exit_code)


_VARS = click.option("--vars", "-k", "k", default=1, show_default=True, type=click.IntRange(0),
                     help="Number of variables p1..pk")


@click.group(cls=MatsmanGroup)
@click.option("--max-valuations", default=DEFAULT_LIMITS.max_valuations, show_default=True,
              type=click.IntRange(1), help="Cap on enumerated valuations")
@click.option("--max-cells", default=DEFAULT_LIMITS.max_cells, show_default=True,
              type=click.IntRange(1), help="Cap on term-function table cells")
@click.option("--max-formulas", default=DEFAULT_LIMITS.max_formulas, show_default=True,
              type=click.IntRange(1), help="Cap on enumerated or derived formulas")
@click.option("--max-search", default=DEFAULT_LIMITS.max_search, show_default=True,
              type=click.IntRange(1), help="Cap on search nodes and closed sets")
@click.option("--format", "output_format", default="text", show_default=True,
              type=click.Choice(["text", "json"]), help="Report format")
@click.option("--no-color", is_flag=True, default=False, help="Disable colored output")
@click.option("--verbose", "-v", count=True, help="Log progress to stderr (-vv for debug)")
@click.version_option(version=__version__, prog_name="matsman")
@click.pass_context
def main(
    ctx: click.Context,
    max_valuations: int,
    max_cells: int,
    max_formulas: int,
    max_search: int,
    output_format: str,
    no_color: bool,
    verbose: int,
) -> None:
    """MatsMan - a workbench for finite logical matrices.

    Fixtures are JSON files or the names of bundled fixtures
    (b2, b2_imp, l3, g3, b2xb2, hilbert).
    """
    setup_logging(verbose)
    limits = Limits(max_valuations, max_cells, max_formulas, max_search)
    ctx.obj = MatsManApp(limits=limits, output_format=output_format, no_color=no_color)


@main.command()
@click.argument("matrix")
@click.argument("sequent")
@click.pass_context
def check(ctx: click.Context, matrix: str, sequent: str) -> None:
    """Decide a sequent "A1, ..., An |- B" in a matrix or g-matrix."""
    _emit(ctx, ctx.obj.check(matrix, sequent))


@main.command()
@click.argument("matrix")
@_VARS
@click.option("--depth", "-d", default=2, show_default=True, type=click.IntRange(0))
@click.pass_context
def theorems(ctx: click.Context, matrix: str, k: int, depth: int) -> None:
    """List the tautologies over p1..pk up to a formula depth."""
    _emit(ctx, ctx.obj.theorems(matrix, k, depth))


@main.command()
@click.argument("matrix")
@click.option("--check", is_flag=True, default=False,
              help="Also compute the congruence from unary polynomials")
@click.pass_context
def leibniz(ctx: click.Context, matrix: str, check: bool) -> None:
    """Compute the Leibniz congruence of a matrix."""
    _emit(ctx, ctx.obj.leibniz(matrix, check))


@main.command()
@click.argument("matrix")
@click.option("--output", "-o", type=click.Path(dir_okay=False, writable=True),
              help="Write the reduced matrix as a fixture")
@click.pass_context
def reduce(ctx: click.Context, matrix: str, output: Optional[str]) -> None:
    """Quotient a matrix by its Leibniz congruence."""
    _emit(ctx, ctx.obj.reduce(matrix, output))


@main.command()
@click.argument("algebra")
@_VARS
@click.pass_context
def free(ctx: click.Context, algebra: str, k: int) -> None:
    """Generate the k-variable term functions of an algebra."""
    _emit(ctx, ctx.obj.free(algebra, k))


@main.command()
@click.argument("matrix")
@_VARS
@click.option("--depth", "-d", default=3, show_default=True, type=click.IntRange(0),
              help="Depth of the canonical-valuation sweep")
@click.pass_context
def lt(ctx: click.Context, matrix: str, k: int, depth: int) -> None:
    """Build the Lindenbaum-Tarski quotient of the k-variable reduct."""
    _emit(ctx, ctx.obj.lt(matrix, k, depth))


@main.command()
@click.argument("matrix")
@_VARS
@click.pass_context
def congruences(ctx: click.Context, matrix: str, k: int) -> None:
    """Frege, Suszko and Leibniz relations per theory, and the Tarski congruence."""
    _emit(ctx, ctx.obj.congruences(matrix, k))


@main.command()
@click.argument("matrix")
@click.option("--arrow", default="imp", show_default=True)
@_VARS
@click.pass_context
def rasiowa(ctx: click.Context, matrix: str, arrow: str, k: int) -> None:
    """Compute the Rasiowa relation of a binary connective."""
    _emit(ctx, ctx.obj.rasiowa(matrix, arrow, k))


@main.command()
@click.argument("matrix")
@click.option("--arrow", default="imp", show_default=True)
@click.pass_context
def implicative(ctx: click.Context, matrix: str, arrow: str) -> None:
    """Check the implicative-extensional conditions for a connective."""
    _emit(ctx, ctx.obj.implicative(matrix, arrow))


@main.command()
@click.argument("first")
@click.argument("second")
@click.pass_context
def equiv(ctx: click.Context, first: str, second: str) -> None:
    """Decide whether two g-matrices define the same consequence."""
    _emit(ctx, ctx.obj.equiv(first, second))


@main.command("model-check")
@click.argument("matrix")
@click.argument("rules")
@click.pass_context
def model_check(ctx: click.Context, matrix: str, rules: str) -> None:
    """Check that every rule preserves the filter."""
    _emit(ctx, ctx.obj.model_check(matrix, rules))


@main.command()
@click.argument("rules")
@click.option("--goal", "-g", required=True, help="Formula to derive")
@click.option("--hyp", "hypotheses", multiple=True, help="Hypothesis (repeatable)")
@click.option("--depth", "-d", default=5, show_default=True, type=click.IntRange(1),
              help="Rounds of rule application")
@click.option("--max-size", default=20, show_default=True, type=click.IntRange(1),
              help="Largest formula size admitted as an instance")
@click.pass_context
def derive(
    ctx: click.Context,
    rules: str,
    goal: str,
    hypotheses: Tuple[str, ...],
    depth: int,
    max_size: int,
) -> None:
    """Search for a linear derivation within bounds."""
    _emit(ctx, ctx.obj.derive(rules, goal, hypotheses, depth, max_size))


@main.command()
@click.argument("rules")
@click.option("--target", "-t", required=True, help="Name of the axiom to test")
@click.option("--size-bound", "-s", default=3, show_default=True, type=click.IntRange(1))
@click.option("--depth", "-d", default=3, show_default=True, type=click.IntRange(1),
              help="Rounds of the preliminary proof search")
@click.pass_context
def independence(ctx: click.Context, rules: str, target: str, size_bound: int, depth: int) -> None:
    """Look for a matrix separating an axiom from the other rules."""
    _emit(ctx, ctx.obj.independence(rules, target, size_bound, depth))


@main.command("closed-sets")
@click.argument("matrix")
@_VARS
@click.pass_context
def closed_sets(ctx: click.Context, matrix: str, k: int) -> None:
    """List the theories of the k-variable reduct."""
    _emit(ctx, ctx.obj.closed_sets(matrix, k))


@main.command()
@click.argument("matrix")
@_VARS
@click.pass_context
def fregean(ctx: click.Context, matrix: str, k: int) -> None:
    """Report whether the consequence is Fregean and selfextensional."""
    _emit(ctx, ctx.obj.fregean(matrix, k))


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Run the CLI in-process and return its exit code."""
    try:
        args = sys.argv[1:] if argv is None else list(argv)
        result = main.main(args=args, prog_name="matsman", standalone_mode=False)
    except click.ClickException as exc:
        exc.show()
        return exc.exit_code
    except click.exceptions.Abort:
        return 1
    return result if isinstance(result, int) else 0


if __name__ == "__main__":
    main()
