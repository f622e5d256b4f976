"""
Aether CLI - Info Command
"""

from rich.console import Console
from rich.table import Table

from aether import __version__
from aether.utils.config.settings import settings

# Initialize console for rich output
console = Console()


def info_command():
    """Show settings and the available conic solvers."""
    table = Table(title=f"Aether v{__version__}")
    table.add_column("Setting", style="cyan")
    table.add_column("Value", style="green")

    installed = settings.available_solvers
    table.add_row("Solver", settings.solver)
    table.add_row("Fallback solver", settings.fallback_solver)
    table.add_row("Installed solvers", ", ".join(installed) if installed else "[red]none[/red]")
    table.add_row(
        "Exponential cone",
        "yes" if settings.has_exponential_cone else "no (log terms majorized)",
    )
    table.add_row("Solver tolerance", f"{settings.solver_tol:g}")
    table.add_row("Residual tolerance", f"{settings.residual_tol:g}")
    table.add_row("Rank-one tolerance", f"{settings.rank_ratio_tol:g}")
    table.add_row("Workers", str(settings.workers))
    table.add_row("Data directory", settings.data_dir)
    table.add_row("Database", settings.database_url)
    table.add_row("Log level", settings.log_level.value)
    table.add_row("Problem dumps", settings.dump_dir or "off")
    console.print(table)

    if settings.solver not in installed:
        console.print(f"[bold yellow]Warning: solver {settings.solver} is not installed.[/bold yellow]")
