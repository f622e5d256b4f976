"""
Aether CLI - Check Command

Re-validates a stored solution against the original constraints.
"""

from pathlib import Path
from typing import Optional

import typer
from rich.console import Console
from rich.table import Table

from aether.core.exceptions import AetherException
from aether.core.experiments.writers import load_solution
from aether.core.model.feasibility import check_feasibility

# Initialize console for rich output
console = Console()


def check_command(
    solution_path: Path = typer.Argument(..., help="solution_<algorithm>.json written by 'aether run'"),
    tol: Optional[float] = typer.Option(None, "--tol", help="Feasibility tolerance (defaults to the scenario's)"),
    show_all: bool = typer.Option(False, "--all", help="List passing constraints too"),
):
    """Check a stored solution; exits with code 1 if it is infeasible."""
    try:
        record = load_solution(solution_path)
        report = check_feasibility(record.to_channels(), record.to_solution(), record.to_config(), tol=tol)
    except (AetherException, ValueError) as e:
        console.print(f"[bold red]Error:[/bold red] {e}")
        raise typer.Exit(1)

    table = Table(title=f"{record.algorithm.value}: {record.objective:.6e} W")
    table.add_column("Constraint", style="cyan")
    table.add_column("Users", style="blue")
    table.add_column("Margin", justify="right")
    table.add_column("Status")
    for check in report.checks:
        if check.passed and not show_all:
            continue
        status = "[green]ok[/green]" if check.passed else "[red]violated[/red]"
        if check.informational:
            status = "[yellow]info[/yellow]" if not check.passed else status
        table.add_row(check.kind.value, ",".join(str(u) for u in check.users), f"{check.margin:.3e}", status)
    if table.row_count:
        console.print(table)

    if report.passed:
        console.print(f"[bold green]Feasible[/bold green] (minimum margin {report.min_margin:.3e}, tol {report.tol:g})")
    else:
        console.print(f"[bold red]Infeasible:[/bold red] {len(report.failed)} constraint(s) violated")
        raise typer.Exit(1)
