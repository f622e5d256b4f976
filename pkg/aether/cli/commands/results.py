"""
Aether CLI - Results Commands

Browse sweeps stored with ``aether sweep --store``.
"""

from pathlib import Path
from typing import Optional

import typer
from rich.console import Console
from rich.table import Table

from aether.core.database.store import list_sweeps, load_aggregates, load_rows
from aether.core.experiments.writers import write_results_csv

app = typer.Typer(help="Stored sweep results")
console = Console()


@app.command("list")
def list_command():
    """
    List stored sweeps.
    """
    sweeps = list_sweeps()
    if not sweeps:
        console.print("No stored sweeps found.")
        return

    table = Table(title="Stored Sweeps")
    table.add_column("ID", style="cyan", no_wrap=True)
    table.add_column("Created", style="blue")
    table.add_column("Parameter", style="green")
    table.add_column("Values")
    table.add_column("Algorithms")
    table.add_column("Draws", justify="right")
    table.add_column("Rows", justify="right")
    for s in sweeps:
        table.add_row(
            str(s.id), s.created_at, s.parameter, ", ".join(f"{v:g}" for v in s.values),
            ", ".join(s.algorithms), str(s.num_draws), str(s.rows),
        )
    console.print(table)


@app.command("show")
def show_command(
    sweep_id: int = typer.Argument(..., help="Sweep ID"),
    export: Optional[Path] = typer.Option(None, "--export", "-e", help="Write the rows to this CSV file"),
):
    """
    Show the aggregates of a stored sweep.
    """
    aggregates = load_aggregates(sweep_id)
    if not aggregates:
        console.print(f"[bold red]Error:[/bold red] No sweep with ID {sweep_id}")
        raise typer.Exit(1)

    table = Table(title=f"Sweep {sweep_id}")
    table.add_column("Value", style="cyan", justify="right")
    table.add_column("Algorithm", style="blue")
    table.add_column("Median (dBm)", justify="right")
    table.add_column("Feasible", justify="right", style="green")
    table.add_column("Infeasible", justify="right", style="red")
    for a in aggregates:
        median = "-" if a.median_dbm is None else f"{a.median_dbm:.3f}"
        table.add_row(f"{a.value:g}", a.algorithm.value, median, str(a.feasible), str(a.infeasible))
    console.print(table)

    if export is not None:
        path = write_results_csv(load_rows(sweep_id), export)
        console.print(f"[green]Rows exported to {path}[/green]")
