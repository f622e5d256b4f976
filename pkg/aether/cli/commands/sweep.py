"""
Aether CLI - Sweep Command

Runs a Monte-Carlo parameter sweep described by a TOML file.
"""

from pathlib import Path
from typing import Optional

import typer
from rich.console import Console
from rich.progress import BarColumn, Progress, SpinnerColumn, TextColumn
from rich.table import Table

from aether.cli.utils.options import parse_algorithms
from aether.core.exceptions import AetherException
from aether.core.experiments.sweep import SweepSpec, load_sweep_spec, run_sweep
from aether.core.experiments.writers import ResultWriter, write_summary

# Initialize console for rich output
console = Console()


def _fmt(value: Optional[float], spec: str = ".3f") -> str:
    return "-" if value is None else format(value, spec)


def sweep_command(
    spec_path: Path = typer.Argument(..., help="Sweep TOML file"),
    out: Path = typer.Option(Path("."), "--out", "-o", help="Directory for results.csv and summary.json"),
    seed: Optional[int] = typer.Option(None, "--seed", "-s", help="Override the sweep seed"),
    draws: Optional[int] = typer.Option(None, "--draws", "-n", help="Override the number of draws"),
    algorithms: Optional[str] = typer.Option(None, "--algorithms", "-a", help="Comma separated algorithm ids"),
    max_iters: Optional[int] = typer.Option(None, "--max-iters", help="Cap on outer iterations"),
    workers: Optional[int] = typer.Option(None, "--workers", "-w", help="Worker processes (defaults to settings)"),
    store: bool = typer.Option(False, "--store", help="Store the sweep in the results database"),
):
    """Run a parameter sweep and write plot-ready CSV."""
    try:
        spec = load_sweep_spec(spec_path)
        overrides = {
            "seed": seed,
            "num_draws": draws,
            "algorithms": parse_algorithms(algorithms),
            "max_iters": max_iters,
        }
        overrides = {k: v for k, v in overrides.items() if v is not None}
        if overrides:
            spec = SweepSpec.model_validate({**spec.model_dump(), **overrides})
    except (AetherException, ValueError) as e:
        console.print(f"[bold red]Error:[/bold red] {e}")
        raise typer.Exit(1)

    total = len(spec.values) * spec.num_draws * len(spec.algorithms)
    console.print(
        f"Sweeping [bold]{spec.parameter.value}[/bold] over {spec.values} "
        f"({spec.num_draws} draws, {', '.join(a.value for a in spec.algorithms)})"
    )

    with ResultWriter(Path(out) / "results.csv") as writer, Progress(
        SpinnerColumn(),
        TextColumn("[progress.description]{task.description}"),
        BarColumn(),
        TextColumn("{task.completed}/{task.total}"),
    ) as progress:
        task = progress.add_task("Running sweep...", total=total)

        def on_row(row):
            writer.write(row)
            progress.update(task, advance=1)

        result = run_sweep(spec, workers=workers, on_row=on_row)

    summary_path = write_summary(result, Path(out) / "summary.json")

    table = Table(title=f"Median transmit power vs {spec.parameter.value}")
    table.add_column("Value", style="cyan", justify="right")
    table.add_column("Algorithm", style="blue")
    table.add_column("Median (dBm)", justify="right")
    table.add_column("Mean (dBm)", justify="right")
    table.add_column("Feasible", justify="right", style="green")
    table.add_column("Infeasible", justify="right", style="red")
    for entry in result.aggregates:
        table.add_row(
            f"{entry.value:g}",
            entry.algorithm.value,
            _fmt(entry.median_dbm),
            _fmt(entry.mean_dbm),
            str(entry.feasible),
            str(entry.infeasible),
        )
    console.print(table)
    console.print(f"[green]Wrote {writer.count} rows to {writer.path} and summary to {summary_path}[/green]")

    if store:
        from aether.core.database.store import store_sweep
        sweep_id = store_sweep(result)
        console.print(f"[green]Stored sweep with ID {sweep_id}[/green]")
