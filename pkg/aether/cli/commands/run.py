"""
Aether CLI - Run Command

Runs one or more algorithms on a single seeded scenario.
"""

import time
from pathlib import Path
from typing import Optional

import typer
from rich.console import Console
from rich.table import Table

from aether.cli.utils.options import parse_algorithms, resolve_config
from aether.core.channels.streams import Stage, stream
from aether.core.exceptions import AetherException, ConfigError
from aether.core.experiments.scenario import draw_scenario
from aether.core.experiments.writers import save_solution, trace_path
from aether.core.model.feasibility import check_feasibility
from aether.core.model.types import AlgorithmId
from aether.core.model.units import watts_to_dbm
from aether.core.optimization.baselines import evaluation_channels, evaluation_config, run_algorithm
from aether.utils.config.settings import settings

# Initialize console for rich output
console = Console()


def run_command(
    config_path: Optional[Path] = typer.Option(None, "--config", "-c", help="Scenario TOML file (defaults to the reference scenario)"),
    seed: Optional[int] = typer.Option(None, "--seed", "-s", help="Random seed (defaults to the scenario's rng_seed)"),
    draw: int = typer.Option(0, "--draw", help="Draw index within the seed"),
    out: Path = typer.Option(Path("."), "--out", "-o", help="Directory for trace and solution files"),
    algorithms: Optional[str] = typer.Option(None, "--algorithms", "-a", help="Comma separated algorithm ids"),
    max_iters: Optional[int] = typer.Option(None, "--max-iters", help="Cap on outer iterations"),
    dump_dir: Optional[Path] = typer.Option(None, "--dump-dir", help="Write every conic subproblem here as text"),
):
    """Run algorithms on one scenario and print a summary."""
    try:
        config = resolve_config(config_path)
    except ConfigError as e:
        console.print(f"[bold red]Error:[/bold red] {e}")
        raise typer.Exit(1)
    selected = parse_algorithms(algorithms) or [AlgorithmId.JDBPR_OPT]
    seed = config.rng_seed if seed is None else seed
    if dump_dir is not None:
        settings.dump_dir = str(dump_dir)

    with console.status("[bold green]Drawing scenario..."):
        _, channels = draw_scenario(config, seed, draw)

    table = Table(title=f"K={config.num_users} N={config.num_antennas} M={config.num_elements} seed={seed} draw={draw}")
    table.add_column("Algorithm", style="cyan", no_wrap=True)
    table.add_column("Power (dBm)", justify="right")
    table.add_column("Power (W)", justify="right")
    table.add_column("Iterations", justify="right")
    table.add_column("Termination", style="blue")
    table.add_column("Feasible", style="green")
    table.add_column("Time (s)", justify="right")

    failures = 0
    for algorithm in selected:
        start = time.time()
        try:
            with console.status(f"[bold green]Running {algorithm.value}..."):
                solution = run_algorithm(algorithm, config, channels, stream(seed, draw, Stage.ALGORITHM), max_iters=max_iters)
        except AetherException as e:
            failures += 1
            console.print(f"[bold red]Error:[/bold red] {algorithm.value}: {e}")
            table.add_row(algorithm.value, "-", "-", "-", type(e).__name__, "[red]no[/red]", f"{time.time() - start:.1f}")
            continue

        eval_channels = evaluation_channels(solution, channels)
        eval_config = evaluation_config(solution, config)
        report = check_feasibility(eval_channels, solution, eval_config)
        solution.trace.to_csv(trace_path(out, algorithm.value))
        save_solution(solution, eval_config, eval_channels, Path(out) / f"solution_{algorithm.value}.json")

        table.add_row(
            algorithm.value,
            f"{watts_to_dbm(solution.objective):.3f}",
            f"{solution.objective:.6e}",
            str(solution.iterations),
            solution.termination.value,
            "[green]yes[/green]" if report.passed else "[red]no[/red]",
            f"{time.time() - start:.1f}",
        )

    console.print(table)
    console.print(f"Trace and solution files written to [bold]{out}[/bold]")
    if failures:
        raise typer.Exit(1)
