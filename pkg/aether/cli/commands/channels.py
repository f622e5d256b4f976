"""
Aether CLI - Channels Command
"""

from pathlib import Path
from typing import Optional

import typer
from rich.console import Console

from aether.cli.utils.options import resolve_config
from aether.core.channels.io import dump_channels
from aether.core.exceptions import AetherException
from aether.core.experiments.scenario import draw_scenario

# Initialize console for rich output
console = Console()


def channels_command(
    out: Path = typer.Argument(..., help="Output file"),
    config_path: Optional[Path] = typer.Option(None, "--config", "-c", help="Scenario TOML file"),
    seed: Optional[int] = typer.Option(None, "--seed", "-s", help="Random seed (defaults to the scenario's rng_seed)"),
    draw: int = typer.Option(0, "--draw", help="Draw index within the seed"),
):
    """Write one seeded channel realization in the text dump format."""
    try:
        config = resolve_config(config_path)
        seed = config.rng_seed if seed is None else seed
        _, channels = draw_scenario(config, seed, draw)
        path = dump_channels(channels, out)
    except AetherException as e:
        console.print(f"[bold red]Error:[/bold red] {e}")
        raise typer.Exit(1)
    console.print(
        f"[green]Channels for K={channels.num_users} N={channels.num_antennas} "
        f"M={channels.num_elements} written to {path}[/green]"
    )
