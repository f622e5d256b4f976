"""
Aether Command Line Interface - Core Module

Contains the core Typer application and configuration.
"""

import typer
from rich.console import Console

from aether.utils.logging import configure_logging

# Initialize console for rich output
console = Console()

# Create Typer app
app = typer.Typer(
    name="aether",
    help="Aether: transmit power minimization for IRS-assisted SWIPT-NOMA downlinks",
    add_completion=False,
)


def version_callback(value: bool):
    """Display version information."""
    if value:
        from aether import __version__
        console.print(f"Aether CLI v{__version__}")
        raise typer.Exit()


@app.callback()
def main(
    version: bool = typer.Option(
        False, "--version", "-v", callback=version_callback, help="Show version information."
    ),
    verbose: bool = typer.Option(False, "--verbose", help="Log per-iteration progress."),
):
    """Aether CLI: joint decoding order, beamforming, power splitting and IRS phase design."""
    configure_logging("DEBUG" if verbose else None)


def load_commands():
    """Load all command modules and add them to the CLI app."""
    from aether.cli.commands.channels import channels_command
    from aether.cli.commands.check import check_command
    from aether.cli.commands.info import info_command
    from aether.cli.commands.results import app as results_app
    from aether.cli.commands.run import run_command
    from aether.cli.commands.sweep import sweep_command

    app.add_typer(results_app, name="results", help="Stored sweep results")

    app.command("run")(run_command)
    app.command("sweep")(sweep_command)
    app.command("check")(check_command)
    app.command("channels")(channels_command)
    app.command("info")(info_command)
