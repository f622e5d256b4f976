"""
Aether Command Line Interface

Entry point for the ``aether`` console script.
"""

from aether.cli.core import app, load_commands

# Load all commands
load_commands()

if __name__ == "__main__":
    app()
