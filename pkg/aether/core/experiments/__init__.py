"""Scenario defaults, Monte-Carlo sweeps and result files."""
from aether.core.experiments.scenario import default_config, draw_scenario
from aether.core.experiments.sweep import (
    AggregateRow,
    ResultRow,
    SweepParameter,
    SweepResult,
    SweepSpec,
    aggregate,
    load_sweep_spec,
    run_cell,
    run_sweep,
)
from aether.core.experiments.writers import (
    ResultWriter,
    SolutionRecord,
    load_solution,
    read_results_csv,
    save_solution,
    write_results_csv,
    write_summary,
)

__all__ = [
    "AggregateRow", "ResultRow", "ResultWriter", "SolutionRecord", "SweepParameter", "SweepResult",
    "SweepSpec", "aggregate", "default_config", "draw_scenario", "load_solution", "load_sweep_spec",
    "read_results_csv", "run_cell", "run_sweep", "save_solution", "write_results_csv", "write_summary",
]
