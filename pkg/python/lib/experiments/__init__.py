"""
Experiment runner - strict specs, dispatch to the computational modules and
reproducible CSV / report artifacts.
"""

from .runner import EXPERIMENTS, Artifact, execute, list_builtins, load_metric, resolve_jobs, run
from .spec import CUTOFF_SHAPES, SUBCOMMAND_PARAMS, ExperimentSpec
from .writers import format_value, header_lines, write_csv, write_report

__all__ = [
    "CUTOFF_SHAPES",
    "EXPERIMENTS",
    "SUBCOMMAND_PARAMS",
    "Artifact",
    "ExperimentSpec",
    "execute",
    "format_value",
    "header_lines",
    "list_builtins",
    "load_metric",
    "resolve_jobs",
    "run",
    "write_csv",
    "write_report",
]
