"""Inductive learning of declarative domain-specific solver heuristics."""

from ._core import (
    __version__,
    canonicalize,
    emit_heuristics,
    format_report,
    generate_task,
    improvement,
    learn,
    least_model,
)

__all__ = [
    "__version__",
    "canonicalize",
    "emit_heuristics",
    "format_report",
    "generate_task",
    "improvement",
    "learn",
    "least_model",
]
