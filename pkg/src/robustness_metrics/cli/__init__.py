"""CLI interface for robustness metrics."""

from __future__ import annotations

from robustness_metrics.cli.robustness import cli

__all__ = ["cli"]
