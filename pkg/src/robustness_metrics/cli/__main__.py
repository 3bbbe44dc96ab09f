"""CLI entry point for direct execution."""

from __future__ import annotations

from robustness_metrics.cli.robustness import cli

if __name__ == "__main__":
    cli()
