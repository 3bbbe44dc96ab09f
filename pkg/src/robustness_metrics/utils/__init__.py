"""Utility modules for robustness metrics."""

from __future__ import annotations

from robustness_metrics.utils.logging_config import get_logger, setup_logging

__all__ = ["get_logger", "setup_logging"]
