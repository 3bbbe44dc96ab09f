"""Configuration management for robustness metrics."""

from __future__ import annotations

from robustness_metrics.config.analysis_config import AnalysisConfig, ScoreScale
from robustness_metrics.config.divergence_config import DivergenceConfig
from robustness_metrics.config.loader import build_config, load_config_file
from robustness_metrics.config.report_config import ReportConfig, ReportFormat
from robustness_metrics.config.simulation_config import SimConfig

__all__ = [
    "AnalysisConfig",
    "DivergenceConfig",
    "ReportConfig",
    "ReportFormat",
    "ScoreScale",
    "SimConfig",
    "build_config",
    "load_config_file",
]
