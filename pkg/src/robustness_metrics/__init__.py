"""Domain robustness metrics - Source/Target drops, scenarios and theorem checks."""

__version__ = "0.1.0"
