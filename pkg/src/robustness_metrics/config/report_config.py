"""Configuration for report output."""

from __future__ import annotations

from enum import Enum

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class ReportFormat(str, Enum):
    """Output format of an emitted report."""

    JSON = "json"
    MARKDOWN = "md"
    CSV = "csv"


class ReportConfig(BaseSettings):
    """Configuration for report export.

    Attributes:
        format: Output format
        deterministic: Leave generated_at empty so reruns are byte-identical
        decimals: Decimal places in Markdown tables
        encoding: Character encoding of written files
    """

    format: ReportFormat = Field(default=ReportFormat.JSON, description="Output format")
    deterministic: bool = Field(
        default=False, description="Omit the generation timestamp"
    )
    decimals: int = Field(
        default=2, ge=0, le=10, description="Decimal places in Markdown tables"
    )
    encoding: str = Field(default="utf-8", description="Character encoding for output files")

    model_config = SettingsConfigDict(
        env_prefix="REPORT_", case_sensitive=False, extra="ignore"
    )
