"""Configuration for word distributions and Jensen-Shannon divergence."""

from __future__ import annotations

from pathlib import Path
from typing import Literal, Optional

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class DivergenceConfig(BaseSettings):
    """Configuration for divergence computation.

    Environment Variables:
        DIVERGENCE_TOP_K: Shared vocabulary size per pair (default: 10000)
        DIVERGENCE_STOPWORDS_PATH: Stopword list replacing the bundled one
        DIVERGENCE_USE_STOPWORDS: Drop stopwords before ranking (default: True)
        DIVERGENCE_MIN_TOKEN_LENGTH: Shortest token kept (default: 1)
        DIVERGENCE_LOG_BASE: "2" (bounded by 1) or "e" (default: "2")
    """

    model_config = SettingsConfigDict(
        env_prefix="DIVERGENCE_",
        case_sensitive=False,
        frozen=False,
    )

    top_k: int = Field(
        default=10_000,
        ge=1,
        description="Most frequent words kept per domain pair",
    )

    stopwords_path: Optional[Path] = Field(  # noqa: UP045
        default=None,
        description="Stopword list, one word per line (bundled English list if unset)",
    )

    use_stopwords: bool = Field(
        default=True,
        description="Exclude stopwords from the vocabulary",
    )

    min_token_length: int = Field(
        default=1,
        ge=1,
        description="Minimum token length in characters",
    )

    log_base: Literal["2", "e"] = Field(
        default="2",
        description="Logarithm base of the divergence",
    )
