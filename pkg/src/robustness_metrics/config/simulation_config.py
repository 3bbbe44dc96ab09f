"""Configuration for the seeded domain-space simulation.

Example:
    config = SimConfig(n_domains=4, trials=10_000, seed=42)
    result = simulate(config)
"""

from __future__ import annotations

from pathlib import Path
from typing import Optional

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict

from robustness_metrics.models.theorem import PairMode


class SimConfig(BaseSettings):
    """Generator and run parameters of a simulation.

    Domain-space parameters describe how a space is drawn; run parameters
    describe how pairs are sampled from it. Range checks on trials and
    spreads are made by ``simulate`` and surface as InvalidConfigError.

    Environment Variables:
        SIM_N_DOMAINS: Number of domains (default: 6)
        SIM_SEED: Root seed (default: 0)
        SIM_TRIALS: Sampled pairs (default: 100000)
        SIM_PAIR_MODE: independent or distinct (default: independent)
        SIM_WORKERS: Worker threads (default: 1)
        SIM_BLOCK_SIZE: Trials per seeded block (default: 65536)
    """

    model_config = SettingsConfigDict(
        env_prefix="SIM_",
        case_sensitive=False,
        frozen=False,
    )

    n_domains: int = Field(default=6, description="Number of domains in the space")
    mu_delta: float = Field(default=0.0, description="Mean domain difficulty")
    sigma_delta: float = Field(default=1.0, description="Spread of domain difficulty")
    w_s: float = Field(default=0.5, description="Weight of source difficulty in ST")
    w_t: float = Field(default=0.5, description="Weight of target difficulty in ST")
    penalty_mean: float = Field(default=0.5, description="Minimum transfer penalty")
    penalty_sigma: float = Field(default=0.5, description="Spread of transfer penalties")
    base: float = Field(default=0.0, description="Score of a zero-difficulty domain")

    noise_sigma: float = Field(default=0.0, description="Noise added to cross-domain scores")
    seed: int = Field(default=0, ge=0, description="Root seed of every random stream")
    trials: int = Field(default=100_000, description="Number of sampled pairs")
    pair_mode: PairMode = Field(default=PairMode.INDEPENDENT, description="Pair sampling")
    workers: int = Field(default=1, ge=1, description="Worker threads running blocks")
    block_size: int = Field(
        default=65_536,
        ge=1,
        description="Trials per seeded block; part of the seed contract, not of parallelism",
    )
    trace_path: Optional[Path] = Field(  # noqa: UP045
        default=None,
        description="CSV file receiving (trial, ss, tt, st)",
    )
