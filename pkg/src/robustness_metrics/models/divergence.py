"""Pydantic models for corpora, word distributions and divergences."""

from __future__ import annotations

from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from robustness_metrics.models.performance import DomainId


class Corpus(BaseModel):
    """Documents of one domain.

    Attributes:
        domain: Domain identifier
        documents: Raw document texts
        source: Where the documents were read from (recorded in reports)
    """

    domain: DomainId
    documents: list[str] = Field(min_length=1)
    source: Optional[str] = None  # noqa: UP045

    model_config = ConfigDict(frozen=True)


class TokenDistribution(BaseModel):
    """Normalized word frequencies over an ordered vocabulary."""

    support: tuple[str, ...]
    probs: tuple[float, ...]

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def _check_probs(self) -> TokenDistribution:
        if len(self.support) != len(self.probs):
            raise ValueError("support and probs differ in length")
        if any(p < 0.0 or p > 1.0 for p in self.probs):
            raise ValueError("probabilities must lie in [0, 1]")
        return self

    def as_dict(self) -> dict[str, float]:
        """Get the distribution as a word -> probability map."""
        return dict(zip(self.support, self.probs))


class DivergenceResult(BaseModel):
    """Jensen-Shannon divergence of one unordered domain pair.

    Attributes:
        pair: The two domains, sorted
        jsd: Divergence value
        vocab_size_used: Size of the shared top-k support
        log_base: "2" or "e"
    """

    pair: tuple[str, str]
    jsd: float = Field(ge=0.0)
    vocab_size_used: int = Field(ge=1)
    log_base: str = "2"

    model_config = ConfigDict(frozen=True)


class DivergenceFailure(BaseModel):
    """A domain pair whose divergence could not be computed."""

    pair: tuple[str, str]
    error: str

    model_config = ConfigDict(frozen=True)


class DivergenceMatrix(BaseModel):
    """Divergences of all unordered pairs, plus per-pair failures."""

    results: list[DivergenceResult] = Field(default_factory=list)
    failures: list[DivergenceFailure] = Field(default_factory=list)
    corpus_sources: dict[str, str] = Field(default_factory=dict)

    model_config = ConfigDict(frozen=True)

    def get(self, a: str, b: str) -> Optional[DivergenceResult]:  # noqa: UP045
        """Look a pair up in either order."""
        key = tuple(sorted((a, b)))
        for result in self.results:
            if result.pair == key:
                return result
        return None

    def as_mapping(self) -> dict[tuple[str, str], float]:
        """Get divergences keyed by both orders of each pair."""
        mapping: dict[tuple[str, str], float] = {}
        for result in self.results:
            a, b = result.pair
            mapping[(a, b)] = result.jsd
            mapping[(b, a)] = result.jsd
        return mapping
