"""Pydantic models for cross-domain performance results and drop metrics."""

from __future__ import annotations

from enum import Enum
from typing import Annotated, Optional

from pydantic import BaseModel, ConfigDict, Field, StringConstraints, model_validator

IDENTITY_TOLERANCE = 1e-12

DomainId = Annotated[str, StringConstraints(strip_whitespace=True, min_length=1)]
Label = Annotated[str, StringConstraints(strip_whitespace=True, min_length=1)]
Score = Annotated[float, Field(allow_inf_nan=False)]


class Scenario(str, Enum):
    """Domain shift scenario, decided by the signs of SD and TD.

    Scenarios:
        CLASSIC: SD > 0 and TD > 0
        OBSERVED: SD > 0 and TD < 0 (shift to a harder domain)
        UNOBSERVED: SD < 0 and TD > 0 (shift to an easier domain)
        NO_CHALLENGE: SD < 0 and TD < 0
        BOUNDARY: |SD| or |TD| within the tie tolerance
    """

    CLASSIC = "classic"
    OBSERVED = "observed"
    UNOBSERVED = "unobserved"
    NO_CHALLENGE = "no_challenge"
    BOUNDARY = "boundary"


class Ordering(str, Enum):
    """Strict ascending order of the (SS, TT, ST) triplet of a shift."""

    ST_SS_TT = "ST<SS<TT"
    ST_TT_SS = "ST<TT<SS"
    TT_ST_SS = "TT<ST<SS"
    SS_ST_TT = "SS<ST<TT"
    SS_TT_ST = "SS<TT<ST"
    TT_SS_ST = "TT<SS<ST"
    DEGENERATE = "degenerate"

    @classmethod
    def strict(cls) -> list[Ordering]:
        """Get the six strict orderings in a fixed order."""
        return [member for member in cls if member is not cls.DEGENERATE]


class DropKind(str, Enum):
    """Which drop a per-source aggregate works on."""

    SD = "sd"
    TD = "td"


class RunRecord(BaseModel):
    """One cross-domain evaluation result.

    Attributes:
        task: Task label (e.g. "sa")
        model: Model label
        source: Training (or demonstration) domain
        target: Evaluation domain
        score: Task metric on the 0-100 scale
    """

    task: Label
    model: Label
    source: DomainId
    target: DomainId
    score: Score

    model_config = ConfigDict(frozen=True)

    @property
    def key(self) -> tuple[str, str, str, str]:
        """Get the unique (task, model, source, target) key."""
        return (self.task, self.model, self.source, self.target)


class PerformanceMatrix(BaseModel):
    """Source-to-target score grid of one (task, model).

    Diagonal cells are in-domain scores. The grid may be ragged.

    Attributes:
        task: Task label
        model: Model label
        scores: Map from (source, target) to score
        domains: Sorted union of all sources and targets
    """

    task: Label
    model: Label
    scores: dict[tuple[str, str], Score]
    domains: tuple[str, ...]

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def _check_domains(self) -> PerformanceMatrix:
        known = set(self.domains)
        for source, target in self.scores:
            if source not in known or target not in known:
                raise ValueError(f"cell {source}->{target} uses a domain outside `domains`")
        return self

    @property
    def is_full_cross_product(self) -> bool:
        """Whether all n^2 (source, target) cells are present."""
        return len(self.scores) == len(self.domains) ** 2

    def score(self, source: str, target: str) -> Optional[float]:  # noqa: UP045
        """Get a cell score, or None when the cell is missing."""
        return self.scores.get((source, target))


class ShiftMetrics(BaseModel):
    """Scores and drops of a single domain shift.

    Attributes:
        source: Source domain
        target: Target domain
        ss: Source in-domain performance
        tt: Target in-domain performance
        st: Cross-domain performance
        sd: Source drop, SS - ST
        td: Target drop, TT - ST
        idd: In-domain difference, SS - TT
        scenario: Scenario label
        ordering: Ordering label of (SS, TT, ST)
    """

    source: DomainId
    target: DomainId
    ss: Score
    tt: Score
    st: Score
    sd: Score
    td: Score
    idd: Score
    scenario: Scenario
    ordering: Ordering

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def _check_identities(self) -> ShiftMetrics:
        tol = IDENTITY_TOLERANCE * max(1.0, abs(self.ss), abs(self.tt), abs(self.st))
        if (
            abs(self.sd - (self.ss - self.st)) > tol
            or abs(self.td - (self.tt - self.st)) > tol
            or abs(self.idd - (self.ss - self.tt)) > tol
            or abs(self.sd - (self.td + self.idd)) > tol
        ):
            raise ValueError(f"drop identities violated for {self.source}->{self.target}")
        return self

    @property
    def pair(self) -> tuple[str, str]:
        """Get the (source, target) pair."""
        return (self.source, self.target)

    def drop(self, which: DropKind) -> float:
        """Get SD or TD."""
        return self.sd if which is DropKind.SD else self.td

    def is_challenging(self, epsilon: float = 1e-9) -> bool:
        """Whether the shift moves to an inherently harder target (IDD > epsilon)."""
        return self.idd > epsilon


class SkippedShift(BaseModel):
    """A shift left out of an aggregate, with the reason."""

    source: str
    target: str
    reason: str

    model_config = ConfigDict(frozen=True)


class TaskSummary(BaseModel):
    """Task-level aggregates over the computable shifts of one (task, model).

    Attributes:
        task: Task label
        model: Model label
        n_shifts: Number of shifts aggregated
        avg_ss: Mean SS over shifts
        avg_tt: Mean TT over shifts
        avg_st: Mean ST over shifts
        avg_drop: Average drop, avg_ss - avg_st
        worst_sd: Maximum SD
        worst_sd_shift: (source, target) of the maximum SD
        worst_td: Maximum TD
        worst_td_shift: (source, target) of the maximum TD
        mean_sd: Mean SD
        mean_td: Mean TD
        var_sd: Sample variance of SD (None with a single shift)
        var_td: Sample variance of TD (None with a single shift)
        std_sd: Sample standard deviation of SD
        std_td: Sample standard deviation of TD
        avg_worst_sd_per_source: Mean over sources of the per-source maximum SD
        avg_worst_td_per_source: Mean over sources of the per-source maximum TD
        positive_sd_share: Share of shifts with SD above the tolerance
        positive_td_share: Share of shifts with TD above the tolerance
        scenario_counts: Count per scenario, Boundary included
        ordering_counts: Count per strict ordering, Degenerate excluded
        boundary_count: Shifts labelled Boundary
        degenerate_count: Shifts with a Degenerate ordering
        is_full_cross_product: Whether the matrix had every cell
        skipped_shifts: Ordered pairs left out because of missing cells
    """

    task: str
    model: str
    n_shifts: int = Field(ge=1)
    avg_ss: float
    avg_tt: float
    avg_st: float
    avg_drop: float
    worst_sd: float
    worst_sd_shift: tuple[str, str]
    worst_td: float
    worst_td_shift: tuple[str, str]
    mean_sd: float
    mean_td: float
    var_sd: Optional[float] = None  # noqa: UP045
    var_td: Optional[float] = None  # noqa: UP045
    std_sd: Optional[float] = None  # noqa: UP045
    std_td: Optional[float] = None  # noqa: UP045
    avg_worst_sd_per_source: float
    avg_worst_td_per_source: float
    positive_sd_share: float = Field(ge=0.0, le=1.0)
    positive_td_share: float = Field(ge=0.0, le=1.0)
    scenario_counts: dict[Scenario, int]
    ordering_counts: dict[Ordering, int]
    boundary_count: int = Field(ge=0)
    degenerate_count: int = Field(ge=0)
    is_full_cross_product: bool
    skipped_shifts: list[SkippedShift] = Field(default_factory=list)

    model_config = ConfigDict(frozen=True)
