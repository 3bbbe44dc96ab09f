"""Pydantic models for moment checks of the SD/TD equivalence theorem."""

from __future__ import annotations

from enum import Enum
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from robustness_metrics.models.performance import Score


class PairMode(str, Enum):
    """How (source, target) pairs are drawn from a domain space.

    Modes:
        INDEPENDENT: Source and target drawn independently, with replacement
            (n^2 pairs; a (d, d) pair scores its in-domain value three times)
        DISTINCT: Distinct ordered pairs only (n(n-1) pairs)
    """

    INDEPENDENT = "independent"
    DISTINCT = "distinct"


class JointAtom(BaseModel):
    """One support point of a discrete (SS, TT, ST) distribution."""

    ss: Score
    tt: Score
    st: Score
    prob: float

    model_config = ConfigDict(frozen=True)


class DiscreteJoint(BaseModel):
    """Finite joint distribution of (SS, TT, ST).

    Probabilities are checked by ``exact_moments``, not here, so that bad
    atom files surface as InvalidProbabilitiesError.
    """

    atoms: list[JointAtom] = Field(min_length=1)

    model_config = ConfigDict(frozen=True)


class MomentSet(BaseModel):
    """Moments of (SS, TT, ST) and of the derived drops.

    Population moments for exact joints, sample moments (n - 1) for simulations.

    Attributes:
        x: Var[SS]
        y: Cov[TT, ST] - Cov[SS, ST]
    """

    e_ss: float
    e_tt: float
    e_st: float
    var_ss: float
    var_tt: float
    var_st: float
    cov_ss_tt: float
    cov_ss_st: float
    cov_tt_st: float
    e_ss_st: float
    e_tt_st: float
    e_ss2: float
    e_tt2: float
    x: float
    y: float
    cov_idd_sd: float
    cov_idd_td: float
    var_sd: float
    var_td: float
    e_sd: float
    e_td: float
    e_sd2: float
    e_td2: float
    e_abs_sd: float
    e_abs_td: float

    model_config = ConfigDict(frozen=True)

    def scale(self) -> float:
        """Get the magnitude that absolute tolerances are multiplied by."""
        return max(
            1.0,
            abs(self.e_ss),
            abs(self.e_tt),
            self.var_ss,
            self.var_tt,
            self.var_st,
        )


class HypothesisReport(BaseModel):
    """Whether E[SS] = E[TT], Var[SS] = Var[TT] and Cov[SS, TT] = 0.

    Each boolean is residual <= tolerance, with the tolerance already scaled.
    """

    mean_equal: bool
    mean_residual: float = Field(ge=0.0)
    var_equal: bool
    var_residual: float = Field(ge=0.0)
    cov_zero: bool
    cov_residual: float = Field(ge=0.0)
    tolerance: float = Field(ge=0.0)

    model_config = ConfigDict(frozen=True)

    @property
    def all_hold(self) -> bool:
        """Whether all three hypotheses hold."""
        return self.mean_equal and self.var_equal and self.cov_zero


class IdentityCheck(BaseModel):
    """Residual of one proof-step identity."""

    name: str
    residual: Optional[float] = None  # noqa: UP045
    passed: Optional[bool] = None  # noqa: UP045
    note: Optional[str] = None  # noqa: UP045

    model_config = ConfigDict(frozen=True)

    @property
    def skipped(self) -> bool:
        """Whether the identity was not checked."""
        return self.passed is None


class IdentityReport(BaseModel):
    """Results of all proof-step identities."""

    checks: list[IdentityCheck]
    tolerance: float = Field(ge=0.0)

    model_config = ConfigDict(frozen=True)

    @property
    def passed(self) -> bool:
        """Whether no checked identity failed."""
        return all(check.passed is not False for check in self.checks)


class EquivalenceReport(BaseModel):
    """Signs of the four equivalent conditions and whether they agree.

    Attributes:
        c1: sign(Cov[TT, ST] - Cov[SS, ST])
        c2: sign(Cov[IDD, SD]^2 - Cov[IDD, TD]^2)
        c3: sign(Var[SD] - Var[TD])
        c4_sq: sign(E[SD^2] - E[TD^2])
        c4_abs: sign(E[|SD|] - E[|TD|]), measured and never asserted
        margin: |y|
        all_agree_proved: c1 = c2 = c3 = c4_sq
        abs_variant_agrees: c4_abs = c4_sq
        asserted: Hypotheses hold and margin > tolerance
        tolerance: Scaled tolerance used for the margin
    """

    c1: int = Field(ge=-1, le=1)
    c2: int = Field(ge=-1, le=1)
    c3: int = Field(ge=-1, le=1)
    c4_sq: int = Field(ge=-1, le=1)
    c4_abs: int = Field(ge=-1, le=1)
    margin: float = Field(ge=0.0)
    all_agree_proved: bool
    abs_variant_agrees: bool
    asserted: bool
    tolerance: float = Field(ge=0.0)

    model_config = ConfigDict(frozen=True)

    @property
    def violated(self) -> bool:
        """Whether an asserted equivalence failed."""
        return self.asserted and not self.all_agree_proved


class DomainSpace(BaseModel):
    """Deterministic score model over n domains.

    SS = base - difficulty[s], TT = base - difficulty[t],
    ST = base - w_s * difficulty[s] - w_t * difficulty[t] - transfer_penalty[s][t].

    Attributes:
        difficulty: Per-domain difficulty
        base: Score of a zero-difficulty domain
        transfer_penalty: n x n non-negative penalties, diagonal ignored
        w_s: Weight tying ST to the source difficulty
        w_t: Weight tying ST to the target difficulty
    """

    difficulty: list[Score]
    base: Score = 0.0
    transfer_penalty: list[list[Score]]
    w_s: Score = 0.5
    w_t: Score = 0.5

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def _check_shape(self) -> DomainSpace:
        n = len(self.difficulty)
        if len(self.transfer_penalty) != n or any(len(row) != n for row in self.transfer_penalty):
            raise ValueError(f"transfer_penalty must be {n}x{n}")
        if any(value < 0 for row in self.transfer_penalty for value in row):
            raise ValueError("transfer penalties must be non-negative")
        return self

    @property
    def n(self) -> int:
        """Number of domains."""
        return len(self.difficulty)


class TheoremCheck(BaseModel):
    """All exact checks of one joint distribution."""

    moments: MomentSet
    hypotheses: HypothesisReport
    identities: IdentityReport
    equivalence: EquivalenceReport

    model_config = ConfigDict(frozen=True)

    @property
    def passed(self) -> bool:
        """Whether nothing asserted failed."""
        return self.identities.passed and not self.equivalence.violated


class TheoremSweepReport(BaseModel):
    """Summary of the randomized theorem suite.

    Attributes:
        checked: Joints checked
        asserted: Joints whose equivalence was asserted (margin above tolerance)
        failures: Seeds whose identities or asserted equivalence failed
        abs_disagreements: Seeds where the E[|.|] variant disagreed with E[(.)^2]
        min_margin: Smallest |y| seen
        max_margin: Largest |y| seen
        max_identity_residual: Largest identity residual seen
    """

    checked: int = Field(ge=0)
    asserted: int = Field(ge=0)
    failures: list[int] = Field(default_factory=list)
    abs_disagreements: list[int] = Field(default_factory=list)
    min_margin: float = Field(ge=0.0)
    max_margin: float = Field(ge=0.0)
    max_identity_residual: float = Field(ge=0.0)

    model_config = ConfigDict(frozen=True)

    @property
    def passed(self) -> bool:
        """Whether the sweep had no failure."""
        return not self.failures


class TraceSummary(BaseModel):
    """Diagnostics of a simulation run."""

    trials: int = Field(ge=2)
    blocks: int = Field(ge=1)
    max_abs_z: float = Field(ge=0.0)
    signs_match_exact: bool

    model_config = ConfigDict(frozen=True)


class SimulationResult(BaseModel):
    """Empirical moments of a seeded simulation next to the exact joint's.

    Attributes:
        empirical: Sample moments over all trials
        standard_errors: Standard error of each compared empirical moment
        equivalence: Condition signs of the empirical moments
        exact: Exact moments of the domain space's joint
        exact_equivalence: Condition signs of the exact moments
        trace: Run diagnostics
    """

    empirical: MomentSet
    standard_errors: dict[str, float]
    equivalence: EquivalenceReport
    exact: MomentSet
    exact_equivalence: EquivalenceReport
    trace: TraceSummary

    model_config = ConfigDict(frozen=True)
