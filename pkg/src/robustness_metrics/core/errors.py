"""Exception hierarchy for robustness metrics.

The CLI maps ``DataError`` to exit code 1, ``ConfigFileError`` to a usage error
(exit code 2) and ``TheoremAssertionError`` to exit code 3. Library code raises,
it never exits.
"""

from __future__ import annotations

from typing import Optional


class RobustnessError(Exception):
    """Base exception for all robustness metrics failures."""

    pass


class DataError(RobustnessError):
    """Exception raised when input data cannot support the requested computation."""

    pass


class TheoremAssertionError(RobustnessError):
    """Exception raised when an asserted equivalence or identity fails."""

    pass


class ConfigFileError(RobustnessError):
    """Exception raised when a configuration file cannot be read or parsed."""

    pass


# Ingestion


class EmptyInputError(DataError):
    """Exception raised when no records or values are supplied."""

    pass


class DuplicateKeyError(DataError):
    """Exception raised when a (task, model, source, target) key appears twice."""

    def __init__(
        self,
        key: tuple[str, str, str, str],
        lines: Optional[tuple[int, int]] = None,  # noqa: UP045
    ):
        self.key = key
        self.lines = lines
        where = f" (lines {lines[0]} and {lines[1]})" if lines else ""
        super().__init__(f"Duplicate key {'/'.join(key)}{where}")


class SchemaError(DataError):
    """Exception raised when a results file row or header is malformed."""

    def __init__(self, line: int, detail: str):
        self.line = line
        self.detail = detail
        super().__init__(f"line {line}: {detail}")


class ScoreOutOfRangeError(SchemaError):
    """Exception raised when a score falls outside the accepted range."""

    def __init__(self, line: int, score: float, low: float, high: float):
        self.score = score
        super().__init__(line, f"score {score} outside [{low}, {high}]")


class WriteFailureError(DataError):
    """Exception raised when a report cannot be written."""

    pass


class UnpopulatedSectionError(DataError):
    """Exception raised when a requested report section was never computed."""

    pass


# Metrics


class MissingCellError(DataError):
    """Exception raised when a matrix lacks a (source, target) score."""

    def __init__(self, pair: tuple[str, str]):
        self.pair = pair
        super().__init__(f"Missing cell {pair[0]} -> {pair[1]}")


class SameDomainError(DataError):
    """Exception raised when a shift is requested from a domain to itself."""

    pass


class NoShiftsError(DataError):
    """Exception raised when a matrix yields no computable shift."""

    pass


class InsufficientForVarianceError(DataError):
    """Exception raised when a variance is required from fewer than two shifts."""

    pass


class EmptySourceGroupError(DataError):
    """Exception raised when a per-source aggregate has no shifts to aggregate."""

    pass


# Statistics


class StatisticsError(DataError):
    """Base exception for statistics that are undefined on the given inputs."""

    pass


class ConstantInputError(StatisticsError):
    """Exception raised when a correlation is requested on a constant series."""

    pass


class ConstantPredictorError(StatisticsError):
    """Exception raised when a regression predictor has no spread."""

    pass


class LengthMismatchError(StatisticsError):
    """Exception raised when paired series differ in length."""

    pass


class InsufficientDataError(StatisticsError):
    """Exception raised when a sample statistic needs more observations."""

    pass


class EmptyCountsError(StatisticsError):
    """Exception raised when a goodness-of-fit test gets fewer than two categories."""

    pass


class AllZeroCountsError(StatisticsError):
    """Exception raised when every category count is zero."""

    pass


# Analysis


class TooFewShiftsError(DataError):
    """Exception raised when an analysis needs more shifts than supplied."""

    pass


class AllDegenerateError(DataError):
    """Exception raised when every shift has a tied (SS, TT, ST) ordering."""

    pass


class KTooLargeError(DataError):
    """Exception raised when a challenge curve asks for more shifts than exist."""

    pass


class MissingDivergenceError(DataError):
    """Exception raised when a shift's domain pair has no divergence value."""

    def __init__(self, pair: tuple[str, str]):
        self.pair = pair
        super().__init__(f"No divergence for pair {pair[0]} / {pair[1]}")


# Theorem and simulation


class InvalidProbabilitiesError(DataError):
    """Exception raised when joint atom probabilities are not a distribution."""

    pass


class TooFewDomainsError(DataError):
    """Exception raised when a domain space has fewer than two domains."""

    pass


class InvalidConfigError(DataError):
    """Exception raised when a simulation or analysis configuration is unusable."""

    pass


# Divergence


class EmptyAfterFilteringError(DataError):
    """Exception raised when a corpus has no tokens left after filtering."""

    def __init__(self, domain: str):
        self.domain = domain
        super().__init__(f"Corpus '{domain}' is empty after tokenization and filtering")


class SupportMismatchError(DataError):
    """Exception raised when two distributions do not share an ordered support."""

    pass
