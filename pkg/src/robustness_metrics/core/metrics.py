"""Shift-level drops, scenario labels and task-level aggregates.

Example:
    matrices = build_matrix(records)
    shift = shift_metrics(matrices[0], "books", "beauty")
    summary = task_summary(matrices[0])
"""

from __future__ import annotations

import logging
from collections import defaultdict
from collections.abc import Iterable, Sequence

import numpy as np

from robustness_metrics.core.errors import (
    DuplicateKeyError,
    EmptyInputError,
    EmptySourceGroupError,
    InsufficientForVarianceError,
    MissingCellError,
    NoShiftsError,
    SameDomainError,
)
from robustness_metrics.core.statistics import sample_var
from robustness_metrics.models.performance import (
    DropKind,
    Ordering,
    PerformanceMatrix,
    RunRecord,
    Scenario,
    ShiftMetrics,
    SkippedShift,
    TaskSummary,
)

logger = logging.getLogger(__name__)

DEFAULT_EPSILON = 1e-9

_SCENARIO_BY_ORDERING = {
    Ordering.ST_SS_TT: Scenario.CLASSIC,
    Ordering.ST_TT_SS: Scenario.CLASSIC,
    Ordering.TT_ST_SS: Scenario.OBSERVED,
    Ordering.SS_ST_TT: Scenario.UNOBSERVED,
    Ordering.SS_TT_ST: Scenario.NO_CHALLENGE,
    Ordering.TT_SS_ST: Scenario.NO_CHALLENGE,
}


def build_matrix(records: Iterable[RunRecord]) -> list[PerformanceMatrix]:
    """Group run records into one performance matrix per (task, model).

    Args:
        records: Parsed run records

    Returns:
        Matrices sorted by (task, model); each matrix's domains are the sorted
        union of its sources and targets

    Raises:
        EmptyInputError: No records
        DuplicateKeyError: A (task, model, source, target) key repeats
    """
    grouped: dict[tuple[str, str], dict[tuple[str, str], float]] = defaultdict(dict)
    seen = 0
    for record in records:
        seen += 1
        cells = grouped[(record.task, record.model)]
        pair = (record.source, record.target)
        if pair in cells:
            raise DuplicateKeyError(record.key)
        cells[pair] = record.score

    if seen == 0:
        raise EmptyInputError("no run records to build matrices from")

    matrices = []
    for (task, model), cells in sorted(grouped.items()):
        domains = sorted({domain for pair in cells for domain in pair})
        matrix = PerformanceMatrix(task=task, model=model, scores=cells, domains=tuple(domains))
        logger.debug(
            f"Matrix {task}/{model}: {len(domains)} domains, {len(cells)} cells, "
            f"full={matrix.is_full_cross_product}"
        )
        matrices.append(matrix)
    return matrices


def classify_scenario(sd: float, td: float, epsilon: float = DEFAULT_EPSILON) -> Scenario:
    """Label a shift by the signs of its source and target drops.

    Args:
        sd: Source drop
        td: Target drop
        epsilon: Tie tolerance; drops within it are neither positive nor negative

    Returns:
        Scenario label (Boundary when either drop is a tie)
    """
    if epsilon < 0:
        raise ValueError("epsilon must be non-negative")
    if abs(sd) <= epsilon or abs(td) <= epsilon:
        return Scenario.BOUNDARY
    if sd > 0:
        return Scenario.CLASSIC if td > 0 else Scenario.OBSERVED
    return Scenario.UNOBSERVED if td > 0 else Scenario.NO_CHALLENGE


def classify_ordering(
    ss: float, tt: float, st: float, epsilon: float = DEFAULT_EPSILON
) -> Ordering:
    """Label the ascending order of (SS, TT, ST).

    Returns:
        One of the six strict orderings, or Degenerate when any two values tie
    """
    if abs(ss - tt) <= epsilon or abs(ss - st) <= epsilon or abs(tt - st) <= epsilon:
        return Ordering.DEGENERATE
    ranked = sorted((("SS", ss), ("TT", tt), ("ST", st)), key=lambda item: item[1])
    return Ordering("<".join(name for name, _ in ranked))


def scenario_for_ordering(ordering: Ordering) -> Scenario:
    """Get the scenario a strict ordering belongs to (Boundary for Degenerate)."""
    return _SCENARIO_BY_ORDERING.get(ordering, Scenario.BOUNDARY)


def _make_shift(
    source: str, target: str, ss: float, tt: float, st: float, epsilon: float
) -> ShiftMetrics:
    sd = ss - st
    td = tt - st
    return ShiftMetrics(
        source=source,
        target=target,
        ss=ss,
        tt=tt,
        st=st,
        sd=sd,
        td=td,
        idd=ss - tt,
        scenario=classify_scenario(sd, td, epsilon),
        ordering=classify_ordering(ss, tt, st, epsilon),
    )


def shift_metrics(
    matrix: PerformanceMatrix,
    source: str,
    target: str,
    epsilon: float = DEFAULT_EPSILON,
) -> ShiftMetrics:
    """Compute SS, TT, ST and the drops of one shift.

    Raises:
        SameDomainError: source equals target
        MissingCellError: A needed cell is absent from the matrix
    """
    if source == target:
        raise SameDomainError(f"source and target are both '{source}'")
    values = []
    for pair in ((source, source), (target, target), (source, target)):
        value = matrix.score(*pair)
        if value is None:
            raise MissingCellError(pair)
        values.append(value)
    ss, tt, st = values
    return _make_shift(source, target, ss, tt, st, epsilon)


def compute_shifts(
    matrix: PerformanceMatrix, epsilon: float = DEFAULT_EPSILON
) -> tuple[list[ShiftMetrics], list[SkippedShift]]:
    """Compute every ordered shift the matrix supports.

    Returns:
        (shifts, skipped) where skipped lists pairs with missing cells
    """
    shifts: list[ShiftMetrics] = []
    skipped: list[SkippedShift] = []
    for source in matrix.domains:
        for target in matrix.domains:
            if source == target:
                continue
            try:
                shifts.append(shift_metrics(matrix, source, target, epsilon))
            except MissingCellError as e:
                skipped.append(SkippedShift(source=source, target=target, reason=str(e)))
    if skipped:
        logger.warning(
            f"{matrix.task}/{matrix.model}: skipped {len(skipped)} shift(s) with missing cells"
        )
    return shifts, skipped


def avg_per_source_worst_drop(shifts: Sequence[ShiftMetrics], which: DropKind) -> float:
    """Average over source domains of the largest drop from each source.

    Raises:
        EmptySourceGroupError: No shifts to group
    """
    if not shifts:
        raise EmptySourceGroupError("no shifts to group by source")
    worst: dict[str, float] = {}
    for shift in shifts:
        drop = shift.drop(which)
        if shift.source not in worst or drop > worst[shift.source]:
            worst[shift.source] = drop
    return float(np.mean(list(worst.values())))


def task_summary(
    matrix: PerformanceMatrix,
    epsilon: float = DEFAULT_EPSILON,
    require_variance: bool = False,
) -> TaskSummary:
    """Aggregate all computable shifts of a (task, model) matrix.

    Shifts touching a missing cell are skipped and listed in the summary.

    Args:
        matrix: Performance matrix
        epsilon: Tie tolerance for scenario and ordering labels
        require_variance: Raise instead of leaving variances empty for one shift

    Raises:
        NoShiftsError: No computable shift
        InsufficientForVarianceError: require_variance with a single shift
    """
    shifts, skipped = compute_shifts(matrix, epsilon)
    if not shifts:
        raise NoShiftsError(f"{matrix.task}/{matrix.model}: no computable shift")

    ss = np.array([s.ss for s in shifts])
    tt = np.array([s.tt for s in shifts])
    st = np.array([s.st for s in shifts])
    sd = np.array([s.sd for s in shifts])
    td = np.array([s.td for s in shifts])
    n = len(shifts)

    var_sd = var_td = std_sd = std_td = None
    if n >= 2:
        var_sd = sample_var(sd)
        var_td = sample_var(td)
        std_sd = float(np.sqrt(var_sd))
        std_td = float(np.sqrt(var_td))
    elif require_variance:
        raise InsufficientForVarianceError(
            f"{matrix.task}/{matrix.model}: variance needs at least 2 shifts"
        )
    else:
        logger.warning(f"{matrix.task}/{matrix.model}: single shift, variances left empty")

    scenario_counts = dict.fromkeys(Scenario, 0)
    ordering_counts = dict.fromkeys(Ordering.strict(), 0)
    degenerate = 0
    for shift in shifts:
        scenario_counts[shift.scenario] += 1
        if shift.ordering is Ordering.DEGENERATE:
            degenerate += 1
        else:
            ordering_counts[shift.ordering] += 1

    worst_sd_index = int(np.argmax(sd))
    worst_td_index = int(np.argmax(td))
    avg_ss = float(np.mean(ss))
    avg_st = float(np.mean(st))

    return TaskSummary(
        task=matrix.task,
        model=matrix.model,
        n_shifts=n,
        avg_ss=avg_ss,
        avg_tt=float(np.mean(tt)),
        avg_st=avg_st,
        avg_drop=avg_ss - avg_st,
        worst_sd=float(sd[worst_sd_index]),
        worst_sd_shift=shifts[worst_sd_index].pair,
        worst_td=float(td[worst_td_index]),
        worst_td_shift=shifts[worst_td_index].pair,
        mean_sd=float(np.mean(sd)),
        mean_td=float(np.mean(td)),
        var_sd=var_sd,
        var_td=var_td,
        std_sd=std_sd,
        std_td=std_td,
        avg_worst_sd_per_source=avg_per_source_worst_drop(shifts, DropKind.SD),
        avg_worst_td_per_source=avg_per_source_worst_drop(shifts, DropKind.TD),
        positive_sd_share=float(np.mean(sd > epsilon)),
        positive_td_share=float(np.mean(td > epsilon)),
        scenario_counts=scenario_counts,
        ordering_counts=ordering_counts,
        boundary_count=scenario_counts[Scenario.BOUNDARY],
        degenerate_count=degenerate,
        is_full_cross_product=matrix.is_full_cross_product,
        skipped_shifts=skipped,
    )
