"""Shared fixtures for robustness metrics tests."""

from __future__ import annotations

from collections.abc import Callable, Iterable
from pathlib import Path

import pytest

from robustness_metrics.core import build_matrix, classify_ordering, classify_scenario
from robustness_metrics.models import PerformanceMatrix, RunRecord, ShiftMetrics

ResultRow = tuple[str, str, str, str, float]

# In-domain scores of three domains and cross-domain scores of every shift.
THREE_DOMAIN_SCORES = {
    ("books", "books"): 90.0,
    ("dvd", "dvd"): 80.0,
    ("kitchen", "kitchen"): 85.0,
    ("books", "dvd"): 75.0,
    ("books", "kitchen"): 70.0,
    ("dvd", "books"): 72.0,
    ("dvd", "kitchen"): 78.0,
    ("kitchen", "books"): 65.0,
    ("kitchen", "dvd"): 82.0,
}


def make_records(
    scores: dict[tuple[str, str], float], task: str = "sa", model: str = "bert"
) -> list[RunRecord]:
    """Build run records from a (source, target) -> score map."""
    return [
        RunRecord(task=task, model=model, source=source, target=target, score=score)
        for (source, target), score in scores.items()
    ]


def make_matrix(
    scores: dict[tuple[str, str], float], task: str = "sa", model: str = "bert"
) -> PerformanceMatrix:
    """Build the single performance matrix of a (source, target) -> score map."""
    return build_matrix(make_records(scores, task, model))[0]


def make_shift(source: str, target: str, ss: float, tt: float, st: float) -> ShiftMetrics:
    """Build a shift directly from its three scores."""
    return ShiftMetrics(
        source=source,
        target=target,
        ss=ss,
        tt=tt,
        st=st,
        sd=ss - st,
        td=tt - st,
        idd=ss - tt,
        scenario=classify_scenario(ss - st, tt - st),
        ordering=classify_ordering(ss, tt, st),
    )


def make_shifts(triplets: Iterable[tuple[float, float, float]]) -> list[ShiftMetrics]:
    """Build one shift per (ss, tt, st) triplet, each between its own two domains."""
    return [make_shift(f"s{i:04d}", f"t{i:04d}", *triplet) for i, triplet in enumerate(triplets)]


@pytest.fixture
def three_domain_matrix() -> PerformanceMatrix:
    """Full 3x3 cross-product matrix."""
    return make_matrix(THREE_DOMAIN_SCORES)


@pytest.fixture
def write_results(tmp_path: Path) -> Callable[..., Path]:
    """Write result rows to a CSV file with the standard header."""

    def _write(rows: Iterable[ResultRow], name: str = "results.csv") -> Path:
        path = tmp_path / name
        lines = ["task,model,source,target,score"]
        lines.extend(f"{t},{m},{s},{d},{score}" for t, m, s, d, score in rows)
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        return path

    return _write


@pytest.fixture
def results_file(write_results: Callable[..., Path]) -> Path:
    """Results file holding the 3-domain matrix for two models."""
    rows = [
        (task, model, source, target, score + offset)
        for task, model, offset in (("sa", "bert", 0.0), ("sa", "t5", 2.0))
        for (source, target), score in THREE_DOMAIN_SCORES.items()
    ]
    return write_results(rows)
