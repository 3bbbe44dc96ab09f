"""Tests for shift characterization, scenario tests and challenge curves."""

from __future__ import annotations

import math
from functools import partial

import numpy as np
import pytest
from conftest import THREE_DOMAIN_SCORES, make_matrix, make_shifts

from robustness_metrics.core import (
    average_predictor_correlations,
    build_challenge_curve,
    challenge_curve,
    characterize,
    compute_shifts,
    pool_shifts,
    predictor_correlations,
    scenario_test,
)
from robustness_metrics.core.errors import (
    AllDegenerateError,
    KTooLargeError,
    MissingDivergenceError,
    TooFewShiftsError,
)
from robustness_metrics.core.statistics import sample_cov, sample_var
from robustness_metrics.models import (
    CharacterizationRow,
    Ordering,
    PerformanceMatrix,
    PoolingKey,
    PredictorCorrelations,
    RankingKey,
    Scenario,
    ShiftMetrics,
)

ORDERING_TRIPLETS = [
    (2.0, 3.0, 1.0),
    (3.0, 2.0, 1.0),
    (3.0, 1.0, 2.0),
    (1.0, 3.0, 2.0),
    (1.0, 2.0, 3.0),
    (2.0, 1.0, 3.0),
]


@pytest.fixture
def three_domain_shifts(three_domain_matrix: PerformanceMatrix):
    """The six shifts of the 3-domain matrix."""
    shifts, _ = compute_shifts(three_domain_matrix)
    return shifts


@pytest.fixture
def curve_shifts():
    """Three shifts with (SD, TD) = (10, 2), (5, 5) and (1, 1)."""
    return make_shifts([(60.0, 52.0, 50.0), (55.0, 55.0, 50.0), (51.0, 51.0, 50.0)])


def _mean(xs: list[float]) -> float:
    return sum(xs) / len(xs)


def _cov(xs: list[float], ys: list[float]) -> float:
    mx, my = _mean(xs), _mean(ys)
    return sum((x - mx) * (y - my) for x, y in zip(xs, ys)) / (len(xs) - 1)


def _corr(xs: list[float], ys: list[float]) -> float:
    return _cov(xs, ys) / math.sqrt(_cov(xs, xs) * _cov(ys, ys))


def _ranks(xs: list[float]) -> list[float]:
    # Average rank of each value, 1-based
    return [
        sum(1 for y in xs if y < x) + (sum(1 for y in xs if y == x) + 1) / 2 for x in xs
    ]


def _r2(xs: list[float], ys: list[float]) -> float:
    slope = _cov(xs, ys) / _cov(xs, xs)
    intercept = _mean(ys) - slope * _mean(xs)
    sse = sum((y - intercept - slope * x) ** 2 for x, y in zip(xs, ys))
    sst = sum((y - _mean(ys)) ** 2 for y in ys)
    return 1.0 - sse / sst


def _sign(value: float) -> int:
    return (value > 0) - (value < 0)


def _assert_row_matches(row: CharacterizationRow, shifts: list[ShiftMetrics]) -> None:
    ss = [s.ss for s in shifts]
    tt = [s.tt for s in shifts]
    st = [s.st for s in shifts]
    sd = [a - c for a, c in zip(ss, st)]
    td = [b - c for b, c in zip(tt, st)]
    idd = [a - b for a, b in zip(ss, tt)]
    mad_ss = _mean([abs(c - a) for a, c in zip(ss, st)])
    mad_td = _mean([abs(c - b) for b, c in zip(tt, st)])
    approx = partial(pytest.approx, rel=1e-9, abs=1e-9)

    assert row.n_shifts == len(shifts) == 12
    assert row.mean_sd == approx(_mean(sd))
    assert row.mean_td == approx(_mean(td))
    assert row.var_sd == approx(_cov(sd, sd))
    assert row.var_td == approx(_cov(td, td))
    assert row.std_sd == approx(math.sqrt(_cov(sd, sd)))
    assert row.std_td == approx(math.sqrt(_cov(td, td)))
    assert row.worst_sd == approx(max(sd))
    assert row.worst_td == approx(max(td))
    assert row.corr_st_ss_pearson == approx(_corr(st, ss))
    assert row.corr_st_tt_pearson == approx(_corr(st, tt))
    assert row.corr_st_ss_spearman == approx(_corr(_ranks(st), _ranks(ss)))
    assert row.corr_st_tt_spearman == approx(_corr(_ranks(st), _ranks(tt)))
    assert row.r2_idd_sd == approx(_r2(idd, sd))
    assert row.r2_idd_td == approx(_r2(idd, td))
    assert row.mad_st_ss == approx(mad_ss)
    assert row.mad_st_td == approx(mad_td)
    assert row.positive_sd_share == sum(1 for v in sd if v > 1e-9) / 12
    assert row.positive_td_share == sum(1 for v in td if v > 1e-9) / 12
    assert row.variance_gap_sign == _sign(_cov(sd, sd) - _cov(td, td))
    assert row.mad_gap_sign == _sign(mad_ss - mad_td)
    assert row.gap_signs_agree is (row.variance_gap_sign == row.mad_gap_sign)


class TestPoolShifts:
    """Tests for grouping shifts under a pooling key."""

    @pytest.fixture
    def two_models(self) -> list[PerformanceMatrix]:
        """Two models on the same task."""
        return [
            make_matrix(THREE_DOMAIN_SCORES, model="bert"),
            make_matrix(THREE_DOMAIN_SCORES, model="t5"),
        ]

    def test_task_pooling(self, two_models: list[PerformanceMatrix]):
        """Test that task pooling merges the models."""
        groups = pool_shifts(two_models, PoolingKey.TASK)
        assert list(groups) == [("sa", "*")]
        assert len(groups[("sa", "*")]) == 12

    def test_model_pooling(self, two_models: list[PerformanceMatrix]):
        """Test one group per model."""
        groups = pool_shifts(two_models, PoolingKey.MODEL)
        assert list(groups) == [("sa", "bert"), ("sa", "t5")]

    def test_group_pooling(self, two_models: list[PerformanceMatrix]):
        """Test grouping models by label, unlabelled models standing alone."""
        groups = pool_shifts(two_models, PoolingKey.GROUP, {"bert": "encoder"})
        assert list(groups) == [("sa", "encoder"), ("sa", "t5")]

    def test_full_pooling(self, two_models: list[PerformanceMatrix]):
        """Test pooling across tasks and models."""
        groups = pool_shifts(two_models, PoolingKey.POOLED)
        assert list(groups) == [("*", "*")]


class TestCharacterize:
    """Tests for characterization rows."""

    def test_three_domain_row(self, three_domain_shifts):
        """Test means, variances and gap signs of the 3-domain shifts."""
        row = characterize(three_domain_shifts, "sa", "bert")
        sd = [s.sd for s in three_domain_shifts]
        td = [s.td for s in three_domain_shifts]

        assert row.n_shifts == 6
        assert row.mean_sd == pytest.approx(68.0 / 6)
        assert row.mean_td == pytest.approx(68.0 / 6)
        assert row.var_sd == pytest.approx(np.var(sd, ddof=1))
        assert row.var_td == pytest.approx(np.var(td, ddof=1))
        assert row.mad_st_ss == pytest.approx(68.0 / 6)
        assert row.mad_st_td == pytest.approx(12.0)
        assert row.variance_gap_sign == -1
        assert row.mad_gap_sign == -1
        assert row.gap_signs_agree is True
        assert row.positive_td_share == pytest.approx(5 / 6)
        assert row.corr_st_ss_pearson is not None
        assert row.diagnostics == []

    def test_constant_drop_leaves_r2_empty(self):
        """Test that a constant SD gives no R^2 and a diagnostic."""
        shifts = make_shifts([(60.0, 52.0, 50.0), (60.0, 55.0, 50.0), (60.0, 58.0, 50.0)])
        row = characterize(shifts, "sa", "*")

        assert row.r2_idd_sd is None
        assert row.r2_idd_td == pytest.approx(1.0)
        assert row.corr_st_ss_pearson is None
        assert any("r2_idd_sd" in note for note in row.diagnostics)

    def test_variance_gap_decomposition(self):
        """Test var(SD) - var(TD) = 2(cov(ST, TT) - cov(ST, SS)) + var(SS) - var(TT)."""
        rng = np.random.default_rng(5)
        for _ in range(200):
            triplets = rng.uniform(0.0, 100.0, size=(int(rng.integers(3, 30)), 3))
            shifts = make_shifts(triplets.tolist())
            row = characterize(shifts, "sa", "*")
            ss, tt, st = ([s.ss for s in shifts], [s.tt for s in shifts], [s.st for s in shifts])

            expected = 2.0 * (sample_cov(st, tt) - sample_cov(st, ss)) + (
                sample_var(ss) - sample_var(tt)
            )
            assert row.var_sd - row.var_td == pytest.approx(expected, abs=1e-9)

    def test_random_four_domain_rows(self):
        """Test every row field against loop-based formulas on random 4-domain matrices."""
        rng = np.random.default_rng(404)
        domains = ["a", "b", "c", "d"]
        for _ in range(50):
            values = rng.uniform(0.0, 100.0, size=(4, 4))
            scores = {
                (source, target): float(values[i, j])
                for i, source in enumerate(domains)
                for j, target in enumerate(domains)
            }
            shifts, _ = compute_shifts(make_matrix(scores))
            row = characterize(shifts, "sa", "bert")
            _assert_row_matches(row, shifts)

    def test_too_few_shifts(self):
        """Test that two shifts are not enough."""
        with pytest.raises(TooFewShiftsError):
            characterize(make_shifts(ORDERING_TRIPLETS[:2]), "sa", "*")


class TestScenarioTest:
    """Tests for the ordering uniformity test."""

    def test_uniform_orderings(self):
        """Test that equal ordering counts give statistic 0."""
        report = scenario_test(make_shifts(ORDERING_TRIPLETS * 5))

        assert report.chi.statistic == 0.0
        assert report.chi.reject is False
        assert set(report.ordering_counts.values()) == {5}

    def test_all_in_one_ordering(self):
        """Test 600 shifts sharing one ordering."""
        report = scenario_test(make_shifts([(3.0, 2.0, 1.0)] * 600), alpha=0.05, m=14)

        assert report.ordering_counts[Ordering.ST_TT_SS] == 600
        assert report.chi.statistic == pytest.approx(3000.0)
        assert report.chi.reject is True

    def test_all_classic_proportions(self):
        """Test scenario proportions when every shift is Classic."""
        shifts = make_shifts([(90.0 + i, 95.0 - i, 50.0) for i in range(5)])
        report = scenario_test(shifts)

        assert report.scenario_proportions[Scenario.CLASSIC] == 1.0
        assert report.scenario_proportions[Scenario.OBSERVED] == 0.0
        assert report.boundary_count == 0

    def test_degenerate_excluded(self):
        """Test that tied shifts are excluded from the counts."""
        shifts = make_shifts(ORDERING_TRIPLETS + [(2.0, 2.0, 1.0)])
        report = scenario_test(shifts)
        assert report.excluded_degenerate == 1
        assert sum(report.ordering_counts.values()) == 6

    def test_counts_cover_every_shift(self):
        """Test that ordering counts plus excluded ties add up to the group size."""
        rng = np.random.default_rng(61)
        for _ in range(100):
            triplets = rng.integers(0, 4, size=(int(rng.integers(1, 40)), 3)).tolist()
            shifts = make_shifts([*triplets, [1, 2, 3]])
            report = scenario_test(shifts)

            assert sum(report.ordering_counts.values()) + report.excluded_degenerate == len(shifts)

    def test_all_degenerate(self):
        """Test that a group with only tied shifts cannot be tested."""
        with pytest.raises(AllDegenerateError):
            scenario_test(make_shifts([(2.0, 2.0, 1.0)] * 4))

    def test_grouped_test(self):
        """Test the optional four-scenario test."""
        report = scenario_test(make_shifts(ORDERING_TRIPLETS * 5), grouped=True)

        assert report.grouped_chi is not None
        assert report.grouped_chi.df == 3
        assert report.grouped_chi.statistic == pytest.approx(0.0, abs=1e-12)

    def test_grouped_test_off_by_default(self):
        """Test that the grouped test only runs on request."""
        assert scenario_test(make_shifts(ORDERING_TRIPLETS)).grouped_chi is None


class TestChallengeCurve:
    """Tests for top-k challenge curves."""

    def test_top_two_by_sd(self, curve_shifts):
        """Test the two hardest shifts by SD."""
        points = challenge_curve(curve_shifts, RankingKey.BY_SD, ks=[2])
        assert points[0].avg_sd_over_top_k == pytest.approx(7.5)
        assert points[0].avg_td_over_top_k == pytest.approx(3.5)

    def test_rank_by_td(self, curve_shifts):
        """Test that ranking by TD puts the (5, 5) shift first."""
        points = challenge_curve(curve_shifts, RankingKey.BY_TD, ks=[1])
        assert points[0].avg_sd_over_top_k == pytest.approx(5.0)
        assert points[0].ranking_key is RankingKey.BY_TD

    def test_default_sizes_end_at_means(self, three_domain_shifts):
        """Test that k defaults to 1..n and k=n gives the group means."""
        points = challenge_curve(three_domain_shifts)
        assert [p.k for p in points] == list(range(1, 7))
        assert points[-1].avg_sd_over_top_k == pytest.approx(68.0 / 6)
        assert points[-1].avg_td_over_top_k == pytest.approx(68.0 / 6)

    def test_k_one_is_worst_sd(self, three_domain_shifts):
        """Test that the first point is the worst SD."""
        points = challenge_curve(three_domain_shifts, ks=[1])
        assert points[0].avg_sd_over_top_k == 20.0

    def test_avg_sd_non_increasing_by_sd(self):
        """Test that averaging over more of the hardest shifts never raises mean SD."""
        rng = np.random.default_rng(83)
        for _ in range(100):
            triplets = rng.uniform(0.0, 100.0, size=(int(rng.integers(1, 40)), 3))
            shifts = make_shifts(triplets.tolist())
            averages = [p.avg_sd_over_top_k for p in challenge_curve(shifts, RankingKey.BY_SD)]
            assert all(b <= a + 1e-12 for a, b in zip(averages, averages[1:]))

    def test_k_too_large(self, curve_shifts):
        """Test that k cannot exceed the number of shifts."""
        with pytest.raises(KTooLargeError):
            challenge_curve(curve_shifts, ks=[4])

    def test_build_labels(self, curve_shifts):
        """Test that the wrapped curve carries its group labels."""
        curve = build_challenge_curve(curve_shifts, "sa", "bert", RankingKey.BY_IDD)
        assert (curve.task, curve.model_group) == ("sa", "bert")
        assert len(curve.points) == 3


class TestPredictorCorrelations:
    """Tests for drop-predictor correlations."""

    @pytest.fixture
    def monotone_shifts(self):
        """Shifts whose SD grows with the pair index."""
        return make_shifts([(60.0, 55.0, 59.0), (60.0, 52.0, 57.0), (60.0, 58.0, 54.0)])

    def test_monotone_divergence(self, monotone_shifts):
        """Test that divergence increasing with SD gives Spearman 1."""
        divergences = {
            ("s0000", "t0000"): 0.1,
            ("t0001", "s0001"): 0.2,
            ("s0002", "t0002"): 0.3,
        }
        row = predictor_correlations(monotone_shifts, divergences, "sa", "bert")
        assert row.js_sd == pytest.approx(1.0)
        assert row.n_shifts == 3

    def test_missing_divergence(self, monotone_shifts):
        """Test that every shift needs a divergence."""
        with pytest.raises(MissingDivergenceError):
            predictor_correlations(monotone_shifts, {("s0000", "t0000"): 0.1})

    def test_constant_divergence(self, monotone_shifts):
        """Test that a constant divergence leaves the JS coefficients absent."""
        divergences = {(s.source, s.target): 0.4 for s in monotone_shifts}
        row = predictor_correlations(monotone_shifts, divergences, "sa", "bert")

        assert row.js_sd is None
        assert row.js_td is None
        assert row.idd_sd is not None
        assert any("js_sd" in note for note in row.diagnostics)
        assert any("js_td" in note for note in row.diagnostics)

    def test_average_per_task(self):
        """Test averaging over models, ignoring absent coefficients."""
        rows = [
            PredictorCorrelations(
                task="sa", model_group="bert", n_shifts=6, js_sd=1.0, js_td=0.2
            ),
            PredictorCorrelations(
                task="sa", model_group="t5", n_shifts=6, js_sd=0.5, js_td=None
            ),
        ]
        (averaged,) = average_predictor_correlations(rows)

        assert averaged.model_group == "*"
        assert averaged.js_sd == pytest.approx(0.75)
        assert averaged.js_td == pytest.approx(0.2)
        assert averaged.idd_sd is None
        assert averaged.n_shifts == 12
