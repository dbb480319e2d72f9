"""Autocorrelation and period detection."""

import numpy as np
import pytest

from twostage import (
    DegenerateSeriesError,
    NoPeriodError,
    PeriodEstimate,
    TimeSeries,
    estimate_periods,
    sample_acf,
    shortest_period,
)


def naive_acf(values, max_lag):
    """Direct loop version of the biased sample ACF."""
    x = np.asarray(values, dtype=float)
    c = x - x.mean()
    denom = float(sum(v * v for v in c))
    out = [1.0]
    for lag in range(1, max_lag + 1):
        out.append(sum(c[i] * c[i + lag] for i in range(len(c) - lag)) / denom)
    return np.array(out)


class TestSampleAcf:
    def test_matches_naive_loop(self):
        rng = np.random.default_rng(5)
        values = rng.standard_normal(120)
        got = sample_acf(values, 20)
        assert got == pytest.approx(naive_acf(values, 20), abs=1e-12)

    def test_lag_zero_is_exactly_one(self):
        values = np.random.default_rng(1).standard_normal(50)
        assert sample_acf(values, 5)[0] == 1.0

    def test_sinusoid_peaks_at_its_period(self):
        t = np.arange(400)
        values = np.sin(2 * np.pi * t / 8)
        acf = sample_acf(values, 20)
        assert acf[8] > 0.9
        # biased estimator shrinks toward zero with lag
        assert acf[8] == pytest.approx((1 - 8 / 400), abs=0.02)

    def test_constant_series_degenerate(self):
        with pytest.raises(DegenerateSeriesError):
            sample_acf(np.ones(30), 5)

    def test_max_lag_bound(self):
        with pytest.raises(ValueError):
            sample_acf(np.arange(10.0), 10)


class TestEstimatePeriods:
    def test_detects_sinusoid_period(self):
        t = np.arange(600)
        series = TimeSeries("s", np.sin(2 * np.pi * t / 24))
        candidates = estimate_periods(series, 100)
        assert candidates
        assert shortest_period(candidates) == 24

    def test_mixture_yields_both_and_shortest_wins(self):
        t = np.arange(960)
        values = np.sin(2 * np.pi * t / 24) + 0.3 * np.sin(2 * np.pi * t / 168)
        series = TimeSeries("s", values)
        candidates = estimate_periods(series, 200)
        periods = {c.period for c in candidates}
        assert any(abs(p - 24) <= 1 for p in periods)
        assert any(abs(p - 168) <= 1 for p in periods)
        assert shortest_period(candidates) <= 25

    def test_strict_local_maximum_required(self):
        # a monotone ACF (trend) has no interior peak
        series = TimeSeries("s", np.arange(100.0))
        assert estimate_periods(series, 10) == []

    def test_sorted_by_score_then_period(self):
        t = np.arange(960)
        values = np.sin(2 * np.pi * t / 24) + 0.3 * np.sin(2 * np.pi * t / 168)
        candidates = estimate_periods(TimeSeries("s", values), 200)
        scores = [c.acf_score for c in candidates]
        assert scores == sorted(scores, reverse=True)

    def test_threshold_filters_weak_peaks(self):
        rng = np.random.default_rng(9)
        series = TimeSeries("s", rng.standard_normal(400))
        strict = estimate_periods(series, 50, threshold=0.99)
        assert strict == []

    def test_needs_enough_data(self):
        with pytest.raises(ValueError, match="need at least"):
            estimate_periods(TimeSeries("s", np.arange(30.0)), 20)

    def test_max_lag_validation(self):
        with pytest.raises(ValueError):
            estimate_periods(TimeSeries("s", np.arange(30.0)), 1)


class TestShortestPeriod:
    def test_picks_minimum(self):
        cands = [PeriodEstimate(24, 0.8), PeriodEstimate(12, 0.5), PeriodEstimate(168, 0.9)]
        assert shortest_period(cands) == 12

    def test_empty_raises_no_period(self):
        with pytest.raises(NoPeriodError):
            shortest_period([])


def test_period_estimate_validation():
    with pytest.raises(ValueError):
        PeriodEstimate(1, 0.5)
    with pytest.raises(ValueError):
        PeriodEstimate(4, 1.5)
