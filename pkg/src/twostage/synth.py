"""Seeded generator of synthetic seasonal series for desk-scale experiments.

Each series is a sum of sinusoids at configured integer periods (arguments
are computed from ``t mod period``, so a noise-free series repeats bitwise
exactly with period lcm(periods)), plus stationary AR(1) noise and optional
additive spike anomalies.  One generator drives each series with a fixed
draw order (phases, noise innovations, anomaly mask, anomaly signs), so a
fixed seed reproduces the data bitwise.
"""

from __future__ import annotations

import numpy as np

from .data import TimeSeries
from .validation import check_fraction, check_positive_int

DEFAULT_PERIODS = (24, 168)
DEFAULT_SECONDARY_AMPLITUDE = 0.3


def default_amplitudes(n_periods: int) -> tuple[float, ...]:
    """1.0 for the first period, a weaker fixed amplitude for the rest."""
    return tuple(1.0 if i == 0 else DEFAULT_SECONDARY_AMPLITUDE for i in range(n_periods))


def generate_series(
    series_id: str,
    length: int,
    periods=DEFAULT_PERIODS,
    rng: np.random.Generator | None = None,
    amplitudes=None,
    noise_sigma: float = 0.0,
    ar_coeff: float = 0.6,
    anomaly_rate: float = 0.0,
    anomaly_scale: float = 5.0,
) -> TimeSeries:
    """Generate one synthetic series; the attached period is min(periods).

    ``noise_sigma`` is the stationary (marginal) standard deviation of the
    AR(1) noise with autocorrelation ``ar_coeff``; anomalies add
    ``anomaly_scale`` with a random sign at points drawn with probability
    ``anomaly_rate``.
    """
    check_positive_int(length, "length")
    periods = tuple(check_positive_int(p, "period") for p in periods)
    if not periods:
        raise ValueError("periods must not be empty")
    if min(periods) >= length:
        raise ValueError("every period must be shorter than the series length")
    if amplitudes is None:
        amplitudes = default_amplitudes(len(periods))
    amplitudes = tuple(float(a) for a in amplitudes)
    if len(amplitudes) != len(periods):
        raise ValueError(f"{len(periods)} periods but {len(amplitudes)} amplitudes")
    if noise_sigma < 0:
        raise ValueError(f"noise_sigma must be >= 0, got {noise_sigma}")
    if not -1.0 < ar_coeff < 1.0:
        raise ValueError(f"ar_coeff must lie in (-1, 1), got {ar_coeff}")
    check_fraction(anomaly_rate, "anomaly_rate")
    if rng is None:
        rng = np.random.default_rng(0)

    t = np.arange(length)
    phases = rng.uniform(0.0, 2.0 * np.pi, size=len(periods))
    values = np.zeros(length, dtype=np.float64)
    for period, amplitude, phase in zip(periods, amplitudes, phases):
        values += amplitude * np.sin(2.0 * np.pi * (t % period) / period + phase)

    innovations = rng.standard_normal(length)
    if noise_sigma > 0.0:
        noise = np.empty(length, dtype=np.float64)
        noise[0] = noise_sigma * innovations[0]
        step_scale = noise_sigma * np.sqrt(1.0 - ar_coeff * ar_coeff)
        for i in range(1, length):
            noise[i] = ar_coeff * noise[i - 1] + step_scale * innovations[i]
        values += noise

    spike_mask = rng.random(length) < anomaly_rate
    spike_signs = np.where(rng.random(length) < 0.5, -1.0, 1.0)
    if anomaly_rate > 0.0:
        values = values + spike_mask * spike_signs * anomaly_scale

    return TimeSeries(series_id=series_id, values=values, period=min(periods))


def generate_dataset(
    n_series: int,
    length: int,
    periods=DEFAULT_PERIODS,
    master_seed: int = 0,
    amplitudes=None,
    noise_sigma: float = 0.0,
    ar_coeff: float = 0.6,
    anomaly_rate: float = 0.0,
    anomaly_scale: float = 5.0,
) -> list[TimeSeries]:
    """Generate ``n_series`` independent series, seeded per series."""
    check_positive_int(n_series, "n_series")
    dataset = []
    for index in range(n_series):
        rng = np.random.default_rng(np.random.SeedSequence([int(master_seed), index]))
        dataset.append(
            generate_series(
                series_id=f"S{index + 1}",
                length=length,
                periods=periods,
                rng=rng,
                amplitudes=amplitudes,
                noise_sigma=noise_sigma,
                ar_coeff=ar_coeff,
                anomaly_rate=anomaly_rate,
                anomaly_scale=anomaly_scale,
            )
        )
    return dataset
