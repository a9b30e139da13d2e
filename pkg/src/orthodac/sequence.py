"""Sinc-pulse sequences: closed form, RF-tone synthesis, phase plan and comb check.

A sequence with N lines and bandwidth ``bw`` is a DC level ``1/N`` plus
``(N-1)/2`` cosines of amplitude ``2/N`` at multiples of ``bw/N``.  Branch
``l`` uses the copy delayed by ``(l-1)/bw``, i.e. tone ``k`` phase-shifted by
``k * (l-1) * 360/N`` degrees.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .dsp import SampledWaveform, TimeGrid
from .errors import InvalidInputError, InvalidSpecError

__all__ = [
    "SequenceSpec",
    "CombReport",
    "validate_branch_count",
    "branch_phases",
    "sequence_value",
    "rf_timing",
    "sequence_trace",
    "sequence_traces",
    "verify_comb",
]


def validate_branch_count(n: int) -> int:
    if int(n) != n or n < 3 or n % 2 == 0:
        raise InvalidSpecError(f"branch count must be an odd integer >= 3, got {n}")
    return int(n)


@dataclass(frozen=True)
class SequenceSpec:
    n_branches: int
    bandwidth: float
    branch_index: int = 1

    def __post_init__(self):
        validate_branch_count(self.n_branches)
        if not (np.isfinite(self.bandwidth) and self.bandwidth > 0):
            raise InvalidSpecError("sequence bandwidth must be positive")
        if not 1 <= self.branch_index <= self.n_branches:
            raise InvalidSpecError(f"branch index {self.branch_index} outside 1..{self.n_branches}")

    @property
    def n_tones(self) -> int:
        return (self.n_branches - 1) // 2

    @property
    def line_spacing(self) -> float:
        return self.bandwidth / self.n_branches

    @property
    def period(self) -> float:
        return self.n_branches / self.bandwidth

    @property
    def tone_frequencies(self) -> NDArray:
        return self.line_spacing * np.arange(1, self.n_tones + 1)

    @property
    def delay(self) -> float:
        return (self.branch_index - 1) / self.bandwidth

    def for_branch(self, index: int) -> "SequenceSpec":
        return SequenceSpec(self.n_branches, self.bandwidth, index)


def branch_phases(n: int) -> NDArray:
    """Fundamental RF phase of each branch in degrees: ``(l-1) * 360 / n``."""
    n = validate_branch_count(n)
    return np.arange(n) * 360.0 / n


def sequence_value(spec: SequenceSpec, t: ArrayLike):
    """Closed cosine form of the branch's sequence at time(s) ``t``."""
    t = np.asarray(t, dtype=float)
    if not np.all(np.isfinite(t)):
        raise InvalidInputError("time must be finite")
    n = spec.n_branches
    # Position in units of full-rate samples, reduced to one period.
    x = np.remainder(spec.bandwidth * t - (spec.branch_index - 1), n)
    acc = np.full(x.shape, 0.5)
    for k in range(1, spec.n_tones + 1):
        acc = acc + np.cos(2.0 * np.pi * k * x / n)
    out = 2.0 / n * acc
    return float(out) if out.ndim == 0 else out


def rf_timing(grid: TimeGrid, rf_jitter_rms: float, rng: Optional[np.random.Generator]) -> Optional[NDArray]:
    """Timing error of the shared RF oscillator at each grid instant (None if jitter-free)."""
    if rf_jitter_rms < 0:
        raise InvalidInputError("RF jitter must be non-negative")
    if rf_jitter_rms == 0:
        return None
    if rng is None:
        raise InvalidInputError("an RNG is required for non-zero RF jitter")
    return rng.normal(0.0, rf_jitter_rms, grid.n_points)


def sequence_trace(
    spec: SequenceSpec,
    grid: TimeGrid,
    rf_jitter_rms: float = 0.0,
    rng: Optional[np.random.Generator] = None,
    timing: Optional[NDArray] = None,
) -> SampledWaveform:
    """Synthesise the branch's sequence as DC plus phase-shifted RF tones on ``grid``.

    ``timing`` is a precomputed oscillator timing error per grid instant; when
    absent it is drawn from ``rng`` with RMS ``rf_jitter_rms``.
    """
    f_max = spec.tone_frequencies[-1]
    if grid.rate <= 2.0 * f_max:
        raise InvalidInputError(f"grid rate {grid.rate:g} does not resolve the {f_max:g} Hz tone")
    if timing is None:
        timing = rf_timing(grid, rf_jitter_rms, rng)
    t = grid.times if timing is None else grid.times + timing
    # Phase bookkeeping in whole sequence periods avoids large cosine arguments.
    frac = np.remainder(t / spec.period, 1.0)
    phases = np.deg2rad(branch_phases(spec.n_branches)[spec.branch_index - 1])
    out = np.full(grid.n_points, 1.0 / spec.n_branches)
    for k in range(1, spec.n_tones + 1):
        out += 2.0 / spec.n_branches * np.cos(2.0 * np.pi * k * frac - k * phases)
    return SampledWaveform(out, grid.rate, grid.t0)


def sequence_traces(
    n: int,
    bandwidth: float,
    grid: TimeGrid,
    rf_jitter_rms: float = 0.0,
    rng: Optional[np.random.Generator] = None,
) -> list[SampledWaveform]:
    """All ``n`` branch sequences driven by one oscillator (one shared timing error)."""
    timing = rf_timing(grid, rf_jitter_rms, rng)
    base = SequenceSpec(n, bandwidth)
    return [sequence_trace(base.for_branch(l), grid, timing=timing) for l in range(1, n + 1)]


@dataclass(frozen=True)
class CombReport:
    line_frequencies: NDArray
    magnitudes: NDArray
    flatness: float
    max_spurious: float
    spacing: float

    def passed(self, flatness_tol: float = 1e-10, spurious_tol: float = 1e-9) -> bool:
        return bool(self.flatness - 1.0 <= flatness_tol and self.max_spurious <= spurious_tol)


def verify_comb(trace: SampledWaveform, spec: SequenceSpec) -> CombReport:
    """Measure the N two-sided comb lines of a sequence trace.

    ``magnitudes`` are ``|X| / L`` at DC and ``+-k * bw/N``; ``max_spurious`` is
    the largest other bin relative to the mean line magnitude.
    """
    L = len(trace)
    periods = L / trace.sample_rate / spec.period
    if abs(periods - round(periods)) > 1e-9 * max(1.0, periods) or round(periods) < 1:
        raise InvalidInputError(f"trace spans {periods:.6g} sequence periods; an integer count is required")
    X = np.fft.fft(trace.samples) / L
    step = int(round(periods))  # bins between comb lines
    ks = np.arange(-spec.n_tones, spec.n_tones + 1)
    bins = np.mod(ks * step, L)
    mags = np.abs(X[bins])
    others = np.ones(L, dtype=bool)
    others[bins] = False
    level = float(np.mean(mags))
    flat = float(mags.max() / mags.min()) if mags.min() > 0 else float("inf")
    spur = float(np.abs(X[others]).max() / level) if others.any() and level > 0 else 0.0
    return CombReport(ks * spec.line_spacing, mags, flat, spur, spec.line_spacing)
