"""Orthogonal-sampling DAC: split, render in slow branches, multiply by sequences, sum.

A full-rate stream ``s[k]`` (rate ``full_rate``) is dealt round-robin onto N
branches.  Branch ``l`` holds ``s[(l-1) + N m]`` and is rendered by a DAC of
bandwidth ``full_rate / (2N)``; the rendered waveform is multiplied by the
``l``-th sinc-pulse sequence and the N products are added.  Because
``sinc(x/N) * sq_N(x) == sinc(x)`` the ideal output equals direct band-limited
reconstruction of the full-rate stream.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .dsp import SampledWaveform, TimeGrid, render_pulses
from .errors import InvalidInputError
from .impairments import ImpairmentSpec, jitter_instants, make_rng
from .sequence import branch_phases, sequence_traces, validate_branch_count

__all__ = [
    "BranchPlan",
    "SubStream",
    "Decomposition",
    "decompose",
    "interleave",
    "branch_analog",
    "synthesize",
    "direct_dac",
    "OrthoResult",
    "orthogonal_dac",
]


@dataclass(frozen=True)
class BranchPlan:
    n_branches: int
    full_rate: float

    def __post_init__(self):
        validate_branch_count(self.n_branches)
        if not (np.isfinite(self.full_rate) and self.full_rate > 0):
            raise InvalidInputError("full_rate must be positive")

    @property
    def branch_rate(self) -> float:
        return self.full_rate / self.n_branches

    @property
    def branch_bandwidth(self) -> float:
        return self.branch_rate / 2.0

    @property
    def tone_frequencies(self) -> NDArray:
        return self.branch_rate * np.arange(1, (self.n_branches - 1) // 2 + 1)

    @property
    def phases(self) -> NDArray:
        return branch_phases(self.n_branches)

    def origin_offset(self, branch_index: int) -> float:
        return (branch_index - 1) / self.full_rate


@dataclass(frozen=True)
class SubStream:
    branch_index: int
    samples: NDArray
    origin_offset: float

    def instants(self, plan: BranchPlan) -> NDArray:
        return self.origin_offset + np.arange(len(self.samples)) / plan.branch_rate


@dataclass(frozen=True)
class Decomposition:
    streams: tuple
    original_length: int

    @property
    def padded(self) -> bool:
        return self.original_length != sum(len(s.samples) for s in self.streams)


def decompose(full_samples: ArrayLike, plan: BranchPlan, pad: bool = True) -> Decomposition:
    """Deal ``full_samples`` onto the branches, zero-padding to a multiple of N.

    With ``pad=False`` a length that is not a multiple of N is an error.
    """
    x = np.asarray(full_samples, dtype=float)
    if x.ndim != 1 or x.size == 0:
        raise InvalidInputError("decompose needs a non-empty 1-D sample array")
    n = plan.n_branches
    padded_len = -(-x.size // n) * n
    if padded_len != x.size:
        if not pad:
            raise InvalidInputError(f"length {x.size} is not a multiple of {n}")
        x = np.concatenate([x, np.zeros(padded_len - x.size)])
    streams = tuple(
        SubStream(l, x[l - 1::n].copy(), plan.origin_offset(l)) for l in range(1, n + 1)
    )
    return Decomposition(streams, int(np.asarray(full_samples).size))


def interleave(dec: Decomposition) -> NDArray:
    """Inverse of :func:`decompose`, padding removed."""
    n = len(dec.streams)
    m = len(dec.streams[0].samples)
    out = np.empty(n * m)
    for s in dec.streams:
        out[s.branch_index - 1::n] = s.samples
    return out[: dec.original_length]


def _check_grid(grid: TimeGrid, full_rate: float):
    if grid.rate < full_rate * (1 - 1e-12):
        raise InvalidInputError(f"grid rate {grid.rate:g} below full rate {full_rate:g}")


def branch_analog(
    sub: SubStream,
    plan: BranchPlan,
    grid: TimeGrid,
    dac_jitter_rms: float = 0.0,
    rng=None,
    periodic: bool = False,
) -> SampledWaveform:
    """Render one branch with a band-limited DAC of bandwidth ``full_rate / (2N)``.

    DAC jitter displaces each output pulse by an independent Gaussian timing
    error.
    """
    _check_grid(grid, plan.full_rate)
    nominal = sub.instants(plan)
    shifts = None
    if dac_jitter_rms > 0:
        shifts = jitter_instants(nominal, dac_jitter_rms, make_rng(rng)) - nominal
    elif dac_jitter_rms < 0:
        raise InvalidInputError("jitter must be non-negative")
    y = render_pulses(sub.samples, nominal, plan.branch_rate, grid, shifts, periodic)
    return SampledWaveform(y, grid.rate, grid.t0)


def synthesize(
    branches: Sequence[SampledWaveform],
    plan: BranchPlan,
    rf_jitter_rms: float = 0.0,
    rng=None,
) -> SampledWaveform:
    """Multiply each branch waveform by its sequence and sum.

    All sequences come from one oscillator, so RF jitter is a single timing
    error shared by every branch and tone.
    """
    if len(branches) != plan.n_branches:
        raise InvalidInputError(f"expected {plan.n_branches} branch waveforms, got {len(branches)}")
    grid = branches[0].grid
    for b in branches[1:]:
        if b.grid != grid:
            raise InvalidInputError("branch waveforms must share one time grid")
    rng = make_rng(rng) if rf_jitter_rms > 0 else None
    seqs = sequence_traces(plan.n_branches, plan.full_rate, grid, rf_jitter_rms, rng)
    out = np.zeros(grid.n_points)
    for b, sq in zip(branches, seqs):
        out += b.samples * sq.samples
    return SampledWaveform(out, grid.rate, grid.t0)


def direct_dac(
    full_samples: ArrayLike,
    full_rate: float,
    grid: TimeGrid,
    dac_jitter_rms: float = 0.0,
    rng=None,
    periodic: bool = False,
) -> SampledWaveform:
    """Single full-rate DAC: band-limited reconstruction with jittered output pulses."""
    x = np.asarray(full_samples, dtype=float)
    if x.ndim != 1 or x.size == 0:
        raise InvalidInputError("direct_dac needs at least one sample")
    if not full_rate > 0:
        raise InvalidInputError("full_rate must be positive")
    if dac_jitter_rms < 0:
        raise InvalidInputError("jitter must be non-negative")
    _check_grid(grid, full_rate)
    nominal = np.arange(x.size) / full_rate
    shifts = None
    if dac_jitter_rms > 0:
        shifts = jitter_instants(nominal, dac_jitter_rms, make_rng(rng)) - nominal
    return SampledWaveform(render_pulses(x, nominal, full_rate, grid, shifts, periodic), grid.rate, grid.t0)


@dataclass(frozen=True)
class OrthoResult:
    output: SampledWaveform
    branches: tuple
    decomposition: Decomposition


def orthogonal_dac(
    full_samples: ArrayLike,
    plan: BranchPlan,
    grid: TimeGrid,
    impairments: Optional[ImpairmentSpec] = None,
    rng=None,
    periodic: bool = False,
) -> OrthoResult:
    """Full pipeline: decompose, render every branch, synthesise.

    Random draws happen in a fixed order (branch 1..N DAC jitter, then RF
    timing) so a seeded generator gives reproducible output.  ``periodic``
    treats the stream as one period (its length must be a multiple of N).
    """
    imp = impairments or ImpairmentSpec()
    g = make_rng(rng if rng is not None else imp.seed)
    dec = decompose(full_samples, plan, pad=not periodic)
    branches = tuple(branch_analog(s, plan, grid, imp.dac_jitter_rms, g, periodic) for s in dec.streams)
    out = synthesize(branches, plan, imp.rf_jitter_rms, g)
    return OrthoResult(out, branches, dec)
