"""Sampled-signal containers and the spectral/interpolation primitives.

The central routine is :func:`render_pulses`, which evaluates a weighted sum of
(optionally time-shifted) sinc pulses on a uniform time grid.  Ideal
reconstruction, branch DAC rendering and Nyquist pulse shaping are all thin
wrappers around it.
"""
from __future__ import annotations

import functools
from dataclasses import dataclass, field
from math import factorial
from typing import Optional, Union

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy import fft as sfft

from .errors import InvalidInputError

__all__ = [
    "SampledWaveform",
    "ComplexWaveform",
    "Spectrum",
    "TimeGrid",
    "sinc",
    "sinc_derivative",
    "render_pulses",
    "ideal_reconstruct",
    "brickwall_lowpass",
    "spectrum",
    "inverse_spectrum",
]

# Grid-alignment tolerance, in grid steps, for taking the FFT rendering path.
_ALIGN_TOL = 1e-6
# Tail bound for the jitter Taylor expansion.
_TAYLOR_TOL = 1e-14
# Direct summation is chunked to keep the (times x pulses) block below this.
_DIRECT_BLOCK = 4_000_000


def _frozen(a: NDArray) -> NDArray:
    a = np.array(a, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class TimeGrid:
    """Uniform time axis: ``t0 + n / rate`` for ``n = 0 .. n_points - 1``."""

    rate: float
    n_points: int
    t0: float = 0.0

    def __post_init__(self):
        if not (np.isfinite(self.rate) and self.rate > 0):
            raise InvalidInputError(f"grid rate must be positive, got {self.rate}")
        if self.n_points < 1:
            raise InvalidInputError("grid needs at least one point")
        if not np.isfinite(self.t0):
            raise InvalidInputError("grid start time must be finite")

    @classmethod
    def oversampled(cls, full_rate: float, n_samples: int, oversampling: int, t0: float = 0.0) -> "TimeGrid":
        """Grid spanning ``n_samples`` full-rate periods at ``oversampling`` points each."""
        return cls(full_rate * oversampling, n_samples * oversampling, t0)

    @property
    def dt(self) -> float:
        return 1.0 / self.rate

    @property
    def duration(self) -> float:
        return self.n_points / self.rate

    @property
    def times(self) -> NDArray:
        return self.t0 + np.arange(self.n_points) / self.rate

    @classmethod
    def from_times(cls, t: ArrayLike) -> "TimeGrid":
        t = np.asarray(t, dtype=float)
        if t.ndim != 1 or t.size == 0 or not np.all(np.isfinite(t)):
            raise InvalidInputError("time grid must be a finite 1-D array")
        if t.size == 1:
            # A single instant has no spacing; any rate reproduces it.
            return cls(1.0, 1, float(t[0]))
        steps = np.diff(t)
        dt = (t[-1] - t[0]) / (t.size - 1)
        if dt <= 0 or np.max(np.abs(steps - dt)) > 1e-6 * dt:
            raise InvalidInputError("time grid must be uniformly spaced and increasing")
        return cls(1.0 / dt, t.size, float(t[0]))


@dataclass(frozen=True)
class SampledWaveform:
    """Real, uniformly sampled signal.  ``samples[n]`` is the value at ``t0 + n / sample_rate``."""

    samples: NDArray
    sample_rate: float
    t0: float = 0.0

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=float)
        if s.ndim != 1 or s.size < 1:
            raise InvalidInputError("waveform needs a non-empty 1-D sample array")
        if not np.all(np.isfinite(s)):
            raise InvalidInputError("waveform samples must be finite")
        if not (np.isfinite(self.sample_rate) and self.sample_rate > 0):
            raise InvalidInputError(f"sample_rate must be positive, got {self.sample_rate}")
        object.__setattr__(self, "samples", _frozen(s))

    def __len__(self) -> int:
        return self.samples.size

    @property
    def grid(self) -> TimeGrid:
        return TimeGrid(self.sample_rate, self.samples.size, self.t0)

    @property
    def times(self) -> NDArray:
        return self.grid.times

    def window(self, start: int, stop: int) -> "SampledWaveform":
        """Sub-waveform ``samples[start:stop]`` with the start time carried along."""
        if not 0 <= start < stop <= len(self):
            raise InvalidInputError(f"bad window [{start}, {stop}) for length {len(self)}")
        return SampledWaveform(self.samples[start:stop], self.sample_rate, self.t0 + start / self.sample_rate)

    def with_samples(self, samples: ArrayLike) -> "SampledWaveform":
        return SampledWaveform(samples, self.sample_rate, self.t0)


@dataclass(frozen=True)
class ComplexWaveform:
    """Complex baseband envelope of an optical field."""

    samples: NDArray
    sample_rate: float
    t0: float = 0.0
    carrier_label: float = 193.1e12

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=complex)
        if s.ndim != 1 or s.size < 1:
            raise InvalidInputError("waveform needs a non-empty 1-D sample array")
        if not np.all(np.isfinite(s)):
            raise InvalidInputError("waveform samples must be finite")
        if not (np.isfinite(self.sample_rate) and self.sample_rate > 0):
            raise InvalidInputError(f"sample_rate must be positive, got {self.sample_rate}")
        object.__setattr__(self, "samples", _frozen(s))

    def __len__(self) -> int:
        return self.samples.size

    @property
    def power(self) -> float:
        return float(np.mean(np.abs(self.samples) ** 2))

    def with_samples(self, samples: ArrayLike) -> "ComplexWaveform":
        return ComplexWaveform(samples, self.sample_rate, self.t0, self.carrier_label)


@dataclass(frozen=True)
class Spectrum:
    """Two-sided DFT of a waveform, in ``numpy.fft`` bin order.

    ``magnitudes`` are unnormalised ``|X[k]|``, so Parseval reads
    ``sum(x**2) == sum(magnitudes**2) / len(x)``.
    """

    bin_frequencies: NDArray
    magnitudes: NDArray
    phases: NDArray
    sample_rate: float = field(default=1.0)

    def __post_init__(self):
        n = len(self.bin_frequencies)
        if len(self.magnitudes) != n or len(self.phases) != n:
            raise InvalidInputError("spectrum arrays must have equal length")

    @property
    def resolution(self) -> float:
        return self.sample_rate / len(self.bin_frequencies)

    @property
    def complex_bins(self) -> NDArray:
        return self.magnitudes * np.exp(1j * self.phases)


# ---------------------------------------------------------------------------
# sinc kernel and its derivatives
# ---------------------------------------------------------------------------

def _sinpi(x: NDArray) -> NDArray:
    # Reduce to [-1, 1] first: integer zeros stay exact for large |x| and
    # tiny arguments keep their relative precision.
    return np.sin(np.pi * (x - 2.0 * np.rint(0.5 * x)))


def sinc(x: Union[float, ArrayLike]):
    """Normalised sinc, ``sin(pi x) / (pi x)`` with ``sinc(0) == 1``."""
    xa = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(xa)):
        raise InvalidInputError("sinc argument must be finite")
    with np.errstate(invalid="ignore", divide="ignore"):
        out = np.where(xa == 0.0, 1.0, _sinpi(xa) / (np.pi * np.where(xa == 0.0, 1.0, xa)))
    return float(out) if out.ndim == 0 else out


@functools.lru_cache(maxsize=None)
def _gauss_legendre_half(n: int = 256):
    nodes, weights = np.polynomial.legendre.leggauss(n)
    # Map [-1, 1] onto [0, 1/2].
    return 0.25 * (nodes + 1.0), 0.25 * weights


def sinc_derivative(x: ArrayLike, order: int) -> NDArray:
    """``order``-th derivative of :func:`sinc` with respect to its argument.

    Uses the spectral integral ``int_{-1/2}^{1/2} (2 pi i v)^p exp(2 pi i v x) dv``
    (Gauss-Legendre) near the origin and the forward recurrence
    ``x f_p + p f_{p-1} = pi^(p-1) sin(pi x + p pi/2)`` further out, where
    it is stable.
    """
    x = np.asarray(x, dtype=float)
    if order < 0:
        raise InvalidInputError("derivative order must be non-negative")
    if order == 0:
        return np.asarray(sinc(x), dtype=float)
    out = np.empty_like(x)
    near_limit = max(32.0, 2.0 * order)
    near = np.abs(x) <= near_limit

    if np.any(near):
        nu, w = _gauss_legendre_half()
        xn = x[near]
        ph = 2.0 * np.pi * np.multiply.outer(xn, nu)
        amp = w * (2.0 * np.pi * nu) ** order
        if order % 2 == 0:
            out[near] = 2.0 * (-1) ** (order // 2) * (np.cos(ph) @ amp)
        else:
            out[near] = -2.0 * (-1) ** ((order - 1) // 2) * (np.sin(ph) @ amp)

    far = ~near
    if np.any(far):
        xf = x[far]
        d = _sinpi(xf) / (np.pi * xf)
        for q in range(1, order + 1):
            d = (np.pi ** (q - 1) * _sinpi(xf + 0.5 * q) - q * d) / xf
        out[far] = d
    return out


# ---------------------------------------------------------------------------
# pulse rendering
# ---------------------------------------------------------------------------

def _taylor_order(max_shift: float) -> Optional[int]:
    """Expansion order for pulses shifted by at most ``max_shift`` pulse periods.

    Term p is bounded by ``(pi d)^p / (p + 1)!``.  Returns None when the
    shift is too large for the expansion to be worthwhile.
    """
    a = np.pi * max_shift
    if a == 0.0:
        return 0
    if a > 6.0:
        return None
    p = 0
    while a ** (p + 1) / factorial(p + 2) > _TAYLOR_TOL:
        p += 1
    return p


@functools.lru_cache(maxsize=96)
def _kernel_rfft(n_span: int, ratio: float, order: int, nfft: int) -> NDArray:
    lags = np.arange(-(n_span - 1), n_span) * ratio
    return sfft.rfft(sinc_derivative(lags, order), nfft)


def _render_direct(values, centers, pulse_rate, times) -> NDArray:
    out = np.zeros(times.size)
    block = max(1, _DIRECT_BLOCK // max(1, centers.size))
    for start in range(0, times.size, block):
        t = times[start:start + block]
        out[start:start + block] = sinc(pulse_rate * np.subtract.outer(t, centers)) @ values
    return out


def _render_periodic(values, first_center, pulse_rate, grid, shifts, order) -> NDArray:
    """One period of the periodically continued pulse train.

    The grid must cover exactly ``len(values)`` pulse periods.  Each Taylor
    term is a derivative of the trigonometric interpolant, i.e. a factor
    ``(2 pi i m / K)^p`` on DFT line ``m``; an even-length Nyquist line is
    split evenly between ``+-K/2`` so it renders as a cosine.
    """
    K = values.size
    up_f = grid.rate / pulse_rate
    up = int(round(up_f))
    if abs(up_f - up) > 1e-9 * up_f or grid.n_points != K * up:
        raise InvalidInputError(
            f"periodic rendering needs a grid of exactly {K} pulse periods at an integer oversampling"
        )
    off_f = (first_center - grid.t0) * grid.rate
    off = int(round(off_f))
    if abs(off_f - off) > _ALIGN_TOL:
        raise InvalidInputError("first pulse must sit on a grid point")
    if order is None:
        raise InvalidInputError("timing shifts too large for periodic rendering")

    m = np.fft.fftfreq(K, 1.0 / K)
    d = 2j * np.pi * m / K
    nyq = K // 2 if K % 2 == 0 else None
    if nyq is not None:
        d[nyq] = 1j * np.pi
    pos_acc = np.zeros(K, dtype=complex)
    neg_nyq = 0j
    neg_shift = -pulse_rate * shifts if order else None
    for p in range(order + 1):
        w = values if p == 0 else values * neg_shift ** p
        X = np.fft.fft(w) / factorial(p)
        pos_acc += X * d ** p
        if nyq is not None:
            neg_nyq += X[nyq] * (-1j * np.pi) ** p

    n = grid.n_points
    Y = np.zeros(n, dtype=complex)
    half = (K + 1) // 2  # count of lines 0 .. ceil(K/2)-1
    Y[:half] = pos_acc[:half]
    if K > 1:
        neg = K - half - (1 if nyq is not None else 0)
        if neg:
            Y[n - neg:] = pos_acc[K - neg:]
    if nyq is not None:
        Y[nyq] += 0.5 * pos_acc[nyq]
        Y[n - nyq] += 0.5 * neg_nyq
    y = np.fft.ifft(Y).real * (n / K)
    return np.roll(y, off)


def render_pulses(
    values: ArrayLike,
    centers: ArrayLike,
    pulse_rate: float,
    grid: TimeGrid,
    shifts: Optional[ArrayLike] = None,
    periodic: bool = False,
) -> NDArray:
    """Evaluate ``sum_k values[k] * sinc(pulse_rate * (t - centers[k] - shifts[k]))`` on ``grid``.

    When every nominal centre sits on a grid point the sum is computed as an
    FFT convolution; timing shifts are then handled by a Taylor expansion in
    the sinc derivatives, whose kernels are cached across calls.  Otherwise
    the sum is evaluated directly.

    With ``periodic=True`` the pulses (uniformly spaced at ``1/pulse_rate``)
    are one period of an infinite periodic train and ``grid`` must span
    exactly that period; the result is the untruncated sum.
    """
    values = np.asarray(values, dtype=float)
    centers = np.asarray(centers, dtype=float)
    if values.shape != centers.shape or values.ndim != 1:
        raise InvalidInputError("values and centers must be 1-D arrays of equal length")
    if values.size == 0:
        raise InvalidInputError("no pulses to render")
    if shifts is not None:
        shifts = np.asarray(shifts, dtype=float)
        if shifts.shape != values.shape:
            raise InvalidInputError("shifts must match values")
    order = 0
    if shifts is not None:
        order = _taylor_order(float(np.max(np.abs(shifts))) * pulse_rate)

    if periodic:
        expected = centers[0] + np.arange(values.size) / pulse_rate
        if np.max(np.abs(centers - expected)) * pulse_rate > _ALIGN_TOL:
            raise InvalidInputError("periodic rendering needs uniformly spaced pulses")
        return _render_periodic(values, centers[0], pulse_rate, grid, shifts, order)

    pos_f = (centers - grid.t0) * grid.rate
    pos = np.rint(pos_f)
    aligned = np.all(np.abs(pos_f - pos) < _ALIGN_TOL)

    if not aligned or order is None:
        c = centers if shifts is None else centers + shifts
        return _render_direct(values, c, pulse_rate, grid.times)

    pos = pos.astype(np.int64)
    i0 = min(int(pos.min()), 0)
    i1 = max(int(pos.max()), grid.n_points - 1)
    span = i1 - i0 + 1
    nfft = sfft.next_fast_len(3 * span - 2, real=True)
    ratio = pulse_rate / grid.rate
    idx = pos - i0

    acc = np.zeros(nfft // 2 + 1, dtype=complex)
    if order:
        neg_shift = -pulse_rate * shifts
    for p in range(order + 1):
        w = values if p == 0 else values * neg_shift ** p / factorial(p)
        imp = np.bincount(idx, weights=w, minlength=span)
        acc += sfft.rfft(imp, nfft) * _kernel_rfft(span, ratio, p, nfft)
    full = sfft.irfft(acc, nfft)
    lo = span - 1 - i0
    return full[lo:lo + grid.n_points]


def _as_grid(t_grid: Union[TimeGrid, ArrayLike]) -> TimeGrid:
    return t_grid if isinstance(t_grid, TimeGrid) else TimeGrid.from_times(t_grid)


def ideal_reconstruct(
    samples: ArrayLike, rate: float, t_grid: Union[TimeGrid, ArrayLike], periodic: bool = False
) -> SampledWaveform:
    """Band-limited interpolation of ``samples`` taken at ``k / rate``.

    The infinite sinc series is truncated to the supplied samples, or, with
    ``periodic=True``, summed over the periodic continuation (the grid must
    then span exactly ``len(samples) / rate``).
    """
    samples = np.asarray(samples, dtype=float)
    if samples.ndim != 1 or samples.size == 0:
        raise InvalidInputError("ideal_reconstruct needs at least one sample")
    if not (np.isfinite(rate) and rate > 0):
        raise InvalidInputError("rate must be positive")
    grid = _as_grid(t_grid)
    centers = np.arange(samples.size) / rate
    y = render_pulses(samples, centers, rate, grid, periodic=periodic)
    return SampledWaveform(y, grid.rate, grid.t0)


# ---------------------------------------------------------------------------
# spectral utilities
# ---------------------------------------------------------------------------

def brickwall_lowpass(wave: SampledWaveform, cutoff: float) -> SampledWaveform:
    """Zero every DFT bin with ``|f| > cutoff``; bins exactly at the cutoff pass."""
    nyq = wave.sample_rate / 2.0
    if not (0.0 < cutoff <= nyq * (1 + 1e-12)):
        raise InvalidInputError(f"cutoff {cutoff} outside (0, {nyq}]")
    x = wave.samples
    X = sfft.rfft(x)
    f = sfft.rfftfreq(x.size, 1.0 / wave.sample_rate)
    X[f > cutoff * (1 + 1e-12)] = 0.0
    return wave.with_samples(sfft.irfft(X, x.size))


def spectrum(wave: SampledWaveform) -> Spectrum:
    if len(wave) < 2:
        raise InvalidInputError("spectrum needs at least two samples")
    X = sfft.fft(wave.samples)
    f = sfft.fftfreq(len(wave), 1.0 / wave.sample_rate)
    return Spectrum(f, np.abs(X), np.angle(X), wave.sample_rate)


def inverse_spectrum(spec: Spectrum, t0: float = 0.0) -> SampledWaveform:
    """Real waveform whose :func:`spectrum` is ``spec`` (imaginary residue dropped)."""
    x = sfft.ifft(spec.complex_bins)
    return SampledWaveform(x.real, spec.sample_rate, t0)
