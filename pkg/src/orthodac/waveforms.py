"""Test-signal sources: tones, PRBS data, BPSK / QAM-16 mapping and pulse shaping."""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .dsp import SampledWaveform, TimeGrid, brickwall_lowpass, render_pulses
from .errors import InvalidInputError

__all__ = [
    "Modulation",
    "SymbolStream",
    "PRBS_TAPS",
    "prbs_bits",
    "map_symbols",
    "demap_symbols",
    "nyquist_shape",
    "nrz_shape",
    "tone",
    "tone_samples",
]

# Feedback taps (x^a + x^b + 1); all are primitive trinomials.
PRBS_TAPS = {7: (7, 6), 9: (9, 5), 15: (15, 14), 23: (23, 18), 31: (31, 28)}

_QAM_SCALE = 1.0 / np.sqrt(10.0)
# Gray code for one quadrature: (b0, b1) -> level.
_GRAY_LEVELS = {(0, 0): -3.0, (0, 1): -1.0, (1, 1): 1.0, (1, 0): 3.0}


class Modulation(str, Enum):
    BPSK = "BPSK"
    QAM16 = "QAM16"

    @property
    def bits_per_symbol(self) -> int:
        return 1 if self is Modulation.BPSK else 4


@dataclass(frozen=True)
class SymbolStream:
    symbols: NDArray
    symbol_rate: float
    format: Modulation
    source_bits: NDArray

    def __len__(self) -> int:
        return len(self.symbols)

    def amplitudes(self, quadrature: str = "I") -> NDArray:
        q = quadrature.upper()
        if q == "I":
            return self.symbols.real.copy()
        if q == "Q":
            return self.symbols.imag.copy()
        raise InvalidInputError(f"quadrature must be 'I' or 'Q', got {quadrature!r}")

    @property
    def instants(self) -> NDArray:
        return np.arange(len(self.symbols)) / self.symbol_rate


def prbs_bits(order: int, length: int, seed: int = 1) -> NDArray:
    """Maximal-length LFSR output, period ``2**order - 1``.

    The first ``order`` bits are the seed register (LSB first); afterwards
    ``b[n] = b[n - a] ^ b[n - b]`` for the taps ``(a, b)`` of the order.
    """
    if order not in PRBS_TAPS:
        raise InvalidInputError(f"unsupported PRBS order {order}; choose from {sorted(PRBS_TAPS)}")
    seed = int(seed) & ((1 << order) - 1)
    if seed == 0:
        raise InvalidInputError("PRBS seed must be non-zero")
    if length < 0:
        raise InvalidInputError("length must be non-negative")
    a, b = PRBS_TAPS[order]
    lo = min(a, b)
    total = max(length, order)
    out = np.empty(total, dtype=np.uint8)
    out[:order] = [(seed >> i) & 1 for i in range(order)]
    n = order
    # Each block only depends on bits at least `lo` positions back.
    while n < total:
        m = min(lo, total - n)
        out[n:n + m] = out[n - a:n - a + m] ^ out[n - b:n - b + m]
        n += m
    return out[:length]


def map_symbols(bits: ArrayLike, format, symbol_rate: float = 1.0) -> SymbolStream:
    fmt = Modulation(format)
    bits = np.asarray(bits, dtype=np.uint8)
    if bits.ndim != 1 or np.any(bits > 1):
        raise InvalidInputError("bits must be a 1-D array of 0/1")
    bps = fmt.bits_per_symbol
    if bits.size % bps:
        raise InvalidInputError(f"{bits.size} bits is not a multiple of {bps}")
    if fmt is Modulation.BPSK:
        sym = 2.0 * bits.astype(float) - 1.0 + 0j
    else:
        g = bits.reshape(-1, 4)
        lut = np.zeros((2, 2))
        for (b0, b1), v in _GRAY_LEVELS.items():
            lut[b0, b1] = v
        sym = (lut[g[:, 0], g[:, 1]] + 1j * lut[g[:, 2], g[:, 3]]) * _QAM_SCALE
    return SymbolStream(sym, float(symbol_rate), fmt, bits.copy())


def demap_symbols(symbols: ArrayLike, format) -> NDArray:
    """Nearest-point hard decisions back to bits."""
    fmt = Modulation(format)
    s = np.asarray(symbols, dtype=complex)
    if fmt is Modulation.BPSK:
        return (s.real > 0).astype(np.uint8)
    levels = np.array([-3.0, -1.0, 1.0, 3.0])
    inv = {v: k for k, v in _GRAY_LEVELS.items()}
    table = np.array([inv[v] for v in levels], dtype=np.uint8)

    def decide(x):
        idx = np.argmin(np.abs(x[:, None] / _QAM_SCALE - levels[None, :]), axis=1)
        return table[idx]

    return np.concatenate([decide(s.real), decide(s.imag)], axis=1).reshape(-1)


def nyquist_shape(stream: SymbolStream, quadrature: str, grid: TimeGrid, periodic: bool = False) -> SampledWaveform:
    """Sinc-shaped waveform of one quadrature; symbol ``k`` peaks at ``k / symbol_rate``."""
    if grid.rate < stream.symbol_rate * (1 - 1e-12):
        raise InvalidInputError("grid rate must be at least the symbol rate")
    a = stream.amplitudes(quadrature)
    y = render_pulses(a, stream.instants, stream.symbol_rate, grid, periodic=periodic)
    return SampledWaveform(y, grid.rate, grid.t0)


def nrz_shape(stream: SymbolStream, quadrature: str, bandwidth: float, grid: TimeGrid) -> SampledWaveform:
    """Rectangular symbols centred on ``k / symbol_rate``, then brick-wall low-passed."""
    if bandwidth < stream.symbol_rate / 2 * (1 - 1e-12):
        raise InvalidInputError("NRZ bandwidth must be at least half the symbol rate")
    a = stream.amplitudes(quadrature)
    k = np.floor(grid.times * stream.symbol_rate + 0.5).astype(np.int64)
    inside = (k >= 0) & (k < a.size)
    held = np.where(inside, a[np.clip(k, 0, a.size - 1)], 0.0)
    wave = SampledWaveform(held, grid.rate, grid.t0)
    if bandwidth >= grid.rate / 2:
        return wave
    return brickwall_lowpass(wave, bandwidth)


def tone_samples(frequency: float, rate: float, n: int, phase_deg: float = 0.0, amplitude: float = 1.0) -> NDArray:
    """``amplitude * cos(2 pi f k / rate + phase)`` for ``k = 0 .. n-1``."""
    cycles = np.remainder(frequency * np.arange(n) / rate, 1.0)
    return amplitude * np.cos(2.0 * np.pi * cycles + np.deg2rad(phase_deg))


def tone(frequency: float, phase: float, amplitude: float, grid: TimeGrid) -> SampledWaveform:
    """Cosine tone on ``grid``; ``phase`` in degrees."""
    if not 0 <= frequency < grid.rate / 2:
        raise InvalidInputError(f"{frequency:g} Hz aliases on a {grid.rate:g} Hz grid")
    cycles = np.remainder(frequency * grid.times, 1.0)
    y = amplitude * np.cos(2.0 * np.pi * cycles + np.deg2rad(phase))
    return SampledWaveform(y, grid.rate, grid.t0)
