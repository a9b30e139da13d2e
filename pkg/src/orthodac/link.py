"""Baseband-equivalent optical link: MZM, OSNR loading, coherent receiver, decision sampling."""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .dsp import ComplexWaveform, SampledWaveform, brickwall_lowpass
from .errors import InvalidInputError
from .impairments import OSNR_REFERENCE_BANDWIDTH, awgn_osnr, make_rng
from .waveforms import Modulation, SymbolStream

__all__ = ["OverdriveWarning", "Bias", "LinkConfig", "LinkResult", "mzm", "coherent_rx", "run_link"]



class OverdriveWarning(RuntimeWarning):
    """MZM drive exceeded +-vpi, so the transfer folds over."""


class Bias(str, Enum):
    NULL = "null"
    QUADRATURE = "quadrature"


@dataclass(frozen=True)
class LinkConfig:
    vpi: float = 1.0
    bias: Bias = Bias.NULL
    osnr_db: float | None = 40.0
    reference_bandwidth: float = OSNR_REFERENCE_BANDWIDTH
    lo_phase: float = 0.0
    rx_bandwidth: float = 30e9
    decision_offset: float = 0.0
    guard_symbols: int = 64

    def __post_init__(self):
        if not self.vpi > 0:
            raise InvalidInputError("vpi must be positive")
        if not self.rx_bandwidth > 0:
            raise InvalidInputError("rx_bandwidth must be positive")
        object.__setattr__(self, "bias", Bias(self.bias))


@dataclass(frozen=True)
class LinkResult:
    decisions: np.ndarray
    labels: np.ndarray
    received_i: SampledWaveform
    received_q: SampledWaveform


def mzm(drive: SampledWaveform, vpi: float, bias=Bias.NULL) -> ComplexWaveform:
    """Push-pull Mach-Zehnder field transfer.

    Null bias gives ``sin(pi v / (2 vpi))`` (bipolar field, BPSK);
    quadrature bias gives ``cos(pi/4 - pi v / (2 vpi))``.
    """
    if not vpi > 0:
        raise InvalidInputError("vpi must be positive")
    bias = Bias(bias)
    v = drive.samples
    if np.max(np.abs(v)) > vpi:
        warnings.warn("MZM drive exceeds vpi; the transfer folds over", OverdriveWarning, stacklevel=2)
    arg = np.pi * v / (2.0 * vpi)
    field = np.sin(arg) if bias is Bias.NULL else np.cos(np.pi / 4 - arg)
    return ComplexWaveform(field.astype(complex), drive.sample_rate, drive.t0)


def coherent_rx(field: ComplexWaveform, lo_phase: float, rx_bandwidth: float) -> tuple[SampledWaveform, SampledWaveform]:
    """Mix with the LO (phase in degrees) and band-limit I and Q to ``rx_bandwidth``."""
    z = field.samples * np.exp(-1j * np.deg2rad(lo_phase))
    i = SampledWaveform(z.real, field.sample_rate, field.t0)
    q = SampledWaveform(z.imag, field.sample_rate, field.t0)
    return brickwall_lowpass(i, rx_bandwidth), brickwall_lowpass(q, rx_bandwidth)


def _sample_at(wave: SampledWaveform, t: np.ndarray) -> np.ndarray:
    pos = (t - wave.t0) * wave.sample_rate
    idx = np.rint(pos)
    if np.all(np.abs(pos - idx) < 1e-6):
        return wave.samples[idx.astype(np.int64)]
    return np.interp(pos, np.arange(len(wave)), wave.samples)


def run_link(tx: SampledWaveform, stream: SymbolStream, cfg: LinkConfig, rng=None) -> LinkResult:
    """Transmit a BPSK drive waveform and return I-channel decision samples with their bits.

    Symbols within ``cfg.guard_symbols`` of either end, or whose instant falls
    outside the waveform, are dropped.
    """
    if stream.format is not Modulation.BPSK:
        raise InvalidInputError("run_link decides BPSK symbols only")
    field = mzm(tx, cfg.vpi, cfg.bias)
    noisy = awgn_osnr(field, cfg.osnr_db, cfg.reference_bandwidth, make_rng(rng))
    i, q = coherent_rx(noisy, cfg.lo_phase, cfg.rx_bandwidth)
    t = stream.instants + cfg.decision_offset
    k = np.arange(len(stream))
    t_end = tx.t0 + (len(tx) - 1) / tx.sample_rate
    keep = (k >= cfg.guard_symbols) & (k < len(stream) - cfg.guard_symbols) & (t >= tx.t0) & (t <= t_end)
    if not keep.any():
        raise InvalidInputError("no symbol instants inside the waveform after guard removal")
    return LinkResult(_sample_at(i, t[keep]), stream.source_bits[keep].copy(), i, q)
