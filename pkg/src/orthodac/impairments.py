"""Stochastic impairment models: timing jitter, quantisation and OSNR noise loading."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .dsp import ComplexWaveform, SampledWaveform
from .errors import InvalidInputError

__all__ = [
    "ImpairmentSpec",
    "make_rng",
    "jitter_instants",
    "quantize",
    "awgn_osnr",
    "osnr_noise_variance",
]

RF_JITTER_DEFAULT = 100e-15
OSNR_REFERENCE_BANDWIDTH = 12.5e9  # 0.1 nm at 193.1 THz


@dataclass(frozen=True)
class ImpairmentSpec:
    """Impairment settings for one realisation.

    ``osnr_db=None`` means no optical noise; ``quantizer_bits=None`` disables
    quantisation.
    """

    dac_jitter_rms: float = 0.0
    rf_jitter_rms: float = 0.0
    quantizer_bits: Optional[int] = None
    osnr_db: Optional[float] = None
    reference_bandwidth: float = OSNR_REFERENCE_BANDWIDTH
    seed: int = 0

    def __post_init__(self):
        if self.dac_jitter_rms < 0 or self.rf_jitter_rms < 0:
            raise InvalidInputError("jitter values must be non-negative")
        if self.quantizer_bits is not None and self.quantizer_bits < 1:
            raise InvalidInputError("quantizer_bits must be >= 1")
        if not self.reference_bandwidth > 0:
            raise InvalidInputError("reference_bandwidth must be positive")

    @property
    def ideal(self) -> bool:
        return (
            self.dac_jitter_rms == 0
            and self.rf_jitter_rms == 0
            and self.quantizer_bits is None
            and (self.osnr_db is None or np.isinf(self.osnr_db))
        )


def make_rng(seed: Union[int, np.random.Generator, None]) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def jitter_instants(nominal: ArrayLike, sigma: float, rng: Union[int, np.random.Generator, None]) -> NDArray:
    """Nominal instants plus i.i.d. Gaussian timing errors of RMS ``sigma``."""
    nominal = np.asarray(nominal, dtype=float)
    if sigma < 0:
        raise InvalidInputError("jitter sigma must be non-negative")
    if sigma == 0:
        return nominal.copy()
    return nominal + make_rng(rng).normal(0.0, sigma, nominal.shape)


def quantize(wave: SampledWaveform, bits: int, full_scale: float) -> SampledWaveform:
    """Uniform mid-rise quantiser with ``2**bits`` levels spanning ``[-full_scale, full_scale]``.

    Inputs beyond full scale clip to the outermost level.
    """
    if bits < 1:
        raise InvalidInputError("bits must be >= 1")
    if not full_scale > 0:
        raise InvalidInputError("full_scale must be positive")
    levels = 2 ** bits
    step = 2.0 * full_scale / levels
    code = np.clip(np.floor((wave.samples + full_scale) / step), 0, levels - 1)
    return wave.with_samples((code + 0.5) * step - full_scale)


def osnr_noise_variance(signal_power: float, osnr_db: float, reference_bandwidth: float, sample_rate: float) -> float:
    """Per-sample complex noise variance for a given OSNR over the full simulation bandwidth."""
    psd = signal_power / (10.0 ** (osnr_db / 10.0) * reference_bandwidth)
    return psd * sample_rate


def awgn_osnr(
    wave: ComplexWaveform,
    osnr_db: Optional[float],
    reference_bandwidth: float,
    rng: Union[int, np.random.Generator, None],
) -> ComplexWaveform:
    """Add circular complex Gaussian noise so the signal sees ``osnr_db`` in ``reference_bandwidth``."""
    if osnr_db is None or np.isposinf(osnr_db):
        return wave
    if not reference_bandwidth > 0:
        raise InvalidInputError("reference_bandwidth must be positive")
    power = wave.power
    if power <= 0:
        raise InvalidInputError("cannot reference OSNR to a zero-power signal")
    var = osnr_noise_variance(power, osnr_db, reference_bandwidth, wave.sample_rate)
    g = make_rng(rng)
    n = len(wave)
    noise = np.sqrt(var / 2.0) * (g.standard_normal(n) + 1j * g.standard_normal(n))
    return wave.with_samples(wave.samples + noise)
