"""Signal-quality measurements: RMS error, SINAD/ENOB, Q-factor and EVM."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from numpy.typing import ArrayLike

from .dsp import SampledWaveform
from .errors import InvalidInputError

__all__ = [
    "MetricsReport",
    "COLLAPSE_Q_DB",
    "enob_from_sinad",
    "rms_error_pct",
    "sinad_enob",
    "qfactor_bpsk",
    "link_collapsed",
    "evm_pct",
]

# Q = 6 (BER ~ 1e-9), the usual optical-link acceptance limit, in 20 log10 units.
COLLAPSE_Q_DB = 20.0 * math.log10(6.0)


def enob_from_sinad(sinad_db: float) -> float:
    return (sinad_db - 1.76) / 6.02


@dataclass(frozen=True)
class MetricsReport:
    rms_error_pct: Optional[float] = None
    sinad_db: Optional[float] = None
    q_db: Optional[float] = None
    evm_pct: Optional[float] = None

    @property
    def enob(self) -> Optional[float]:
        return None if self.sinad_db is None else enob_from_sinad(self.sinad_db)

    def as_dict(self) -> dict:
        return {
            "rms_error_pct": self.rms_error_pct,
            "sinad_db": self.sinad_db,
            "enob": self.enob,
            "q_db": self.q_db,
            "evm_pct": self.evm_pct,
        }


def rms_error_pct(test: SampledWaveform, reference: SampledWaveform, guard: int = 0) -> float:
    """``100 * rms(test - reference) / rms(reference)``, ignoring ``guard`` samples at each end."""
    if test.grid != reference.grid:
        raise InvalidInputError("waveforms must share one time grid")
    n = len(reference)
    if guard < 0 or 2 * guard >= n:
        raise InvalidInputError(f"guard {guard} leaves no interior in {n} samples")
    a = test.samples[guard:n - guard]
    b = reference.samples[guard:n - guard]
    ref = np.sqrt(np.mean(b ** 2))
    if ref == 0:
        raise InvalidInputError("reference has zero power")
    return float(100.0 * np.sqrt(np.mean((a - b) ** 2)) / ref)


def sinad_enob(wave: SampledWaveform, fundamental: float) -> tuple[float, float]:
    """SINAD (dB) and ENOB of a coherently captured tone.

    Everything except DC and the fundamental bin pair, harmonics included,
    counts as noise and distortion.
    """
    L = len(wave)
    m_f = fundamental * L / wave.sample_rate
    m = int(round(m_f))
    if abs(m_f - m) > 1e-6 or m <= 0 or m > L // 2:
        raise InvalidInputError(
            f"{fundamental:g} Hz is not on a DFT bin of this capture ({m_f:.6g}); capture an integer number of periods"
        )
    p = np.abs(np.fft.rfft(wave.samples)) ** 2
    # One-sided power weights: interior bins stand for two two-sided bins.
    w = np.full(p.size, 2.0)
    w[0] = 1.0
    if L % 2 == 0:
        w[-1] = 1.0
    p = p * w
    signal = p[m]
    p[0] = 0.0
    p[m] = 0.0
    rest = p.sum()
    if rest <= 0:
        return float("inf"), float("inf")
    sinad = 10.0 * math.log10(signal / rest)
    return sinad, enob_from_sinad(sinad)


def qfactor_bpsk(decision_samples: ArrayLike, labels: ArrayLike, min_per_class: int = 100) -> float:
    """Q-factor ``20 log10((mu1 - mu0) / (sigma1 + sigma0))`` of binary decision samples.

    Returns ``inf`` for noiseless, separated classes and ``-inf`` when the
    class means do not separate.  A spread below ``1e-9`` of the eye opening
    is floating-point residue and counts as noiseless.
    """
    x = np.asarray(decision_samples, dtype=float)
    y = np.asarray(labels).astype(bool)
    if x.shape != y.shape or x.ndim != 1:
        raise InvalidInputError("decision samples and labels must be equal-length 1-D arrays")
    ones, zeros = x[y], x[~y]
    if ones.size < min_per_class or zeros.size < min_per_class:
        raise InvalidInputError(f"need >= {min_per_class} samples per class, got {ones.size}/{zeros.size}")
    mu1, mu0 = ones.mean(), zeros.mean()
    spread = ones.std() + zeros.std()
    sep = mu1 - mu0
    if spread <= 1e-9 * abs(sep) or spread == 0:
        if sep == 0:
            raise InvalidInputError("classes are identical constants")
        return float("inf") if sep > 0 else float("-inf")
    q = sep / spread
    return 20.0 * math.log10(q) if q > 0 else float("-inf")


def link_collapsed(q_db: float, threshold_db: float = COLLAPSE_Q_DB) -> bool:
    return bool(not q_db >= threshold_db)


def evm_pct(received: ArrayLike, reference) -> float:
    """RMS error-vector magnitude after a least-squares complex gain correction."""
    ref = np.asarray(getattr(reference, "symbols", reference), dtype=complex)
    rx = np.asarray(received, dtype=complex)
    if rx.shape != ref.shape:
        raise InvalidInputError("received and reference must have equal length")
    ref_pow = np.mean(np.abs(ref) ** 2)
    if ref_pow == 0:
        raise InvalidInputError("reference has zero power")
    gain = np.vdot(ref, rx) / np.vdot(ref, ref)
    if gain == 0:
        raise InvalidInputError("received symbols are uncorrelated with the reference")
    err = rx / gain - ref
    return float(100.0 * np.sqrt(np.mean(np.abs(err) ** 2) / ref_pow))
