"""Orthogonal-sampling DAC synthesis: N slow branches times sinc-pulse sequences, summed.

The subpackages cover signal representation (:mod:`orthodac.dsp`), the
sequences (:mod:`orthodac.sequence`), the synthesis pipeline
(:mod:`orthodac.ortho`), test signals, impairments, metrics, a baseband
optical link and the scenario runner behind the ``orthodac`` command.
"""
from .dsp import ComplexWaveform, SampledWaveform, Spectrum, TimeGrid, brickwall_lowpass, ideal_reconstruct, sinc, spectrum
from .errors import InvalidInputError, InvalidSpecError, NumericFailure
from .impairments import ImpairmentSpec, awgn_osnr, jitter_instants, quantize
from .link import Bias, LinkConfig, coherent_rx, mzm, run_link
from .metrics import MetricsReport, evm_pct, qfactor_bpsk, rms_error_pct, sinad_enob
from .ortho import BranchPlan, branch_analog, decompose, direct_dac, interleave, orthogonal_dac, synthesize
from .scenarios import ScenarioConfig, load_config, run_scenario, sweep
from .sequence import SequenceSpec, branch_phases, sequence_trace, sequence_value, verify_comb
from .waveforms import Modulation, SymbolStream, map_symbols, nrz_shape, nyquist_shape, prbs_bits, tone

__version__ = "0.1.0"

__all__ = [
    "ComplexWaveform", "SampledWaveform", "Spectrum", "TimeGrid", "brickwall_lowpass", "ideal_reconstruct",
    "sinc", "spectrum", "InvalidInputError", "InvalidSpecError", "NumericFailure", "ImpairmentSpec",
    "awgn_osnr", "jitter_instants", "quantize", "Bias", "LinkConfig", "coherent_rx", "mzm", "run_link",
    "MetricsReport", "evm_pct", "qfactor_bpsk", "rms_error_pct", "sinad_enob", "BranchPlan", "branch_analog",
    "decompose", "direct_dac", "interleave", "orthogonal_dac", "synthesize", "ScenarioConfig", "load_config",
    "run_scenario", "sweep", "SequenceSpec", "branch_phases", "sequence_trace", "sequence_value",
    "verify_comb", "Modulation", "SymbolStream", "map_symbols", "nrz_shape", "nyquist_shape", "prbs_bits", "tone",
]
