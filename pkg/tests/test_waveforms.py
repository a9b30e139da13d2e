import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from orthodac.dsp import TimeGrid
from orthodac.errors import InvalidInputError
from orthodac.waveforms import (
    PRBS_TAPS,
    demap_symbols,
    map_symbols,
    nrz_shape,
    nyquist_shape,
    prbs_bits,
    tone,
    tone_samples,
)


def lfsr_reference(order, length, seed):
    """Bit-serial Fibonacci LFSR, one shift per output bit."""
    a, b = PRBS_TAPS[order]
    reg = [(seed >> i) & 1 for i in range(order)]
    out = list(reg)
    while len(out) < length:
        out.append(out[-a] ^ out[-b])
    return np.array(out[:length], dtype=np.uint8)


class TestPrbs:
    def test_period_127(self):
        b = prbs_bits(7, 254)
        assert np.array_equal(b[:127], b[127:])
        # No shorter period divides 127 (prime), so check the trivial one.
        assert not np.all(b == b[0])

    @pytest.mark.parametrize("seed", [1, 5, 77, 127])
    def test_balance(self, seed):
        b = prbs_bits(7, 127, seed)
        assert int(b.sum()) - int((1 - b).sum()) == 1

    @pytest.mark.parametrize("order", sorted(PRBS_TAPS))
    def test_matches_bitwise_lfsr(self, order):
        assert np.array_equal(prbs_bits(order, 3000, 3), lfsr_reference(order, 3000, 3))

    @pytest.mark.parametrize("order", [9, 15])
    def test_maximal_length(self, order):
        p = 2**order - 1
        b = prbs_bits(order, 2 * p)
        assert np.array_equal(b[:p], b[p:])
        # Distinct windows of `order` bits: every non-zero state appears once.
        states = {tuple(b[i:i + order]) for i in range(p)}
        assert len(states) == p

    def test_zero_seed(self):
        with pytest.raises(InvalidInputError):
            prbs_bits(7, 10, 0)

    def test_bad_order(self):
        with pytest.raises(InvalidInputError):
            prbs_bits(8, 10)


class TestMapping:
    def test_bpsk(self):
        s = map_symbols([0, 1, 1, 0], "BPSK")
        assert list(s.symbols.real) == [-1, 1, 1, -1]

    def test_qam_power(self):
        bits = np.array(list(itertools.product([0, 1], repeat=4))).reshape(-1)
        s = map_symbols(bits, "QAM16")
        assert np.mean(np.abs(s.symbols) ** 2) == pytest.approx(1.0, abs=1e-15)

    def test_qam_gray(self):
        pats = list(itertools.product([0, 1], repeat=4))
        sym = map_symbols(np.array(pats).reshape(-1), "QAM16").symbols * np.sqrt(10)
        for i, j in itertools.combinations(range(16), 2):
            if abs(abs(sym[i] - sym[j]) - 2) < 1e-9:  # nearest neighbours
                assert sum(a != b for a, b in zip(pats[i], pats[j])) == 1

    def test_length_mismatch(self):
        with pytest.raises(InvalidInputError):
            map_symbols([0, 1, 1], "QAM16")

    @given(st.lists(st.integers(0, 1), min_size=4, max_size=200).map(lambda b: b[: len(b) // 4 * 4]),
           st.sampled_from(["BPSK", "QAM16"]))
    def test_round_trip(self, bits, fmt):
        if not bits:
            return
        s = map_symbols(bits, fmt)
        assert list(demap_symbols(s.symbols, fmt)) == bits


class TestShaping:
    def test_single_symbol_kernel(self):
        s = map_symbols([1], "BPSK", 10e9)
        grid = TimeGrid(80e9, 400, t0=-2e-9)
        w = nyquist_shape(s, "I", grid)
        assert np.allclose(w.samples, np.sinc(10e9 * grid.times), atol=1e-12)

    def test_symbol_instants(self):
        s = map_symbols(prbs_bits(7, 500), "BPSK", 60e9)
        grid = TimeGrid.oversampled(60e9, 500, 8)
        w = nyquist_shape(s, "I", grid)
        assert np.allclose(w.samples[::8][64:-64], s.symbols.real[64:-64], atol=1e-9)

    def test_band_limited(self):
        s = map_symbols(prbs_bits(7, 2048), "BPSK", 60e9)
        grid = TimeGrid.oversampled(60e9, 2048, 8)
        seg = nyquist_shape(s, "I", grid).samples[512 * 8:-512 * 8]
        X = np.abs(np.fft.rfft(seg * np.blackman(seg.size))) ** 2
        f = np.fft.rfftfreq(seg.size, 1 / grid.rate)
        assert 10 * np.log10(X[f > 31.5e9].sum() / X[f <= 30e9].sum()) <= -60

    def test_linear(self, rng):
        a = map_symbols(prbs_bits(7, 100, 3), "BPSK", 1.0)
        b = map_symbols(prbs_bits(7, 100, 9), "BPSK", 1.0)
        grid = TimeGrid(4.0, 400)
        both = type(a)(a.symbols * 2 - b.symbols, 1.0, a.format, a.source_bits)
        lhs = nyquist_shape(both, "I", grid).samples
        rhs = 2 * nyquist_shape(a, "I", grid).samples - nyquist_shape(b, "I", grid).samples
        assert np.allclose(lhs, rhs, atol=1e-12)

    def test_coarse_grid(self):
        s = map_symbols([1, 0], "BPSK", 10.0)
        with pytest.raises(InvalidInputError):
            nyquist_shape(s, "I", TimeGrid(5.0, 10))

    def test_nrz_wide_band_square(self):
        s = map_symbols([0, 1] * 64, "BPSK", 1.0)
        grid = TimeGrid(16.0, 128 * 16)
        w = nrz_shape(s, "I", 8.0, grid)
        assert np.allclose(w.samples[::16], s.symbols.real, atol=0.02)

    def test_nrz_constant(self):
        s = map_symbols([1] * 64, "BPSK", 1.0)
        w = nrz_shape(s, "I", 0.5, TimeGrid(8.0, 64 * 8, t0=-0.5))
        assert np.allclose(w.samples, 1.0, atol=1e-12)

    def test_nrz_half_rate_eye_open(self):
        s = map_symbols(prbs_bits(7, 254), "BPSK", 12e9)
        grid = TimeGrid.oversampled(12e9, 254, 16)
        w = nrz_shape(s, "I", 6e9, grid)
        centres = w.samples[::16]
        assert np.array_equal(np.sign(centres[8:-8]), s.symbols.real[8:-8])

    def test_nrz_bandwidth_too_low(self):
        s = map_symbols([1, 0], "BPSK", 10.0)
        with pytest.raises(InvalidInputError):
            nrz_shape(s, "I", 4.0, TimeGrid(40.0, 80))


class TestTone:
    def test_t0(self):
        assert tone(3e9, 0, 2.5, TimeGrid(40e9, 10)).samples[0] == 2.5

    def test_quadrature_phase(self):
        assert abs(tone(3e9, 90, 1, TimeGrid(40e9, 10)).samples[0]) < 1e-15

    def test_single_line(self):
        grid = TimeGrid(480e9, 16 * 40)  # 40 periods of 30 GHz
        X = np.abs(np.fft.rfft(tone(30e9, 0, 1, grid).samples))
        others = np.delete(X, 40)
        assert np.all(others <= 1e-10 * X[40])

    def test_alias(self):
        with pytest.raises(InvalidInputError):
            tone(30e9, 0, 1, TimeGrid(60e9, 10))

    def test_samples_nyquist_cosine(self):
        assert list(tone_samples(30e9, 60e9, 4)) == [1, -1, 1, -1]
