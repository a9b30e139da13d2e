import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from orthodac.dsp import SampledWaveform, TimeGrid
from orthodac.errors import InvalidInputError, InvalidSpecError
from orthodac.sequence import (
    SequenceSpec,
    branch_phases,
    sequence_trace,
    sequence_traces,
    sequence_value,
    verify_comb,
)

odd_n = st.sampled_from([3, 5, 7, 9, 11])


def sinc_sum_form(n, bw, t, K=10_000):
    k = np.arange(-K, K + 1)
    return np.sum(np.sinc(bw * t - k * n))


class TestSequenceValue:
    def test_peak(self):
        assert sequence_value(SequenceSpec(3, 3.0), 0.0) == pytest.approx(1.0, abs=1e-15)

    def test_zero_crossing(self):
        assert sequence_value(SequenceSpec(3, 3.0), 1 / 3) == pytest.approx(0.0, abs=1e-15)

    def test_between_samples_matches_sinc_sum(self):
        got = sequence_value(SequenceSpec(3, 3.0), 1 / 6)
        assert got == pytest.approx(2 / 3, abs=1e-12)
        assert sinc_sum_form(3, 3.0, 1 / 6) == pytest.approx(got, abs=1e-4)

    @pytest.mark.parametrize("K", [100, 1000, 10000])
    def test_sinc_form_converges(self, K):
        t = 0.37
        err = abs(sinc_sum_form(5, 1.0, t, K) - sequence_value(SequenceSpec(5, 1.0), t))
        assert err < 1.0 / K

    @pytest.mark.parametrize("n", [2, 4, 1, 0, -3])
    def test_bad_n(self, n):
        with pytest.raises(InvalidSpecError):
            SequenceSpec(n, 1.0)

    def test_bad_branch(self):
        with pytest.raises(InvalidSpecError):
            SequenceSpec(3, 1.0, 4)

    @given(odd_n, st.floats(-1e3, 1e3, allow_nan=False))
    def test_partition_of_unity(self, n, t):
        base = SequenceSpec(n, 1.0)
        total = sum(sequence_value(base.for_branch(l), t) for l in range(1, n + 1))
        assert total == pytest.approx(1.0, abs=1e-12)

    @given(odd_n, st.integers(-50, 50))
    def test_interpolation_property(self, n, m):
        # Shifted time m / bw lands on a peak only when m is a multiple of N.
        v = sequence_value(SequenceSpec(n, 2.0), m / 2.0)
        assert v == pytest.approx(1.0 if m % n == 0 else 0.0, abs=1e-12)

    @given(odd_n, st.integers(1, 10))
    def test_orthogonality(self, n, m_raw):
        m = 1 + (m_raw - 1) % (n - 1)
        pts = 64 * n
        t = np.arange(pts) / pts * n  # one period at bw = 1
        spec = SequenceSpec(n, 1.0)
        a = sequence_value(spec, t)
        self_p = np.sum(a * a)
        assert abs(np.sum(a * sequence_value(spec, t - m))) <= 1e-10 * self_p


class TestPhases:
    def test_three(self):
        assert list(branch_phases(3)) == [0.0, 120.0, 240.0]

    def test_five(self):
        assert list(branch_phases(5)) == [0.0, 72.0, 144.0, 216.0, 288.0]

    def test_degenerate(self):
        with pytest.raises(InvalidSpecError):
            branch_phases(1)


class TestTrace:
    def test_matches_closed_form(self):
        grid = TimeGrid(480e9, 4096, t0=-3e-12)
        for n in (3, 5):
            base = SequenceSpec(n, 60e9)
            for l in range(1, n + 1):
                tr = sequence_trace(base.for_branch(l), grid)
                assert np.max(np.abs(tr.samples - sequence_value(base.for_branch(l), grid.times))) <= 1e-12

    def test_n3_dc_and_20ghz(self):
        spec = SequenceSpec(3, 60e9)
        assert list(spec.tone_frequencies) == [20e9]
        grid = TimeGrid(480e9, 24 * 100)  # 100 periods
        rep = verify_comb(sequence_trace(spec, grid), spec)
        two_sided = rep.magnitudes
        assert two_sided[1] == pytest.approx(1 / 3, abs=1e-12)  # DC
        assert 2 * two_sided[2] == pytest.approx(2 / 3, abs=1e-12)  # one-sided tone amplitude

    def test_n5_tones(self):
        assert list(SequenceSpec(5, 60e9).tone_frequencies) == [12e9, 24e9]

    def test_under_resolved(self):
        with pytest.raises(InvalidInputError):
            sequence_trace(SequenceSpec(5, 60e9), TimeGrid(48e9, 100))

    def test_rf_jitter_needs_rng(self):
        with pytest.raises(InvalidInputError):
            sequence_trace(SequenceSpec(3, 60e9), TimeGrid(480e9, 100), rf_jitter_rms=1e-13)

    def test_shared_timing_keeps_partition(self, rng):
        grid = TimeGrid(480e9, 2000)
        traces = sequence_traces(5, 60e9, grid, 1e-12, rng)
        assert np.allclose(sum(t.samples for t in traces), 1.0, atol=1e-12)

    def test_rf_jitter_reproducible(self):
        grid = TimeGrid(480e9, 500)
        a = sequence_trace(SequenceSpec(3, 60e9), grid, 1e-13, np.random.default_rng(4))
        b = sequence_trace(SequenceSpec(3, 60e9), grid, 1e-13, np.random.default_rng(4))
        assert np.array_equal(a.samples, b.samples)


class TestComb:
    @pytest.mark.parametrize("n", [3, 5])
    def test_equal_lines(self, n):
        spec = SequenceSpec(n, 60e9)
        grid = TimeGrid(480e9, 8 * n * 50)
        rep = verify_comb(sequence_trace(spec, grid), spec)
        assert len(rep.magnitudes) == n
        assert np.allclose(rep.magnitudes, 1 / n, atol=1e-12)
        assert rep.flatness - 1 <= 1e-10
        assert rep.max_spurious <= 1e-9
        assert rep.spacing == pytest.approx(60e9 / n)
        assert rep.passed()

    def test_plain_cosine_fails(self):
        spec = SequenceSpec(3, 60e9)
        grid = TimeGrid(480e9, 24 * 20)
        w = SampledWaveform(np.cos(2 * np.pi * 20e9 * grid.times), grid.rate)
        assert not verify_comb(w, spec).passed()

    def test_fractional_periods(self):
        spec = SequenceSpec(3, 60e9)
        grid = TimeGrid(480e9, 24 * 20 + 5)
        with pytest.raises(InvalidInputError):
            verify_comb(sequence_trace(spec, grid), spec)
