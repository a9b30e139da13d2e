import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from orthodac.dsp import SampledWaveform, TimeGrid, brickwall_lowpass, ideal_reconstruct
from orthodac.errors import InvalidInputError, InvalidSpecError
from orthodac.impairments import ImpairmentSpec
from orthodac.metrics import rms_error_pct, sinad_enob
from orthodac.ortho import (
    BranchPlan,
    branch_analog,
    decompose,
    direct_dac,
    interleave,
    orthogonal_dac,
    synthesize,
)
from orthodac.waveforms import tone_samples

FS = 60e9
M = 8


def nyquist_cos(n):
    return tone_samples(FS / 2, FS, n)


def pulse_jitter_sinad_db(sample_power, tone_power, rate, sigma):
    # Each output pulse displaced by tau adds -tau * d/dt sinc(rate t); the
    # derivative kernel has energy (pi rate)^2 / 3 per unit sample energy.
    noise = sample_power * (np.pi * rate * sigma) ** 2 / 3.0
    return 10 * np.log10(tone_power / noise)


class TestPlan:
    def test_derived(self):
        p = BranchPlan(3, 60e9)
        assert p.branch_rate * 3 == p.full_rate
        assert p.branch_bandwidth == p.branch_rate / 2 == 10e9
        assert list(p.tone_frequencies) == [20e9]
        assert list(p.phases) == [0, 120, 240]

    def test_even_rejected(self):
        with pytest.raises(InvalidSpecError):
            BranchPlan(4, 60e9)


class TestDecompose:
    def test_index_pattern(self):
        d = decompose(np.arange(6.0), BranchPlan(3, 1.0))  # a..f as 0..5
        assert [list(s.samples) for s in d.streams] == [[0, 3], [1, 4], [2, 5]]
        assert [s.origin_offset for s in d.streams] == [0.0, 1.0, 2.0]
        assert not d.padded

    @given(st.lists(st.floats(-1e6, 1e6, allow_nan=False), min_size=1, max_size=80), st.sampled_from([3, 5, 7]))
    def test_round_trip(self, xs, n):
        d = decompose(xs, BranchPlan(n, 1.0))
        assert np.array_equal(interleave(d), np.asarray(xs))
        merged = np.sort(np.concatenate([s.samples for s in d.streams]))
        assert np.array_equal(merged, np.sort(np.concatenate([xs, np.zeros(len(merged) - len(xs))])))

    def test_pad_length_seven(self):
        d = decompose(np.arange(1.0, 8.0), BranchPlan(3, 1.0))
        assert d.padded
        assert sum(len(s.samples) for s in d.streams) == 9
        assert list(interleave(d)) == list(np.arange(1.0, 8.0))

    def test_no_pad_mode(self):
        with pytest.raises(InvalidInputError):
            decompose(np.ones(7), BranchPlan(3, 1.0), pad=False)

    def test_empty(self):
        with pytest.raises(InvalidInputError):
            decompose([], BranchPlan(3, 1.0))


class TestBranchAnalog:
    def test_single_sample_kernel(self):
        plan = BranchPlan(3, 60e9)
        x = np.zeros(300)
        x[1] = 1.0  # branch 2, m = 0
        sub = decompose(x, plan).streams[1]
        grid = TimeGrid(FS * M, 300 * M)
        w = branch_analog(sub, plan, grid)
        ref = np.sinc(plan.branch_rate * (grid.times - 1 / FS))
        assert np.max(np.abs(w.samples - ref)) < 1e-12

    def test_constant_substream(self):
        plan = BranchPlan(3, 60e9)
        sub = decompose(np.ones(3 * 400), plan).streams[0]
        grid = TimeGrid(FS * M, 1200 * M)
        w = branch_analog(sub, plan, grid)
        mid = grid.n_points // 2 + 5
        brute = np.sum(np.sinc(plan.branch_rate * grid.times[mid] - np.arange(400)))
        assert w.samples[mid] == pytest.approx(brute, abs=1e-12)
        assert abs(w.samples[mid] - 1) < 1e-2

    def test_coarse_grid(self):
        plan = BranchPlan(3, 60e9)
        sub = decompose(np.ones(30), plan).streams[0]
        with pytest.raises(InvalidInputError):
            branch_analog(sub, plan, TimeGrid(30e9, 100))

    def test_jitter_sinad_pulse_model(self):
        # 10 GHz bandwidth branch (N=3 at 60 GS/s) carrying its Nyquist-edge tone.
        plan = BranchPlan(3, FS)
        n = 3 * 1024
        sub = decompose(nyquist_cos(n), plan, pad=False).streams[0]
        grid = TimeGrid.oversampled(FS, n, M)
        sigma = 1e-12
        vals = [
            sinad_enob(branch_analog(sub, plan, grid, sigma, np.random.default_rng(s), periodic=True), 10e9)[0]
            for s in range(100)
        ]
        expect = pulse_jitter_sinad_db(1.0, 0.5, plan.branch_rate, sigma)
        assert np.mean(vals) == pytest.approx(expect, abs=0.3)
        # Relation to the sampling-jitter oracle -20 log10(2 pi f sigma).
        oracle = -20 * np.log10(2 * np.pi * 10e9 * sigma)
        assert np.mean(vals) - oracle == pytest.approx(10 * np.log10(1.5), abs=0.3)


class TestSynthesize:
    def test_constant_branches(self):
        plan = BranchPlan(5, FS)
        grid = TimeGrid(FS * M, 1000)
        ones = [SampledWaveform(np.ones(1000), grid.rate)] * 5
        assert np.allclose(synthesize(ones, plan).samples, 1.0, atol=1e-10)

    def test_nyquist_cosine_matches_direct(self):
        n = 3 * 2048
        grid = TimeGrid.oversampled(FS, n, M)
        x = nyquist_cos(n)
        out = orthogonal_dac(x, BranchPlan(3, FS), grid).output
        ref = ideal_reconstruct(x, FS, grid)
        g = 64 * 3 * M
        assert rms_error_pct(out, ref, g) / 100 <= 1e-6

    def test_single_sample_kernel(self):
        n = 600
        x = np.zeros(n)
        x[301] = 1.0
        grid = TimeGrid.oversampled(FS, n, M)
        out = orthogonal_dac(x, BranchPlan(5, FS), grid).output
        ref = np.sinc(FS * grid.times - 301)
        assert np.max(np.abs(out.samples - ref)) < 1e-6

    def test_wrong_branch_count(self):
        grid = TimeGrid(FS * M, 100)
        w = SampledWaveform(np.ones(100), grid.rate)
        with pytest.raises(InvalidInputError):
            synthesize([w, w], BranchPlan(3, FS))

    def test_mismatched_grids(self):
        a = SampledWaveform(np.ones(100), FS * M)
        b = SampledWaveform(np.ones(100), FS * M, t0=1e-12)
        with pytest.raises(InvalidInputError):
            synthesize([a, a, b], BranchPlan(3, FS))


def bandlimited(seed, n, frac=0.49):
    x = np.random.default_rng(seed).standard_normal(n)
    return brickwall_lowpass(SampledWaveform(x, 1.0), frac).samples


class TestProperties:
    @settings(max_examples=6)
    @given(st.integers(0, 2**31), st.sampled_from([3, 5]))
    def test_oracle_equivalence(self, seed, n):
        L = 2400
        x = bandlimited(seed, L)
        grid = TimeGrid.oversampled(FS, L, 4)
        out = orthogonal_dac(x, BranchPlan(n, FS), grid).output
        ref = ideal_reconstruct(x, FS, grid)
        assert rms_error_pct(out, ref, 64 * n * 4) / 100 <= 1e-6

    @settings(max_examples=8)
    @given(st.integers(0, 2**31), st.floats(-3, 3), st.floats(-3, 3))
    def test_linearity(self, seed, a, b):
        r = np.random.default_rng(seed)
        A, B = r.standard_normal(300), r.standard_normal(300)
        grid = TimeGrid.oversampled(FS, 300, 4)
        plan = BranchPlan(3, FS)
        f = lambda v: orthogonal_dac(v, plan, grid).output.samples
        assert np.allclose(f(a * A + b * B), a * f(A) + b * f(B), atol=1e-10)

    def test_band_limitation(self):
        L = 4096
        x = bandlimited(7, L)
        grid = TimeGrid.oversampled(FS, L, M)
        out = orthogonal_dac(x, BranchPlan(5, FS), grid).output.samples
        g = 64 * 5 * M
        seg = out[g:-g]
        X = np.abs(np.fft.rfft(seg * np.blackman(seg.size))) ** 2
        f = np.fft.rfftfreq(seg.size, 1 / grid.rate)
        inband = X[f <= FS / 2].sum()
        # Skip the window main-lobe spill right at the edge.
        above = X[f > FS / 2 * 1.05].sum()
        assert 10 * np.log10(above / inband) <= -60

    @pytest.mark.parametrize("sigma", [0.5e-12, 1e-12, 2.2e-12])
    def test_jitter_asymmetry(self, sigma):
        n = 3 * 5 * 256
        grid = TimeGrid.oversampled(FS, n, M)
        x = nyquist_cos(n)
        imp = ImpairmentSpec(dac_jitter_rms=sigma, rf_jitter_rms=100e-15)
        d, o = [], []
        for s in range(30):
            d.append(sinad_enob(direct_dac(x, FS, grid, sigma, np.random.default_rng(s), periodic=True), FS / 2)[1])
            w = orthogonal_dac(x, BranchPlan(3, FS), grid, imp, np.random.default_rng(1000 + s), periodic=True)
            o.append(sinad_enob(w.output, FS / 2)[1])
        diff = np.mean(o) - np.mean(d)
        se = np.sqrt(np.var(o, ddof=1) / 30 + np.var(d, ddof=1) / 30)
        assert diff - 2.33 * se > 0  # one-sided, 1 % level


class TestDirect:
    def test_zero_jitter_is_ideal(self, rng):
        x = rng.standard_normal(500)
        grid = TimeGrid.oversampled(FS, 500, 4)
        assert np.array_equal(direct_dac(x, FS, grid).samples, ideal_reconstruct(x, FS, grid).samples)

    @pytest.mark.parametrize("sigma,enob", [(1e-12, 2.1), (0.05e-12, 7.1)])
    def test_jitter_enob(self, sigma, enob):
        n = 3 * 1024
        grid = TimeGrid.oversampled(FS, n, M)
        x = nyquist_cos(n)
        vals = [sinad_enob(direct_dac(x, FS, grid, sigma, s, periodic=True), FS / 2)[1] for s in range(100)]
        assert np.mean(vals) == pytest.approx(enob, abs=0.5)

    def test_negative_jitter(self):
        with pytest.raises(InvalidInputError):
            direct_dac([1.0, 2.0], FS, TimeGrid(FS, 2), -1e-12)

    def test_pipeline_reproducible(self):
        x = nyquist_cos(300)
        grid = TimeGrid.oversampled(FS, 300, 4)
        imp = ImpairmentSpec(1e-12, 1e-13, seed=9)
        a = orthogonal_dac(x, BranchPlan(3, FS), grid, imp).output.samples
        b = orthogonal_dac(x, BranchPlan(3, FS), grid, imp).output.samples
        assert np.array_equal(a, b)
