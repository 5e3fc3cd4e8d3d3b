import math

import numpy as np
import pytest

from sphwav import (
    HarmonicCoeffs,
    HarmonicWaveletCoeffs,
    KernelFamily,
    ParameterError,
    SamplingScheme,
    TransformConfig,
    WaveletDecomposition,
    distinct_sample_count,
    gaussian_coeffs,
    kernels_for,
    lm_index,
    make_grid,
    map_constant,
    pad_coeffs,
    sh_analysis,
    sh_synthesis,
    wav_analysis_harmonic,
    wav_analysis_pixel,
    wav_synthesis_harmonic,
    wav_synthesis_pixel,
)

GL = SamplingScheme.GL
SD = KernelFamily.SCALE_DISCRETISED


def random_real_map(L, seed=0):
    rng = np.random.default_rng(seed)
    flm = gaussian_coeffs(L, rng, real_signal=True)
    return sh_synthesis(flm, make_grid(GL, L)), flm


class TestHarmonicAnalysis:
    def test_monopole_goes_to_scaling_only(self):
        L = 16
        config = TransformConfig(L, 2.0, 0, multires=False)
        kernels = kernels_for(config)
        c = np.zeros(L * L, dtype=complex)
        c[0] = 2.5
        wc = wav_analysis_harmonic(HarmonicCoeffs(L, c, real_signal=True), kernels)
        for w in wc.wavelets:
            assert np.all(w.coeffs == 0.0)
        expected = math.sqrt(4.0 * math.pi) * 2.5 * kernels.phi[0]
        assert wc.scaling.coeffs[0] == pytest.approx(expected, rel=1e-14)
        assert np.all(wc.scaling.coeffs[1:] == 0.0)

    def test_disjoint_support_gives_exact_zeros(self):
        L, lam, j0 = 64, 2.0, 0
        kernels = kernels_for(TransformConfig(L, lam, j0))
        target = 3  # signal confined to the annulus of scale 3
        lo, hi = lam ** (target - 1), lam ** (target + 1)
        c = np.zeros(L * L, dtype=complex)
        for ell in range(L):
            if lo < ell < hi:
                c[lm_index(ell, 0)] = 1.0
        wc = wav_analysis_harmonic(HarmonicCoeffs(L, c, real_signal=True), kernels)
        for i, j in enumerate(kernels.scales):
            overlaps = lam ** (j - 1) < hi and lam ** (j + 1) > lo
            if not overlaps:
                assert np.all(wc.wavelets[i].coeffs == 0.0)
        assert np.any(wc.wavelets[target - j0].coeffs != 0.0)

    def test_energy_identity(self, rng):
        L = 32
        kernels = kernels_for(TransformConfig(L, 2.0, 0))
        flm = gaussian_coeffs(L, rng, real_signal=False)
        wc = wav_analysis_harmonic(flm, kernels)
        total = float(np.sum(np.abs(wc.scaling.coeffs) ** 2))
        for w in wc.wavelets:
            total += float(np.sum(np.abs(w.coeffs) ** 2))
        reference = float(np.sum(np.abs(flm.coeffs) ** 2))
        assert total == pytest.approx(reference, rel=1e-10)

    def test_band_limit_mismatch_rejected(self, rng):
        kernels = kernels_for(TransformConfig(32, 2.0, 0))
        with pytest.raises(ParameterError):
            wav_analysis_harmonic(gaussian_coeffs(16, rng), kernels)


class TestHarmonicSynthesis:
    def test_round_trip_identity(self, rng):
        L = 64
        kernels = kernels_for(TransformConfig(L, 2.0, 0))
        flm = gaussian_coeffs(L, rng, real_signal=False)
        rec = wav_synthesis_harmonic(wav_analysis_harmonic(flm, kernels), kernels)
        assert np.abs(rec.coeffs - flm.coeffs).max() <= 1e-10

    def test_round_trip_with_truncation(self, rng):
        L = 64
        kernels = kernels_for(TransformConfig(L, 2.0, 0))
        flm = gaussian_coeffs(L, rng, real_signal=True)
        wc = wav_analysis_harmonic(flm, kernels, truncate=True)
        assert wc.scaling.L == kernels.scaling_bandlimit
        for w, k in zip(wc.wavelets, kernels.scale_bandlimits):
            assert w.L == k
        rec = wav_synthesis_harmonic(wc, kernels)
        assert np.abs(rec.coeffs - flm.coeffs).max() <= 1e-10

    def test_zero_coefficients(self):
        L = 16
        kernels = kernels_for(TransformConfig(L, 2.0, 0))
        n = kernels.params.n_scales
        wc = HarmonicWaveletCoeffs(
            HarmonicCoeffs.zeros(L), tuple(HarmonicCoeffs.zeros(L) for _ in range(n))
        )
        rec = wav_synthesis_harmonic(wc, kernels)
        assert np.all(rec.coeffs == 0.0)

    def test_single_scale_pointwise_product(self, rng):
        # Zeroing all but one scale turns the round trip into multiplication
        # by the squared kernel, degree by degree.
        L = 32
        kernels = kernels_for(TransformConfig(L, 2.0, 0))
        flm = gaussian_coeffs(L, rng, real_signal=False)
        wc = wav_analysis_harmonic(flm, kernels)
        keep = 2
        zero = HarmonicCoeffs.zeros(L)
        wavelets = tuple(
            w if i == keep else zero for i, w in enumerate(wc.wavelets)
        )
        rec = wav_synthesis_harmonic(HarmonicWaveletCoeffs(zero, wavelets), kernels)
        ells = np.arange(L)
        weights = np.repeat(
            4.0 * math.pi / (2.0 * ells + 1.0) * kernels.psi[keep] ** 2, 2 * ells + 1
        )
        np.testing.assert_allclose(rec.coeffs, flm.coeffs * weights, atol=1e-14)

    def test_wrong_scale_count_rejected(self):
        kernels = kernels_for(TransformConfig(16, 2.0, 0))
        wc = HarmonicWaveletCoeffs(HarmonicCoeffs.zeros(16), (HarmonicCoeffs.zeros(16),))
        with pytest.raises(ParameterError):
            wav_synthesis_harmonic(wc, kernels)


class TestPixelTransform:
    def test_scale_count_and_grids(self):
        smap, _ = random_real_map(128, seed=2)
        config = TransformConfig(128, 3.0, 2, multires=True)
        decomp = wav_analysis_pixel(smap, config)
        assert len(decomp.wavelets) == 4  # scales 2..5
        kernels = kernels_for(config)
        assert decomp.scaling.grid.L == kernels.scaling_bandlimit
        for wmap, k in zip(decomp.wavelets, kernels.scale_bandlimits):
            assert wmap.grid.L == k

    def test_constant_map_lands_in_scaling(self):
        config = TransformConfig(16, 2.0, 0, multires=False)
        decomp = wav_analysis_pixel(map_constant(make_grid(GL, 16), 3.0), config)
        for wmap in decomp.wavelets:
            assert np.abs(wmap.values).max() <= 1e-12
        assert np.abs(decomp.scaling.values.real - 3.0).max() <= 1e-12

    def test_multires_matches_fullres_after_upsampling(self):
        L = 64
        smap, _ = random_real_map(L, seed=3)
        multi = wav_analysis_pixel(smap, TransformConfig(L, 2.0, 0, multires=True))
        full = wav_analysis_pixel(smap, TransformConfig(L, 2.0, 0, multires=False))
        grid_L = make_grid(GL, L)
        for small, big in zip(multi.wavelets, full.wavelets):
            upsampled = sh_synthesis(sh_analysis(small), grid_L)
            assert np.abs(upsampled.values - big.values).max() <= 1e-10

    @pytest.mark.parametrize("multires", [True, False])
    def test_round_trip_L128(self, multires):
        smap, flm = random_real_map(128, seed=4)
        config = TransformConfig(128, 2.0, 0, multires=multires)
        rec = wav_synthesis_pixel(wav_analysis_pixel(smap, config))
        eps = np.abs(sh_analysis(rec).coeffs - flm.coeffs).max()
        assert eps <= 1e-10
        assert rec.is_real

    def test_zero_map_round_trip(self):
        config = TransformConfig(16, 2.0, 0)
        zero = map_constant(make_grid(GL, 16), 0.0)
        rec = wav_synthesis_pixel(wav_analysis_pixel(zero, config))
        assert np.all(rec.values == 0.0)

    def test_linearity(self):
        L = 32
        config = TransformConfig(L, 2.0, 0, multires=False)
        f, _ = random_real_map(L, seed=5)
        g, _ = random_real_map(L, seed=6)
        a, b = 2.0, -0.5
        combo = f.__class__(f.grid, a * f.values + b * g.values, is_real=True)
        dc = wav_analysis_pixel(combo, config)
        df = wav_analysis_pixel(f, config)
        dg = wav_analysis_pixel(g, config)
        for mc, mf, mg in zip(
            (dc.scaling, *dc.wavelets), (df.scaling, *df.wavelets), (dg.scaling, *dg.wavelets)
        ):
            expected = a * mf.values + b * mg.values
            scale = max(np.abs(expected).max(), 1.0)
            assert np.abs(mc.values - expected).max() <= 1e-12 * scale

    def test_real_input_gives_real_outputs(self):
        smap, _ = random_real_map(32, seed=8)
        decomp = wav_analysis_pixel(smap, TransformConfig(32, 2.0, 0))
        assert decomp.scaling.is_real
        assert all(w.is_real for w in decomp.wavelets)
        assert np.all(decomp.scaling.values.imag == 0.0)

    def test_multires_sample_budget(self):
        for L in (64, 128):
            config = TransformConfig(L, 2.0, 0, multires=True)
            smap, _ = random_real_map(L, seed=9)
            decomp = wav_analysis_pixel(smap, config)
            total = sum(
                distinct_sample_count(m.grid) for m in (decomp.scaling, *decomp.wavelets)
            )
            J, j0 = kernels_for(config).params.J, config.j0
            assert total < (J - j0 + 3) * L * (2 * L - 1)
            assert total < 3 * L * (2 * L - 1)

    def test_grid_mismatch_rejected(self):
        smap, _ = random_real_map(16, seed=10)
        with pytest.raises(ParameterError):
            wav_analysis_pixel(smap, TransformConfig(32, 2.0, 0))

    def test_decomposition_validation(self):
        L = 16
        config = TransformConfig(L, 2.0, 0, multires=True)
        smap, _ = random_real_map(L, seed=11)
        decomp = wav_analysis_pixel(smap, config)
        with pytest.raises(ParameterError):
            WaveletDecomposition(config, decomp.scaling, decomp.wavelets[:-1])
        full_config = TransformConfig(L, 2.0, 0, multires=False)
        with pytest.raises(ParameterError):
            WaveletDecomposition(full_config, decomp.scaling, decomp.wavelets)


class TestConfig:
    def test_invalid_scale_range(self):
        with pytest.raises(ParameterError):
            TransformConfig(128, 3.0, 7)
        with pytest.raises(ParameterError):
            TransformConfig(2, 2.0, 0)

    def test_kernels_cached(self):
        a = kernels_for(TransformConfig(32, 2.0, 0))
        b = kernels_for(TransformConfig(32, 2.0, 0, multires=False))
        assert a is b  # resolution mode does not affect kernel tables
