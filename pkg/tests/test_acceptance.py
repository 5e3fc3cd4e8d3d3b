"""Acceptance suite: one test per release criterion, at its stated tolerance.

Each test prints a single pass line (visible with ``pytest -s`` or in the
captured output); a failed assertion marks the criterion red.
"""
import math

import numpy as np
import pytest

import sphwav as sw
from sphwav import KernelFamily, SamplingScheme, TransformConfig

GL = SamplingScheme.GL
SD = KernelFamily.SCALE_DISCRETISED
NEEDLET = KernelFamily.NEEDLET
BSPLINE = KernelFamily.BSPLINE


def _report(name, detail=""):
    print(f"[acceptance] {name}: PASS {detail}".rstrip())


def test_sht_exactness():
    worst = 0.0
    for L in (4, 8, 16, 32, 64, 128, 256):
        grid = sw.make_grid(GL, L)
        for real in (True, False):
            rng = np.random.default_rng(1000 + L + int(real))
            flm = sw.gaussian_coeffs(L, rng, real_signal=real)
            rec = sw.sh_analysis(sw.sh_synthesis(flm, grid))
            eps = float(np.abs(rec.coeffs - flm.coeffs).max())
            assert eps <= 1e-10, f"L={L} real={real}: {eps}"
            worst = max(worst, eps)
    _report("SHT exactness", f"(worst eps {worst:.2e} <= 1e-10)")


def test_wavelet_exactness():
    L = 128
    grid = sw.make_grid(GL, L)
    worst = 0.0
    cases = [(SD, lam, j0) for lam in (2.0, 3.0) for j0 in (0, 2)]
    cases += [(BSPLINE, lam, j0) for lam in (2.0, 3.0) for j0 in (0, 2)]
    for family, lam, j0 in cases:
        rng = np.random.default_rng(7)
        flm = sw.gaussian_coeffs(L, rng, real_signal=True)
        smap = sw.sh_synthesis(flm, grid)
        eps_by_mode = {}
        for multires in (False, True):
            config = TransformConfig(L, lam, j0, family, multires=multires)
            rec = sw.wav_synthesis_pixel(sw.wav_analysis_pixel(smap, config))
            eps = float(np.abs(sw.sh_analysis(rec).coeffs - flm.coeffs).max())
            assert eps <= 1e-10, f"{family.value} lam={lam} j0={j0} multires={multires}: {eps}"
            eps_by_mode[multires] = eps
            worst = max(worst, eps)
        ratio = eps_by_mode[True] / eps_by_mode[False]
        assert 0.1 <= ratio <= 10.0, f"{family.value} lam={lam} j0={j0}: full/multi ratio {ratio}"
    _report("wavelet exactness", f"(worst eps {worst:.2e} <= 1e-10, modes within 10x)")


def test_admissibility():
    worst = {"sd": 0.0, "bspline": 0.0, "needlet": 0.0}
    for family in (SD, BSPLINE):
        for lam in (2.0, 3.0):
            for j0 in (0, 1, 2):
                for L in (16, 64, 128):
                    kernels = sw.build_kernels(sw.TilingParams(L, lam, j0), family)
                    residual = sw.admissibility_residual(kernels)
                    assert residual <= 1e-10, (
                        f"{family.value} lam={lam} j0={j0} L={L}: {residual}"
                    )
                    worst[family.value] = max(worst[family.value], residual)
    for lam in (2.0, 3.0):
        kernels = sw.build_kernels(sw.TilingParams(64, lam, 1), NEEDLET)
        residual = sw.admissibility_residual(kernels)
        assert residual <= 1e-8
        worst["needlet"] = max(worst["needlet"], residual)
    _report(
        "admissibility",
        f"(sd {worst['sd']:.1e}, bspline {worst['bspline']:.1e} <= 1e-10; "
        f"needlet {worst['needlet']:.1e} <= 1e-8)",
    )


@pytest.mark.slow
def test_complexity_scaling():
    records = sw.run_bench([64, 128, 256, 512], lam=2.0, j0=0, reps=2, seed=0)
    slope = sw.fit_scaling(records, timing="full")
    assert 2.5 <= slope <= 3.5, f"slope {slope}"
    at_256 = next(r for r in records if r.L == 256)
    ratio = at_256.t_multi_ms / at_256.t_full_ms
    assert ratio <= 0.5, f"multires/full time ratio at L=256: {ratio}"
    _report("complexity", f"(slope {slope:.2f} in [2.5, 3.5]; multires ratio {ratio:.2f} <= 0.5)")


def test_error_growth():
    seed = 2024
    eps_32, _ = sw.run_trial(32, TransformConfig(32, 2.0, 0), seed=seed)
    eps_256, _ = sw.run_trial(256, TransformConfig(256, 2.0, 0), seed=seed)
    ratio = eps_256 / eps_32
    assert ratio < 100.0, f"eps(256)/eps(32) = {ratio}"
    _report("error growth", f"(ratio {ratio:.1f} < 100)")


@pytest.mark.slow
def test_noise_model_monte_carlo():
    L, reps = 64, 1000
    config = TransformConfig(L, 2.0, 0, multires=True)
    kernels = sw.kernels_for(config)
    model = sw.make_noise_model(1.0, kernels)
    rng = np.random.default_rng(2024)
    grid = sw.make_grid(GL, L)
    pooled = np.zeros(len(kernels.psi))
    counts = np.zeros(len(kernels.psi))
    for _ in range(reps):
        noise = sw.gaussian_coeffs(L, rng, real_signal=True)
        decomp = sw.wav_analysis_pixel(sw.sh_synthesis(noise, grid), config)
        for i, wmap in enumerate(decomp.wavelets):
            pooled[i] += float(np.sum(wmap.values.real**2))
            counts[i] += wmap.values.size
    worst = 0.0
    for i, j in enumerate(kernels.scales):
        var = pooled[i] / counts[i]
        expected = float(model.sigma_scales[i] ** 2)
        dev = abs(var / expected - 1.0)
        assert dev <= 0.05, f"scale {j}: variance off by {dev * 100:.2f}%"
        worst = max(worst, dev)
    _report("noise model", f"({reps} draws, worst deviation {worst * 100:.2f}% <= 5%)")


def _denoise_case(family, seed, L=128):
    rng = np.random.default_rng(seed)
    low = sw.gaussian_coeffs(16, rng, real_signal=True)
    spec = 1.0 / (1.0 + np.arange(16))
    c = np.zeros(L * L, dtype=complex)
    c[:256] = low.coeffs * np.repeat(spec, 2 * np.arange(16) + 1)
    s = sw.HarmonicCoeffs(L, c, real_signal=True)
    # white noise level that puts the observed SNR at 11.8 dB in expectation
    sigma = math.sqrt(float(np.sum(np.abs(c) ** 2)) * 10 ** (-1.18) / (L * L))
    noise = sw.gaussian_coeffs(L, rng, real_signal=True)
    y = sw.HarmonicCoeffs(L, s.coeffs + sigma * noise.coeffs, real_signal=True)
    grid = sw.make_grid(GL, L)
    config = TransformConfig(L, 2.0, 0, family, multires=True)
    denoised = sw.denoise_pipeline(sw.sh_synthesis(y, grid), sigma, config)
    snr_in = sw.snr_db(s, y)
    snr_out = sw.snr_db(s, sw.sh_analysis(denoised))
    return snr_in, snr_out - snr_in


@pytest.mark.slow
def test_denoising_improvement():
    seeds = range(10)
    results = {}
    for family in (SD, NEEDLET, BSPLINE):
        snr_ins, gains = zip(*(_denoise_case(family, s) for s in seeds))
        for snr_in in snr_ins:
            assert abs(snr_in - 11.8) <= 0.3, f"input SNR {snr_in} outside 11.8 +- 0.3"
        results[family.value] = (np.mean(snr_ins), np.mean(gains), min(gains))
    mean_gain_sd = results["sd"][1]
    assert mean_gain_sd >= 1.5, f"mean SD improvement {mean_gain_sd} dB < 1.5 dB"
    for family, (_, mean_gain, min_gain) in results.items():
        assert min_gain > 0.0, f"{family}: a seed failed to improve ({min_gain} dB)"
    _report(
        "denoising",
        "(SNR(y) {:.2f} dB; gains: sd +{:.2f}, needlet +{:.2f}, bspline +{:.2f} dB)".format(
            results["sd"][0], results["sd"][1], results["needlet"][1], results["bspline"][1]
        ),
    )


def test_tiling_support_and_telescoping():
    for family in (SD, BSPLINE):
        for lam in (2.0, 3.0):
            for j0 in (0, 1, 2):
                for L in (16, 64, 128):
                    kernels = sw.build_kernels(sw.TilingParams(L, lam, j0), family)
                    residual = sw.admissibility_residual(kernels)
                    assert residual <= 1e-10
                    J = kernels.params.J
                    for i, j in enumerate(kernels.scales):
                        if family is SD:
                            for ell in range(L):
                                if ell <= lam ** (j - 1) or ell >= lam ** (j + 1):
                                    assert kernels.psi[i, ell] == 0.0
                        else:
                            bound = L / lam ** (J - j - 2)
                            for ell in range(L):
                                if ell >= bound:
                                    assert kernels.psi[i, ell] == 0.0
    _report("tiling support & telescoping", "(exact zeros; identity residual <= 1e-10)")


def test_io_round_trips_bit_exact(tmp_path):
    rng = np.random.default_rng(5)
    for scheme in (GL, SamplingScheme.MW):
        for real in (True, False):
            grid = sw.make_grid(scheme, 9)
            values = rng.standard_normal(grid.sample_shape).astype(complex)
            if not real:
                values = values + 1j * rng.standard_normal(grid.sample_shape)
            values[-1, :] = values[-1, 0]
            smap = sw.SphereMap(grid, values, is_real=real)
            p1, p2 = tmp_path / "a.s2wm", tmp_path / "b.s2wm"
            sw.write_map(p1, smap)
            back = sw.read_map(p1)
            assert np.array_equal(back.values, smap.values)
            sw.write_map(p2, back)
            assert p1.read_bytes() == p2.read_bytes()

    flm = sw.gaussian_coeffs(7, rng, real_signal=False)
    fp = tmp_path / "f.s2wm"
    sw.write_flm(fp, flm)
    assert np.array_equal(sw.read_flm(fp).coeffs, flm.coeffs)

    img = sw.render_mollweide(
        sw.map_constant(sw.make_grid(GL, 4), 1.5), sw.RenderOptions(width=32)
    )
    ip1, ip2 = tmp_path / "a.ppm", tmp_path / "b.ppm"
    sw.write_image(ip1, img)
    sw.write_image(ip2, img)
    data = ip1.read_bytes()
    assert data == ip2.read_bytes()
    header = b"P6\n32 16\n255\n"
    assert data.startswith(header)
    assert len(data) == len(header) + 3 * 32 * 16
    body = np.frombuffer(data[len(header):], dtype=np.uint8).reshape(16, 32, 3)
    assert np.array_equal(body, img.pixels)
    _report("file round trips", "(S2WM maps/coeffs and PPM byte-exact)")
