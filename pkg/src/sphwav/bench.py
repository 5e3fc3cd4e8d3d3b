"""Accuracy and timing trials for the wavelet transform.

A trial draws standard-Gaussian coefficients (with conjugate symmetry for
real signals), synthesises the test map, and times one wavelet analysis
plus one synthesis; the preparatory synthesis and the final harmonic
comparison are excluded from the clock.  The reported time is the mean of
the analysis and synthesis halves; the error is the worst coefficient
deviation after the round trip.

Trials run sequentially on a monotonic clock; a warm-up repetition is
discarded, and the median is reported next to the mean to resist
scheduler noise.
"""
from __future__ import annotations

import statistics
import time
from dataclasses import asdict, dataclass

import numpy as np

from .errors import ParameterError
from .grid import make_grid
from .sht import HarmonicCoeffs, lm_index, sh_analysis, sh_synthesis
from .tiling import KernelFamily
from .transform import TransformConfig, wav_analysis_pixel, wav_synthesis_pixel

__all__ = ["BenchRecord", "gaussian_coeffs", "run_trial", "run_bench", "fit_scaling"]


@dataclass(frozen=True)
class BenchRecord:
    L: int
    family: str
    eps_full: float
    eps_multi: float
    t_full_ms: float
    t_multi_ms: float
    t_full_median_ms: float
    t_multi_median_ms: float
    reps: int
    seed: int

    def __post_init__(self):
        if self.reps < 1:
            raise ParameterError(f"reps must be >= 1, got {self.reps}")
        if self.eps_full < 0.0 or self.eps_multi < 0.0:
            raise ParameterError("error metrics cannot be negative")

    def as_dict(self) -> dict:
        return asdict(self)


def gaussian_coeffs(
    L: int, rng: np.random.Generator, real_signal: bool = True
) -> HarmonicCoeffs:
    """Unit-variance Gaussian coefficients, symmetric when real_signal."""
    if not real_signal:
        z = rng.standard_normal(L * L) + 1j * rng.standard_normal(L * L)
        return HarmonicCoeffs(L, z / np.sqrt(2.0), real_signal=False)
    coeffs = np.zeros(L * L, dtype=np.complex128)
    for ell in range(L):
        base = lm_index(ell, 0)
        coeffs[base] = rng.standard_normal()  # m = 0 real, variance 1
        if ell > 0:
            pos = (
                rng.standard_normal(ell) + 1j * rng.standard_normal(ell)
            ) / np.sqrt(2.0)
            coeffs[base + 1 : base + ell + 1] = pos
            signs = np.where(np.arange(1, ell + 1) % 2 == 0, 1.0, -1.0)
            coeffs[base - ell : base] = (signs * np.conj(pos))[::-1]
    return HarmonicCoeffs(L, coeffs, real_signal=True)


def run_trial(L: int, config: TransformConfig, seed: int) -> tuple[float, float]:
    """One timed round trip; returns (worst coefficient error, time in ms)."""
    if config.L != L:
        config = TransformConfig(
            L, config.lam, config.j0, config.family, config.scheme, config.multires
        )
    rng = np.random.default_rng(seed)
    flm = gaussian_coeffs(L, rng, real_signal=True)
    grid = make_grid(config.scheme, L)
    fmap = sh_synthesis(flm, grid)  # test-signal setup, not timed

    t0 = time.perf_counter()
    decomp = wav_analysis_pixel(fmap, config)
    t1 = time.perf_counter()
    recovered = wav_synthesis_pixel(decomp)
    t2 = time.perf_counter()

    flm_rec = sh_analysis(recovered)  # comparison step, not timed
    eps = float(np.max(np.abs(flm.coeffs - flm_rec.coeffs)))
    t_ms = 1000.0 * ((t1 - t0) + (t2 - t1)) / 2.0
    return eps, t_ms


def run_bench(
    L_values,
    lam: float = 2.0,
    j0: int = 0,
    family: KernelFamily = KernelFamily.SCALE_DISCRETISED,
    reps: int = 3,
    seed: int = 0,
) -> list[BenchRecord]:
    """Mean error/time per band-limit for both resolution modes."""
    if reps < 1:
        raise ParameterError(f"reps must be >= 1, got {reps}")
    records = []
    for L in L_values:
        results = {}
        for multires in (False, True):
            config = TransformConfig(L, lam, j0, family, multires=multires)
            run_trial(L, config, seed)  # warm-up, discarded
            eps_list, t_list = [], []
            for r in range(reps):
                eps, t_ms = run_trial(L, config, seed + r)
                eps_list.append(eps)
                t_list.append(t_ms)
            results[multires] = (
                float(np.mean(eps_list)),
                float(np.mean(t_list)),
                float(statistics.median(t_list)),
            )
        records.append(
            BenchRecord(
                L=L,
                family=family.value,
                eps_full=results[False][0],
                eps_multi=results[True][0],
                t_full_ms=results[False][1],
                t_multi_ms=results[True][1],
                t_full_median_ms=results[False][2],
                t_multi_median_ms=results[True][2],
                reps=reps,
                seed=seed,
            )
        )
    return records


def fit_scaling(records, min_L: int = 64, timing: str = "full") -> float:
    """Least-squares slope of log(time) against log(band-limit)."""
    if timing not in ("full", "multi"):
        raise ParameterError(f"timing must be 'full' or 'multi', got {timing!r}")
    pts = [
        (r.L, r.t_full_ms if timing == "full" else r.t_multi_ms)
        for r in records
        if r.L >= min_L
    ]
    if len(pts) < 3:
        raise ParameterError(
            f"need at least 3 records with L >= {min_L}, got {len(pts)}"
        )
    logs = np.log([p[0] for p in pts])
    logt = np.log([p[1] for p in pts])
    slope, _ = np.polyfit(logs, logt, 1)
    return float(slope)
