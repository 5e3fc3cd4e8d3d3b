"""Axisymmetric wavelet transforms, full-resolution and multiresolution.

In harmonic space the transform is a per-degree product with the kernel
tables, so the cost is dominated by the spherical harmonic transforms that
move between samples and coefficients: one for the input signal, one for
the scaling map and one per wavelet scale.

The multiresolution algorithm synthesises each wavelet-coefficient map on
a grid matched to that scale's band-limit.  With an exact sampling
theorem nothing is lost: analysis at the reduced band-limit recovers the
identical coefficients, and only the top two scales (whose band-limits
cap at L) still require full-size grids.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ParameterError
from .grid import GridSpec, SamplingScheme, SphereMap, make_grid
from .sht import (
    HarmonicCoeffs,
    pad_coeffs,
    sh_analysis,
    sh_analysis_stack,
    sh_synthesis,
    sh_synthesis_stack,
    truncate_coeffs,
)
from .tiling import KernelFamily, TilingParams, WaveletKernels, build_kernels

__all__ = [
    "TransformConfig",
    "WaveletDecomposition",
    "HarmonicWaveletCoeffs",
    "kernels_for",
    "wav_analysis_harmonic",
    "wav_synthesis_harmonic",
    "wav_analysis_pixel",
    "wav_synthesis_pixel",
]


@dataclass(frozen=True)
class TransformConfig:
    """Everything needed to fix a wavelet transform: (L, lam, j0, family, scheme, multires)."""

    L: int
    lam: float
    j0: int = 0
    family: KernelFamily = KernelFamily.SCALE_DISCRETISED
    scheme: SamplingScheme = SamplingScheme.GL
    multires: bool = True

    def __post_init__(self):
        TilingParams(self.L, self.lam, self.j0)  # validates

    @property
    def tiling(self) -> TilingParams:
        return TilingParams(self.L, self.lam, self.j0)


@lru_cache(maxsize=64)
def _kernels_cached(L: int, lam: float, j0: int, family: KernelFamily) -> WaveletKernels:
    return build_kernels(TilingParams(L, lam, j0), family)


def kernels_for(config: TransformConfig) -> WaveletKernels:
    """Kernel tables for a config; cached, kernels are immutable."""
    return _kernels_cached(config.L, config.lam, config.j0, config.family)


@dataclass(frozen=True, eq=False)
class HarmonicWaveletCoeffs:
    """Wavelet transform in harmonic space: scaling set plus one set per scale."""

    scaling: HarmonicCoeffs
    wavelets: tuple[HarmonicCoeffs, ...]


@dataclass(frozen=True, eq=False)
class WaveletDecomposition:
    """Scaling map plus one wavelet-coefficient map per scale j = j0..J."""

    config: TransformConfig
    scaling: SphereMap
    wavelets: tuple[SphereMap, ...]

    def __post_init__(self):
        kernels = kernels_for(self.config)
        n = kernels.params.n_scales
        if len(self.wavelets) != n:
            raise ParameterError(
                f"expected {n} wavelet maps for scales {kernels.params.j0}..{kernels.params.J},"
                f" got {len(self.wavelets)}"
            )
        expected = _scale_grids(self.config, kernels)
        got = [self.scaling.grid] + [w.grid for w in self.wavelets]
        for grid, want in zip(got, expected):
            if grid != want:
                raise ParameterError(
                    f"decomposition grid band-limit {grid.L} does not match expected {want.L}"
                )


def _scale_grids(config: TransformConfig, kernels: WaveletKernels) -> list[GridSpec]:
    """Grids for [scaling, j0, ..., J] under the config's resolution mode."""
    if config.multires:
        bands = [kernels.scaling_bandlimit, *kernels.scale_bandlimits]
    else:
        bands = [config.L] * (kernels.params.n_scales + 1)
    return [make_grid(config.scheme, k) for k in bands]


def _kernel_product(flm: HarmonicCoeffs, kernel: np.ndarray, L: int) -> HarmonicCoeffs:
    """Per-degree product sqrt(4pi/(2l+1)) * f_lm * kernel_l.

    Kernel values are real, so the nominal conjugation of the kernel is a
    no-op and conjugate symmetry of real signals is preserved exactly.
    """
    ells = np.arange(L)
    factor = np.sqrt(4.0 * np.pi / (2.0 * ells + 1.0)) * kernel
    weights = np.repeat(factor, 2 * ells + 1)
    return HarmonicCoeffs(L, flm.coeffs * weights, flm.real_signal)


def wav_analysis_harmonic(
    flm: HarmonicCoeffs, kernels: WaveletKernels, truncate: bool = False
) -> HarmonicWaveletCoeffs:
    """Scaling and wavelet coefficient sets as weighted products per degree.

    With ``truncate`` each output is cut to its scale band-limit (the
    kernels vanish above it, so no information is dropped).
    """
    if flm.L != kernels.L:
        raise ParameterError(
            f"coefficient band-limit {flm.L} does not match kernels ({kernels.L})"
        )
    assert np.isrealobj(kernels.phi) and np.isrealobj(kernels.psi)
    L = kernels.L
    scaling = _kernel_product(flm, kernels.phi, L)
    wavelets = [_kernel_product(flm, kernels.psi[i], L) for i in range(len(kernels.psi))]
    if truncate:
        scaling = truncate_coeffs(scaling, kernels.scaling_bandlimit)
        wavelets = [
            truncate_coeffs(w, k) for w, k in zip(wavelets, kernels.scale_bandlimits)
        ]
    return HarmonicWaveletCoeffs(scaling, tuple(wavelets))


def wav_synthesis_harmonic(
    wcoeffs: HarmonicWaveletCoeffs, kernels: WaveletKernels
) -> HarmonicCoeffs:
    """Recombine scaling and wavelet coefficient sets into signal coefficients."""
    if len(wcoeffs.wavelets) != len(kernels.psi):
        raise ParameterError(
            f"expected {len(kernels.psi)} wavelet coefficient sets, got {len(wcoeffs.wavelets)}"
        )
    L = kernels.L
    sets = [wcoeffs.scaling, *wcoeffs.wavelets]
    tables = [kernels.phi, *kernels.psi]
    for s, k_band in zip(sets, [kernels.scaling_bandlimit, *kernels.scale_bandlimits]):
        if s.L > L:
            raise ParameterError(f"coefficient set band-limit {s.L} exceeds kernels ({L})")
    total = np.zeros(L * L, dtype=np.complex128)
    real = all(s.real_signal for s in sets)
    for s, table in zip(sets, tables):
        padded = pad_coeffs(s, L)
        total += _kernel_product(padded, table, L).coeffs
    return HarmonicCoeffs(L, total, real_signal=real)


def wav_analysis_pixel(smap: SphereMap, config: TransformConfig) -> WaveletDecomposition:
    """Decompose a sampled signal into scaling and wavelet-coefficient maps.

    The input must be band-limited at ``config.L``; that precondition is
    the caller's to guarantee and is not detectable at runtime.
    """
    if smap.grid.L != config.L:
        raise ParameterError(
            f"map band-limit {smap.grid.L} does not match config ({config.L})"
        )
    kernels = kernels_for(config)
    flm = sh_analysis(smap)
    wcoeffs = wav_analysis_harmonic(flm, kernels, truncate=config.multires)
    grids = _scale_grids(config, kernels)
    sets = [wcoeffs.scaling, *wcoeffs.wavelets]
    maps = _grouped_synthesis(sets, grids)
    return WaveletDecomposition(config, maps[0], tuple(maps[1:]))


def wav_synthesis_pixel(decomp: WaveletDecomposition) -> SphereMap:
    """Reconstruct the signal map from a decomposition (exact round trip)."""
    config = decomp.config
    kernels = kernels_for(config)
    sets = _grouped_analysis([decomp.scaling, *decomp.wavelets])
    flm = wav_synthesis_harmonic(
        HarmonicWaveletCoeffs(sets[0], tuple(sets[1:])), kernels
    )
    return sh_synthesis(flm, make_grid(config.scheme, config.L))


def _batch_size(L: int) -> int:
    # Batching amortises per-degree dispatch overhead, which dominates at
    # small band-limits; at large ones the stacked work set outgrows the
    # caches, so cap the sweep near a fixed memory budget.
    return max(1, 6_000_000 // (L * L * 16))


def _grouped_synthesis(sets, grids):
    """Synthesise per-scale coefficient sets, batching scales that share a grid.

    Scales on one grid ride a single Legendre-recursion sweep; output order
    matches the input order.
    """
    by_grid: dict[GridSpec, list[int]] = {}
    for i, grid in enumerate(grids):
        by_grid.setdefault(grid, []).append(i)
    out: list[SphereMap | None] = [None] * len(sets)
    for grid, idxs in by_grid.items():
        step = _batch_size(grid.L)
        for start in range(0, len(idxs), step):
            chunk = idxs[start : start + step]
            maps = sh_synthesis_stack([sets[i] for i in chunk], grid)
            for i, m in zip(chunk, maps):
                out[i] = m
    return out


def _grouped_analysis(maps):
    """Analyse per-scale maps, batching maps that share a grid."""
    by_grid: dict[GridSpec, list[int]] = {}
    for i, m in enumerate(maps):
        by_grid.setdefault(m.grid, []).append(i)
    out: list[HarmonicCoeffs | None] = [None] * len(maps)
    for grid, idxs in by_grid.items():
        step = _batch_size(grid.L)
        for start in range(0, len(idxs), step):
            chunk = idxs[start : start + step]
            sets = sh_analysis_stack([maps[i] for i in chunk])
            for i, s in zip(chunk, sets):
                out[i] = s
    return out
