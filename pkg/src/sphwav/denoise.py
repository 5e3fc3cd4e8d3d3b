"""Wavelet-domain hard-threshold denoising under a white-Gaussian noise model.

White noise with per-coefficient harmonic variance sigma^2 stays Gaussian
after the wavelet transform; by the addition theorem its per-sample map
variance at scale j is sigma^2 * sum_l psi_j(l)^2, independent of position.
Hard thresholding zeroes wavelet samples below a multiple of that standard
deviation; scaling coefficients pass through untouched.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError
from .grid import SphereMap
from .sht import HarmonicCoeffs
from .tiling import WaveletKernels
from .transform import (
    TransformConfig,
    WaveletDecomposition,
    kernels_for,
    wav_analysis_pixel,
    wav_synthesis_pixel,
)

__all__ = ["NoiseModel", "snr_db", "make_noise_model", "hard_threshold", "denoise_pipeline"]


@dataclass(frozen=True)
class NoiseModel:
    """Per-scale map-space noise levels and the threshold multiplier."""

    sigma: float
    sigma_scales: np.ndarray
    threshold_factor: float = 3.0

    def __post_init__(self):
        if self.sigma < 0.0:
            raise ParameterError(f"noise level must be >= 0, got {self.sigma}")
        self.sigma_scales.setflags(write=False)

    @property
    def thresholds(self) -> np.ndarray:
        return self.threshold_factor * self.sigma_scales


def snr_db(reference: HarmonicCoeffs, estimate: HarmonicCoeffs) -> float:
    """10*log10 of reference energy over residual energy, in decibels.

    Energies are plain coefficient sums of squares (Parseval).  Returns
    +inf when the estimate matches the reference exactly.
    """
    if reference.L != estimate.L:
        raise ParameterError(
            f"band-limits differ: {reference.L} vs {estimate.L}"
        )
    signal = float(np.sum(np.abs(reference.coeffs) ** 2))
    if signal == 0.0:
        raise ParameterError("reference signal has zero energy")
    residual = float(np.sum(np.abs(estimate.coeffs - reference.coeffs) ** 2))
    if residual == 0.0:
        return math.inf
    return 10.0 * math.log10(signal / residual)


def make_noise_model(
    sigma: float, kernels: WaveletKernels, factor: float = 3.0
) -> NoiseModel:
    """Noise model with sigma_j = sigma * sqrt(sum_l psi_j(l)^2) per scale."""
    if sigma < 0.0:
        raise ParameterError(f"noise level must be >= 0, got {sigma}")
    sigma_scales = sigma * np.sqrt((kernels.psi**2).sum(axis=1))
    return NoiseModel(sigma, sigma_scales, factor)


def hard_threshold(decomp: WaveletDecomposition, model: NoiseModel) -> WaveletDecomposition:
    """Zero wavelet samples with magnitude below the per-scale threshold.

    The scaling map passes through unchanged.  Idempotent: surviving values
    keep their exact magnitude, so a second pass removes nothing more.
    """
    thresholds = model.thresholds
    if len(thresholds) != len(decomp.wavelets):
        raise ParameterError(
            f"noise model has {len(thresholds)} scales, decomposition has {len(decomp.wavelets)}"
        )
    kept = []
    for wmap, t in zip(decomp.wavelets, thresholds):
        values = np.where(np.abs(wmap.values) < t, 0.0 + 0.0j, wmap.values)
        kept.append(SphereMap(wmap.grid, values, is_real=wmap.is_real))
    return WaveletDecomposition(decomp.config, decomp.scaling, tuple(kept))


def denoise_pipeline(
    noisy: SphereMap, sigma: float, config: TransformConfig, factor: float = 3.0
) -> SphereMap:
    """Analyse, hard-threshold each wavelet scale, and reconstruct."""
    kernels = kernels_for(config)
    model = make_noise_model(sigma, kernels, factor)
    decomp = wav_analysis_pixel(noisy, config)
    return wav_synthesis_pixel(hard_threshold(decomp, model))
