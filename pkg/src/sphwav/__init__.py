"""Exact axisymmetric wavelet analysis on the sphere.

Sampled signals live on Gauss-Legendre grids whose quadrature makes the
spherical harmonic transform of band-limited signals an exact finite sum.
Wavelet kernels tile the harmonic line with compactly supported profiles
that resolve the identity, so analysis followed by synthesis reproduces
the input to floating-point accuracy, at full resolution or with each
scale held on a grid matched to its own band-limit.
"""

from .bench import BenchRecord, fit_scaling, gaussian_coeffs, run_bench, run_trial
from .denoise import NoiseModel, denoise_pipeline, hard_threshold, make_noise_model, snr_db
from .errors import FormatError, ParameterError, SphwavError
from .grid import (
    GridSpec,
    SamplingScheme,
    SphereMap,
    distinct_sample_count,
    make_grid,
    map_constant,
)
from .mapio import read_flm, read_map, write_flm, write_map
from .mollweide import RasterImage, RenderOptions, render_mollweide, write_image
from .sht import (
    HarmonicCoeffs,
    assoc_legendre_ring,
    lm_index,
    pad_coeffs,
    sh_analysis,
    sh_synthesis,
    truncate_coeffs,
)
from .tiling import (
    KernelFamily,
    TilingParams,
    WaveletKernels,
    admissibility_residual,
    build_kernels,
    j_max,
    scale_band_limit,
)
from .transform import (
    HarmonicWaveletCoeffs,
    TransformConfig,
    WaveletDecomposition,
    kernels_for,
    wav_analysis_harmonic,
    wav_analysis_pixel,
    wav_synthesis_harmonic,
    wav_synthesis_pixel,
)

__version__ = "0.1.0"
