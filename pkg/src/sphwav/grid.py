"""Sampling grids on the sphere and the sampled-map container.

Two iso-latitude grids are supported.  The Gauss-Legendre (GL) grid places
the L colatitude rings at the arccosines of the L Gauss-Legendre nodes and
carries the matching quadrature weights, so integrals of band-limited
signals are finite sums that are exact to floating-point precision.  The
equiangular (MW) grid has no quadrature weights here and is only a target
for synthesis / resampling.

Both grids use 2L-1 equally spaced samples per ring, which is exactly
enough to resolve azimuthal orders |m| <= L-1 without aliasing.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ParameterError

__all__ = [
    "SamplingScheme",
    "GridSpec",
    "SphereMap",
    "make_grid",
    "distinct_sample_count",
    "map_constant",
]


class SamplingScheme(enum.Enum):
    GL = "gl"
    MW = "mw"


@dataclass(frozen=True, eq=False)
class GridSpec:
    """Iso-latitude grid: colatitude rings plus equally spaced longitudes.

    ``quad_weights`` are dimensionless weights over cos(theta); they sum to 2
    for GL grids and are ``None`` for MW grids (synthesis targets only).
    """

    scheme: SamplingScheme
    L: int
    n_theta: int
    n_phi: int
    theta_nodes: np.ndarray
    quad_weights: np.ndarray | None

    def __post_init__(self):
        self.theta_nodes.setflags(write=False)
        if self.quad_weights is not None:
            self.quad_weights.setflags(write=False)

    def __eq__(self, other):
        if not isinstance(other, GridSpec):
            return NotImplemented
        return self.scheme is other.scheme and self.L == other.L

    def __hash__(self):
        return hash((self.scheme, self.L))

    @property
    def phis(self) -> np.ndarray:
        return 2.0 * np.pi * np.arange(self.n_phi) / self.n_phi

    @property
    def sample_shape(self) -> tuple[int, int]:
        return (self.n_theta, self.n_phi)


def _check_band_limit(L) -> int:
    if isinstance(L, bool) or not isinstance(L, (int, np.integer)):
        raise ParameterError(f"band-limit must be a positive integer, got {L!r}")
    if L < 1:
        raise ParameterError(f"band-limit must be >= 1, got {L}")
    return int(L)


def _legendre_pair(n: int, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Legendre polynomial and derivative at interior points, any float dtype."""
    p_prev = np.ones_like(x)
    p = x.copy()
    for k in range(2, n + 1):
        p_prev, p = p, ((2 * k - 1) * x * p - (k - 1) * p_prev) / k
    dp = n * (x * p - p_prev) / (x * x - 1.0)
    return p, dp


def _gl_nodes_weights(L: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights accurate to float64 rounding.

    Library nodes are already at the rounding floor, but their weights lose
    several digits at high order, which would leak straight into every
    quadrature; two extended-precision Newton sweeps restore both.
    """
    x64, w64 = np.polynomial.legendre.leggauss(L)
    if L == 1:
        return x64, w64
    x = x64.astype(np.longdouble)
    for _ in range(2):
        p, dp = _legendre_pair(L, x)
        x = x - p / dp
    _, dp = _legendre_pair(L, x)
    w = 2.0 / ((1.0 - x * x) * dp * dp)
    return x.astype(np.float64), w.astype(np.float64)


@lru_cache(maxsize=None)
def _cached_grid(scheme: SamplingScheme, L: int) -> GridSpec:
    n_phi = 2 * L - 1
    if scheme is SamplingScheme.GL:
        # Nodes ascending in x; reverse so colatitudes run north -> south.
        x, w = _gl_nodes_weights(L)
        theta = np.arccos(x[::-1]).copy()
        weights = w[::-1].copy()
    else:
        t = np.arange(L)
        theta = (2 * t + 1) * np.pi / (2 * L - 1)  # last ring is the south pole
        weights = None
    return GridSpec(scheme, L, L, n_phi, theta, weights)


def make_grid(scheme: SamplingScheme, L: int) -> GridSpec:
    """Build the grid for band-limit ``L``; deterministic and cached."""
    if not isinstance(scheme, SamplingScheme):
        raise ParameterError(f"unknown sampling scheme {scheme!r}")
    return _cached_grid(scheme, _check_band_limit(L))


def distinct_sample_count(grid: GridSpec) -> int:
    """Number of distinct points: the MW pole ring is a single point."""
    if grid.scheme is SamplingScheme.MW:
        return (grid.L - 1) * (2 * grid.L - 1) + 1
    return grid.L * (2 * grid.L - 1)


@dataclass(frozen=True, eq=False)
class SphereMap:
    """Sampled signal: complex values on ``grid``, theta-major row order.

    ``is_real`` asserts that every imaginary part is exactly zero; code that
    produces real maps must construct them through a path that guarantees
    this (e.g. an inverse real FFT), not by rounding.
    """

    grid: GridSpec
    values: np.ndarray
    is_real: bool = False

    def __post_init__(self):
        values = np.ascontiguousarray(self.values, dtype=np.complex128)
        if values.shape != self.grid.sample_shape:
            raise ParameterError(
                f"map shape {values.shape} does not match grid {self.grid.sample_shape}"
            )
        if self.is_real and np.any(values.imag != 0.0):
            raise ParameterError("map flagged real but has nonzero imaginary parts")
        if self.grid.scheme is SamplingScheme.MW:
            pole = values[-1]
            if np.any(pole != pole[0]):
                raise ParameterError("MW pole ring must carry identical values")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def real_values(self) -> np.ndarray:
        return self.values.real


def map_constant(grid: GridSpec, c: complex) -> SphereMap:
    """Map with every sample equal to ``c``."""
    c = complex(c)
    values = np.full(grid.sample_shape, c, dtype=np.complex128)
    return SphereMap(grid, values, is_real=(c.imag == 0.0))
