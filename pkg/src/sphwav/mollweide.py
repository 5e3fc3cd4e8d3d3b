"""Mollweide-projection rendering of real maps to binary PPM rasters.

Pixels are mapped through the inverse projection to (colatitude,
longitude) and sample the map at the nearest grid node; no interpolation,
so the raster shows exact data values.  Longitude 0 sits at the image
centre and increases to the right; pixels outside the projection ellipse
take the background colour.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError
from .grid import SphereMap

__all__ = [
    "RenderOptions",
    "RasterImage",
    "latitude_parameter",
    "render_mollweide",
    "project_point",
    "write_image",
]

_SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class RenderOptions:
    width: int = 400
    colormap: str = "grayscale"
    value_range: tuple[float, float] | None = None
    background: tuple[int, int, int] = (255, 255, 255)

    def __post_init__(self):
        if self.width < 16:
            raise ParameterError(f"width must be >= 16, got {self.width}")
        if self.colormap not in ("grayscale", "diverging"):
            raise ParameterError(f"unknown colormap {self.colormap!r}")

    @property
    def height(self) -> int:
        return (self.width + 1) // 2


@dataclass(frozen=True, eq=False)
class RasterImage:
    width: int
    height: int
    pixels: np.ndarray  # (height, width, 3) uint8

    def __post_init__(self):
        if self.pixels.shape != (self.height, self.width, 3):
            raise ParameterError("pixel buffer shape does not match image size")
        self.pixels.setflags(write=False)


def latitude_parameter(lat: float, tol: float = 1e-10, max_iter: int = 50) -> float:
    """Solve 2a + sin(2a) = pi*sin(lat) for the projection parameter a.

    Newton iteration; the poles are returned in closed form (+-pi/2) where
    the derivative vanishes.
    """
    if not -math.pi / 2 <= lat <= math.pi / 2:
        raise ParameterError(f"latitude must lie in [-pi/2, pi/2], got {lat}")
    if math.pi / 2 - abs(lat) < 1e-12:
        return math.copysign(math.pi / 2, lat)
    target = math.pi * math.sin(lat)
    alpha = lat
    for _ in range(max_iter):
        f = 2.0 * alpha + math.sin(2.0 * alpha) - target
        fp = 2.0 + 2.0 * math.cos(2.0 * alpha)
        step = f / fp
        alpha -= step
        if abs(step) <= tol:
            return alpha
    return alpha


def project_point(theta: float, phi: float) -> tuple[float, float]:
    """Forward projection of (colatitude, longitude) to ellipse coordinates.

    Returns (x, y) with x in [-2*sqrt(2), 2*sqrt(2)] and y in
    [-sqrt(2), sqrt(2)]; uses the Newton solver for the parametric latitude.
    """
    lat = math.pi / 2 - theta
    lon = math.remainder(phi, 2.0 * math.pi)  # east-positive, centred on 0
    alpha = latitude_parameter(lat)
    x = 2.0 * _SQRT2 / math.pi * lon * math.cos(alpha)
    y = _SQRT2 * math.sin(alpha)
    return x, y


def _normalize(values: np.ndarray, value_range) -> np.ndarray:
    if value_range is None:
        vmin, vmax = float(values.min()), float(values.max())
    else:
        vmin, vmax = map(float, value_range)
    if vmax <= vmin:
        return np.full(values.shape, 0.5)
    return np.clip((values - vmin) / (vmax - vmin), 0.0, 1.0)


def _apply_colormap(v: np.ndarray, name: str) -> np.ndarray:
    if name == "grayscale":
        g = np.rint(255.0 * v).astype(np.uint8)
        return np.stack([g, g, g], axis=-1)
    # diverging: cool -> white -> warm
    lo = np.array([59.0, 76.0, 192.0])
    mid = np.array([247.0, 247.0, 247.0])
    hi = np.array([180.0, 4.0, 38.0])
    t = v[..., None]
    cold = lo + (mid - lo) * np.clip(t, 0.0, 0.5) * 2.0
    warm = mid + (hi - mid) * (np.clip(t, 0.5, 1.0) - 0.5) * 2.0
    rgb = np.where(t < 0.5, cold, warm)
    return np.rint(rgb).astype(np.uint8)


def render_mollweide(smap: SphereMap, opts: RenderOptions) -> RasterImage:
    """Deterministic raster of a real map; complex maps are rejected."""
    if not smap.is_real:
        raise ParameterError("rendering requires a real map")
    w, h = opts.width, opts.height
    grid = smap.grid

    cols = (np.arange(w) + 0.5) / w  # pixel centres
    rows = (np.arange(h) + 0.5) / h
    x = 4.0 * _SQRT2 * (cols - 0.5)[None, :]
    y = 2.0 * _SQRT2 * (0.5 - rows)[:, None]  # north up

    sin_alpha = np.clip(y / _SQRT2, -1.0, 1.0)
    alpha = np.arcsin(sin_alpha)
    cos_alpha = np.cos(alpha)
    inside = (x / (2.0 * _SQRT2)) ** 2 + (y / _SQRT2) ** 2 <= 1.0
    inside = inside & np.ones_like(alpha, dtype=bool)

    lat = np.arcsin(np.clip((2.0 * alpha + np.sin(2.0 * alpha)) / np.pi, -1.0, 1.0))
    with np.errstate(divide="ignore", invalid="ignore"):
        lon = np.pi * x / (2.0 * _SQRT2 * cos_alpha)
    lon = np.where(cos_alpha > 0.0, lon, 0.0)
    theta = np.pi / 2.0 - lat
    phi = np.mod(lon, 2.0 * np.pi)

    # Nearest ring, then nearest longitude sample on that ring.
    mids = 0.5 * (grid.theta_nodes[1:] + grid.theta_nodes[:-1])
    t_idx = np.searchsorted(mids, theta)
    p_idx = np.mod(np.rint(phi / (2.0 * np.pi / grid.n_phi)).astype(np.int64), grid.n_phi)

    sampled = smap.values.real[t_idx, p_idx]
    shade = _apply_colormap(_normalize(sampled, opts.value_range), opts.colormap)
    background = np.array(opts.background, dtype=np.uint8)
    pixels = np.where(inside[..., None], shade, background[None, None, :])
    return RasterImage(w, h, np.ascontiguousarray(pixels, dtype=np.uint8))


def write_image(path, image: RasterImage) -> None:
    """Write a binary PPM (P6, 8-bit channels); byte layout is fixed."""
    if image.width < 1 or image.height < 1:
        raise ParameterError("refusing to write an empty image")
    header = f"P6\n{image.width} {image.height}\n255\n".encode("ascii")
    try:
        with open(path, "wb") as fh:
            fh.write(header)
            fh.write(image.pixels.tobytes())
    except OSError as exc:
        raise OSError(f"writing {path}: {exc}") from exc
