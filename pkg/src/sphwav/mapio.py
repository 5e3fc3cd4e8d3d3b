"""Bit-exact binary serialization of sphere maps and harmonic coefficients.

S2WM layout, all integers little-endian:

    offset  size  field
    0       4     magic "S2WM"
    4       4     version (u32) = 1
    8       1     scheme (u8): 0 = GL, 1 = MW
    9       4     band-limit L (u32)
    13      1     kind (u8): 0 = real map, 1 = complex map, 2 = harmonic coeffs
    14      8     payload_count (u64): samples (maps) or L^2 (coeffs)

followed by payload_count little-endian float64 values for real maps, or
payload_count (re, im) float64 pairs for complex payloads.  Maps are
theta-major.  Writing the same value twice yields byte-identical files.
"""
from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .errors import FormatError, ParameterError
from .grid import SamplingScheme, SphereMap, make_grid
from .sht import HarmonicCoeffs

__all__ = [
    "MAGIC",
    "VERSION",
    "HEADER_SIZE",
    "NotS2wmFileError",
    "UnsupportedVersionError",
    "TruncatedFileError",
    "PayloadMismatchError",
    "write_map",
    "read_map",
    "write_flm",
    "read_flm",
]

MAGIC = b"S2WM"
VERSION = 1
_HEADER_FMT = "<4sIBIBQ"
HEADER_SIZE = struct.calcsize(_HEADER_FMT)  # 22 bytes

_KIND_REAL_MAP = 0
_KIND_COMPLEX_MAP = 1
_KIND_COEFFS = 2

_SCHEME_CODE = {SamplingScheme.GL: 0, SamplingScheme.MW: 1}
_CODE_SCHEME = {v: k for k, v in _SCHEME_CODE.items()}


class NotS2wmFileError(FormatError):
    pass


class UnsupportedVersionError(FormatError):
    pass


class TruncatedFileError(FormatError):
    pass


class PayloadMismatchError(FormatError):
    pass


def _pack_header(scheme_code: int, L: int, kind: int, count: int) -> bytes:
    return struct.pack(_HEADER_FMT, MAGIC, VERSION, scheme_code, L, kind, count)


def _write(path, header: bytes, payload: np.ndarray) -> None:
    try:
        with open(path, "wb") as fh:
            fh.write(header)
            fh.write(payload.tobytes())
    except OSError as exc:
        raise OSError(f"writing {path}: {exc}") from exc


def write_map(path, smap: SphereMap) -> None:
    """Serialize a map; real maps store one float per sample."""
    count = smap.grid.n_theta * smap.grid.n_phi
    if count < 1:
        raise ParameterError("refusing to write an empty map")
    kind = _KIND_REAL_MAP if smap.is_real else _KIND_COMPLEX_MAP
    header = _pack_header(_SCHEME_CODE[smap.grid.scheme], smap.grid.L, kind, count)
    if smap.is_real:
        payload = np.ascontiguousarray(smap.values.real, dtype="<f8")
    else:
        payload = np.ascontiguousarray(smap.values, dtype="<c16")
    _write(path, header, payload)


def write_flm(path, flm: HarmonicCoeffs) -> None:
    """Serialize a harmonic coefficient set (always complex payload)."""
    header = _pack_header(0, flm.L, _KIND_COEFFS, flm.L * flm.L)
    _write(path, header, np.ascontiguousarray(flm.coeffs, dtype="<c16"))


def _read_header(path) -> tuple[int, int, int, int, bytes]:
    data = Path(path).read_bytes()
    if len(data) < HEADER_SIZE:
        raise TruncatedFileError(f"{path}: shorter than the {HEADER_SIZE}-byte header")
    magic, version, scheme_code, L, kind, count = struct.unpack_from(_HEADER_FMT, data)
    if magic != MAGIC:
        raise NotS2wmFileError(f"{path}: not an S2WM file (magic {magic!r})")
    if version != VERSION:
        raise UnsupportedVersionError(f"{path}: unsupported version {version}")
    return scheme_code, L, kind, count, data[HEADER_SIZE:]


def _payload_values(path, body: bytes, count: int, real: bool) -> np.ndarray:
    itemsize = 8 if real else 16
    expected = count * itemsize
    if len(body) != expected:
        raise TruncatedFileError(
            f"{path}: payload holds {len(body)} bytes, expected {expected}"
        )
    dtype = "<f8" if real else "<c16"
    return np.frombuffer(body, dtype=dtype).astype(np.complex128)


def read_map(path) -> SphereMap:
    """Re-read a map, rebuilding its grid from the header."""
    scheme_code, L, kind, count, body = _read_header(path)
    if kind not in (_KIND_REAL_MAP, _KIND_COMPLEX_MAP):
        raise PayloadMismatchError(f"{path}: kind {kind} is not a map")
    if scheme_code not in _CODE_SCHEME:
        raise PayloadMismatchError(f"{path}: unknown sampling scheme code {scheme_code}")
    if L < 1:
        raise PayloadMismatchError(f"{path}: invalid band-limit {L}")
    grid = make_grid(_CODE_SCHEME[scheme_code], L)
    expected = grid.n_theta * grid.n_phi
    if count != expected:
        raise PayloadMismatchError(
            f"{path}: payload_count {count} does not match grid ({expected} samples)"
        )
    values = _payload_values(path, body, count, real=(kind == _KIND_REAL_MAP))
    try:
        return SphereMap(
            grid, values.reshape(grid.sample_shape), is_real=(kind == _KIND_REAL_MAP)
        )
    except ParameterError as exc:
        raise PayloadMismatchError(f"{path}: invalid payload ({exc})") from exc


def read_flm(path) -> HarmonicCoeffs:
    """Re-read a coefficient set.

    The on-disk format does not record the real-signal property, so the
    result is returned unflagged; re-flag after checking symmetry if needed.
    """
    _, L, kind, count, body = _read_header(path)
    if kind != _KIND_COEFFS:
        raise PayloadMismatchError(f"{path}: kind {kind} is not a coefficient set")
    if L < 1 or count != L * L:
        raise PayloadMismatchError(
            f"{path}: payload_count {count} does not match band-limit {L}"
        )
    values = _payload_values(path, body, count, real=False)
    return HarmonicCoeffs(L, values, real_signal=False)
