"""Bit-exact file formats: binary PGM, scaled disparity PGMs, SMAP remap tables.

Gray images travel through the toolkit as 2-D ``uint8`` numpy arrays,
row-major, shape ``(height, width)``.
"""
from __future__ import annotations

import struct
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Mapping

import numpy as np

from .errors import (
    FormatError,
    ParameterError,
    RangeError,
    SizeMismatchError,
    UnsupportedDepthError,
)

SMAP_MAGIC = b"SMAP"
FRACTION_BITS = 5
FIXED_ONE = 1 << FRACTION_BITS


def as_gray(img) -> np.ndarray:
    """Validate and return ``img`` as a contiguous 2-D uint8 array."""
    arr = np.asarray(img)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise FormatError(f"expected a non-empty 2-D gray image, got shape {arr.shape}")
    if arr.dtype != np.uint8:
        if arr.size and (arr.min() < 0 or arr.max() > 255):
            raise RangeError("gray intensities must lie in [0, 255]")
        arr = arr.astype(np.uint8)
    return np.ascontiguousarray(arr)


@dataclass
class DisparityMap:
    """Per-pixel 8-bit disparity plus validity mask."""

    disp: np.ndarray
    valid: np.ndarray

    def __post_init__(self):
        self.disp = np.ascontiguousarray(self.disp, dtype=np.uint8)
        self.valid = np.ascontiguousarray(self.valid, dtype=bool)
        if self.disp.shape != self.valid.shape or self.disp.ndim != 2:
            raise FormatError("disp and valid must be 2-D arrays of equal shape")
        # invalid pixels carry 0
        self.disp[~self.valid] = 0

    @property
    def height(self) -> int:
        return self.disp.shape[0]

    @property
    def width(self) -> int:
        return self.disp.shape[1]

    @classmethod
    def empty(cls, height: int, width: int) -> "DisparityMap":
        return cls(np.zeros((height, width), np.uint8), np.zeros((height, width), bool))

    def __eq__(self, other):
        if not isinstance(other, DisparityMap):
            return NotImplemented
        return np.array_equal(self.disp, other.disp) and np.array_equal(self.valid, other.valid)


@dataclass
class RemapTable:
    """Per-output-pixel source coordinates in unsigned Q11.5 fixed point."""

    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        self.x = np.ascontiguousarray(self.x, dtype=np.uint16)
        self.y = np.ascontiguousarray(self.y, dtype=np.uint16)
        if self.x.shape != self.y.shape or self.x.ndim != 2:
            raise SizeMismatchError("x and y coordinate grids must be 2-D and equal in shape")

    @property
    def height(self) -> int:
        return self.x.shape[0]

    @property
    def width(self) -> int:
        return self.x.shape[1]

    @property
    def coords(self) -> np.ndarray:
        """``(height, width, 2)`` array of raw (x_fixed, y_fixed) pairs."""
        return np.stack([self.x, self.y], axis=-1)

    def real_coords(self) -> tuple[np.ndarray, np.ndarray]:
        return self.x / FIXED_ONE, self.y / FIXED_ONE

    @classmethod
    def identity(cls, height: int, width: int) -> "RemapTable":
        rows, cols = np.mgrid[0:height, 0:width]
        return cls(cols * FIXED_ONE, rows * FIXED_ONE)

    @classmethod
    def from_float(cls, x: np.ndarray, y: np.ndarray) -> "RemapTable":
        """Quantize real-valued maps (e.g. from a calibration tool) to Q11.5."""
        x = np.clip(np.rint(np.asarray(x, float) * FIXED_ONE), 0, 0xFFFF)
        y = np.clip(np.rint(np.asarray(y, float) * FIXED_ONE), 0, 0xFFFF)
        return cls(x, y)

    def __eq__(self, other):
        if not isinstance(other, RemapTable):
            return NotImplemented
        return np.array_equal(self.x, other.x) and np.array_equal(self.y, other.y)


@dataclass
class RunConfig:
    window: int = 7
    disparity_range: int = 92
    p1: int = 10
    p2: int = 120
    cost_cap: int = 255
    sections: int = 5
    gt_scale: int = 4

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
                raise ParameterError(f"{f.name} must be an integer, got {value!r}")
            setattr(self, f.name, int(value))
        if self.window < 3 or self.window % 2 == 0:
            raise ParameterError(f"window must be odd and >= 3, got {self.window}")
        if not 1 <= self.disparity_range <= 256:
            raise ParameterError(f"disparity_range must be in [1, 256], got {self.disparity_range}")
        if self.p1 < 0 or self.p1 >= self.p2:
            raise ParameterError(f"need 0 <= p1 < p2, got p1={self.p1} p2={self.p2}")
        if not 1 <= self.cost_cap <= 255:
            raise ParameterError(f"cost_cap must be in [1, 255], got {self.cost_cap}")
        if self.p2 > self.cost_cap:
            raise ParameterError(f"p2={self.p2} exceeds cost_cap={self.cost_cap}")
        if self.sections < 1:
            raise ParameterError("sections must be positive")
        if self.gt_scale < 1:
            raise ParameterError("gt_scale must be positive")

    @property
    def half_window(self) -> int:
        return self.window // 2

    @classmethod
    def from_mapping(cls, values: Mapping[str, object], base: "RunConfig | None" = None) -> "RunConfig":
        known = {f.name for f in fields(cls)}
        merged = dict(vars(base)) if base is not None else {}
        for key, value in values.items():
            key = key.strip().replace("-", "_")
            if key not in known:
                raise ParameterError(f"unknown config key {key!r}")
            try:
                merged[key] = int(value)
            except (TypeError, ValueError):
                raise ParameterError(f"config key {key!r} needs an integer, got {value!r}") from None
        return cls(**merged)

    @classmethod
    def from_file(cls, path) -> "RunConfig":
        return cls.from_mapping(read_keyvalue(path))


def read_keyvalue(path) -> dict[str, str]:
    """Parse ``key=value`` lines; ``#`` starts a comment."""
    values = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise FormatError(f"{path}:{lineno}: expected key=value, got {line!r}")
        key, value = line.split("=", 1)
        values[key.strip()] = value.strip()
    return values


def _pgm_header_tokens(data: bytes, count: int) -> tuple[list[bytes], int]:
    """Return the first ``count`` whitespace-separated header tokens and the payload offset."""
    tokens = []
    pos = 0
    n = len(data)
    while len(tokens) < count:
        while pos < n and data[pos : pos + 1].isspace():
            pos += 1
        if pos < n and data[pos : pos + 1] == b"#":
            while pos < n and data[pos : pos + 1] not in (b"\n", b"\r"):
                pos += 1
            continue
        if pos >= n:
            raise FormatError("PGM header ended early")
        start = pos
        while pos < n and not data[pos : pos + 1].isspace() and data[pos : pos + 1] != b"#":
            pos += 1
        tokens.append(data[start:pos])
    # exactly one whitespace byte separates maxval from the raster
    if pos >= n or not data[pos : pos + 1].isspace():
        raise FormatError("missing whitespace after PGM maxval")
    return tokens, pos + 1


def decode_pgm(data: bytes) -> np.ndarray:
    if data[:2] != b"P5":
        raise FormatError(f"bad magic {data[:2]!r}: only binary PGM (P5) is supported")
    tokens, offset = _pgm_header_tokens(data, 4)
    magic, *rest = tokens
    if magic != b"P5":
        raise FormatError(f"bad magic token {magic!r}")
    parsed = []
    for name, tok in zip(("width", "height", "maxval"), rest):
        if not tok.isdigit():
            raise FormatError(f"malformed PGM {name} token {tok!r}")
        parsed.append(int(tok))
    width, height, maxval = parsed
    if width < 1 or height < 1:
        raise FormatError(f"malformed PGM dimensions {width}x{height}")
    if maxval > 255:
        raise UnsupportedDepthError(f"maxval {maxval} > 255 is not supported")
    if maxval < 1:
        raise FormatError(f"malformed PGM maxval token {rest[2]!r}")
    payload = data[offset : offset + width * height]
    if len(payload) != width * height:
        raise SizeMismatchError(
            f"PGM payload has {len(payload)} bytes, header declares {width}x{height}"
        )
    return np.frombuffer(payload, np.uint8).reshape(height, width).copy()


def encode_pgm(img) -> bytes:
    img = as_gray(img)
    h, w = img.shape
    return b"P5\n%d %d\n255\n" % (w, h) + img.tobytes()


def read_pgm(path) -> np.ndarray:
    return decode_pgm(Path(path).read_bytes())


def write_pgm(img, path) -> None:
    Path(path).write_bytes(encode_pgm(img))


def encode_remap_table(table: RemapTable) -> bytes:
    head = SMAP_MAGIC + struct.pack("<II", table.width, table.height)
    return head + table.coords.astype("<u2").tobytes()


def decode_remap_table(data: bytes) -> RemapTable:
    if data[:4] != SMAP_MAGIC:
        raise FormatError(f"bad remap magic {data[:4]!r}, expected {SMAP_MAGIC!r}")
    if len(data) < 12:
        raise SizeMismatchError("remap header truncated")
    width, height = struct.unpack_from("<II", data, 4)
    expected = width * height * 4
    body = data[12:]
    if len(body) != expected:
        raise SizeMismatchError(
            f"remap body holds {len(body) // 4} coordinate pairs, "
            f"header declares {width}x{height}={width * height}"
        )
    if width == 0 or height == 0:
        raise FormatError("remap table with zero dimension")
    pairs = np.frombuffer(body, "<u2").reshape(height, width, 2)
    return RemapTable(pairs[..., 0], pairs[..., 1])


def read_remap_table(path) -> RemapTable:
    return decode_remap_table(Path(path).read_bytes())


def write_remap_table(table: RemapTable, path) -> None:
    Path(path).write_bytes(encode_remap_table(table))


def write_disparity(d: DisparityMap, path, scale: int) -> None:
    """Write ``disp * scale`` as a PGM; invalid pixels become 0."""
    if scale < 1:
        raise ParameterError("scale must be positive")
    vmax = int(d.disp[d.valid].max(initial=0))
    if vmax * scale > 255:
        raise RangeError(f"disparity {vmax} * scale {scale} = {vmax * scale} exceeds 255")
    out = np.where(d.valid, d.disp.astype(np.uint16) * scale, 0).astype(np.uint8)
    write_pgm(out, path)


def decode_ground_truth(img: np.ndarray, gt_scale: int) -> DisparityMap:
    if gt_scale < 1:
        raise ParameterError("gt_scale must be positive")
    img = as_gray(img)
    return DisparityMap(img // gt_scale, img != 0)


def read_ground_truth(path, gt_scale: int) -> DisparityMap:
    """Read a scaled disparity PGM; pixel 0 marks unknown disparity."""
    return decode_ground_truth(read_pgm(path), gt_scale)
