"""Census transform and Hamming matching costs."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, ParameterError
from .pixelio import as_gray

MAX_WINDOW = 7  # 7*7 - 1 = 48 bits; 9*9 - 1 = 80 does not fit a 64-bit word


@dataclass
class CensusField:
    """Census descriptors, one 64-bit word per pixel; border words are 0."""

    desc: np.ndarray
    window: int

    @property
    def height(self) -> int:
        return self.desc.shape[0]

    @property
    def width(self) -> int:
        return self.desc.shape[1]

    @property
    def half(self) -> int:
        return self.window // 2

    @property
    def bits(self) -> int:
        return self.window * self.window - 1

    def valid_mask(self) -> np.ndarray:
        m = np.zeros(self.desc.shape, bool)
        h = self.half
        m[h : self.height - h, h : self.width - h] = True
        return m


@dataclass
class CostRowVector:
    costs: np.ndarray
    valid_range: int


def window_offsets(window: int) -> list[tuple[int, int]]:
    """Neighbour offsets (dy, dx) in row-major window order, centre skipped.

    Position k in this list is bit k of the descriptor.
    """
    h = window // 2
    return [(dy, dx) for dy in range(-h, h + 1) for dx in range(-h, h + 1) if (dy, dx) != (0, 0)]


def census_transform(img, window: int = 7) -> CensusField:
    """Bit k is set iff the k-th window neighbour is strictly darker than the centre."""
    if window % 2 == 0 or window < 3:
        raise ParameterError(f"census window must be odd and >= 3, got {window}")
    if window > MAX_WINDOW:
        raise ParameterError(f"census window {window} > {MAX_WINDOW}: descriptor would exceed 64 bits")
    img = as_gray(img)
    rows, cols = img.shape
    if rows < window or cols < window:
        raise DimensionError(f"image {cols}x{rows} smaller than census window {window}")
    h = window // 2
    centre = img[h : rows - h, h : cols - h]
    inner = np.zeros(centre.shape, np.uint64)
    for k, (dy, dx) in enumerate(window_offsets(window)):
        neigh = img[h + dy : rows - h + dy, h + dx : cols - h + dx]
        inner |= (neigh < centre).astype(np.uint64) << np.uint64(k)
    desc = np.zeros((rows, cols), np.uint64)
    desc[h : rows - h, h : cols - h] = inner
    return CensusField(desc, window)


def hamming(a, b) -> np.ndarray:
    return np.bitwise_count(np.bitwise_xor(a, b))


def cost_vector(left: CensusField, right: CensusField, row: int, col: int, D: int,
                cap: int = 255) -> CostRowVector:
    """Matching costs of left pixel (row, col) against right pixels (row, col - d)."""
    h = left.half
    valid_range = max(0, min(D, col - h + 1))
    costs = np.full(D, cap, np.uint8)
    d = np.arange(valid_range)
    costs[:valid_range] = hamming(left.desc[row, col], right.desc[row, col - d])
    return CostRowVector(costs, valid_range)


def cost_volume(left: CensusField, right: CensusField, D: int, cap: int = 255) -> np.ndarray:
    """``(H, W, D)`` uint8 raw cost volume.

    Disparities reaching past the right image's valid columns, and every
    entry of a border pixel, hold ``cap``.
    """
    if left.desc.shape != right.desc.shape:
        raise DimensionError("census fields differ in shape")
    rows, cols = left.desc.shape
    h = left.half
    vol = np.full((rows, cols, D), cap, np.uint8)
    for d in range(D):
        c0 = h + d
        if c0 > cols - h - 1:
            break
        vol[h : rows - h, c0 : cols - h, d] = hamming(
            left.desc[h : rows - h, c0 : cols - h],
            right.desc[h : rows - h, c0 - d : cols - h - d],
        )
    return vol
