"""Fixed-point bilinear remap of a raw frame through a Q11.5 coordinate table."""
from __future__ import annotations

import numpy as np

from .pixelio import FRACTION_BITS, RemapTable, as_gray

_FRAC_MASK = (1 << FRACTION_BITS) - 1
# two 5-bit weights multiply to a 10-bit scale
_BLEND_SHIFT = 2 * FRACTION_BITS
_BLEND_HALF = 1 << (_BLEND_SHIFT - 1)


def remap(raw, table: RemapTable) -> np.ndarray:
    """Build the rectified image by sampling ``raw`` at each table coordinate.

    Each output pixel blends the four raw neighbours of its source coordinate
    with integer weights ``(32 - fx) * (32 - fy)`` etc., then rounds to nearest
    via ``+512 >> 10``.  A coordinate whose neighbourhood leaves the raw image
    yields 0; a zero fractional part does not need the next row/column.
    """
    raw = as_gray(raw)
    h, w = raw.shape
    xf = table.x.astype(np.int64)
    yf = table.y.astype(np.int64)
    x0 = xf >> FRACTION_BITS
    y0 = yf >> FRACTION_BITS
    fx = xf & _FRAC_MASK
    fy = yf & _FRAC_MASK

    inside = (x0 < w) & (y0 < h)
    inside &= (fx == 0) | (x0 + 1 < w)
    inside &= (fy == 0) | (y0 + 1 < h)

    # x1/y1 only matter when their weight is nonzero, which implies in-bounds
    x0c = np.minimum(x0, w - 1)
    y0c = np.minimum(y0, h - 1)
    x1c = np.minimum(x0c + 1, w - 1)
    y1c = np.minimum(y0c + 1, h - 1)

    src = raw.astype(np.int64)
    tl = src[y0c, x0c]
    tr = src[y0c, x1c]
    bl = src[y1c, x0c]
    br = src[y1c, x1c]
    one = 1 << FRACTION_BITS
    acc = (
        tl * (one - fx) * (one - fy)
        + tr * fx * (one - fy)
        + bl * (one - fx) * fy
        + br * fx * fy
    )
    out = (acc + _BLEND_HALF) >> _BLEND_SHIFT
    return np.where(inside, out, 0).astype(np.uint8)
