import math

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from ssmgm.pixelio import RemapTable
from ssmgm.rectify import remap


def bilinear_float(raw, x, y):
    """Double-precision bilinear sample at real coordinate (x, y)."""
    h, w = raw.shape
    x0, y0 = math.floor(x), math.floor(y)
    ax, ay = x - x0, y - y0
    x1, y1 = min(x0 + 1, w - 1), min(y0 + 1, h - 1)
    top = (1 - ax) * raw[y0, x0] + ax * raw[y0, x1]
    bot = (1 - ax) * raw[y1, x0] + ax * raw[y1, x1]
    return (1 - ay) * float(top) + ay * float(bot)


def in_bounds_table(rng, raw_shape, out_shape):
    h, w = raw_shape
    # keep the 2x2 footprint inside the raw image
    x = rng.integers(0, (w - 1) * 32 + 1, out_shape)
    y = rng.integers(0, (h - 1) * 32 + 1, out_shape)
    return RemapTable(x, y)


@settings(max_examples=60, deadline=None)
@given(st.tuples(st.integers(1, 24), st.integers(1, 24)).flatmap(lambda hw: arrays(np.uint8, hw)))
def test_identity_map_is_exact(img):
    assert np.array_equal(remap(img, RemapTable.identity(*img.shape)), img)


def test_midpoint_between_columns():
    row = np.array([[10, 20, 30, 40]], np.uint8)
    table = RemapTable(np.array([[48]]), np.array([[0]]))  # x = 1.5, y = 0
    # halfway between column 1 (20) and column 2 (30)
    assert remap(row, table)[0, 0] == 25


def test_matches_float_oracle_8x8(rng):
    raw = rng.integers(0, 256, (8, 8), dtype=np.uint8)
    table = in_bounds_table(rng, raw.shape, (8, 8))
    out = remap(raw, table)
    for (i, j), v in np.ndenumerate(out):
        ref = bilinear_float(raw, table.x[i, j] / 32, table.y[i, j] / 32)
        assert abs(int(v) - ref) <= 1


def test_out_of_range_is_black():
    raw = np.full((4, 4), 200, np.uint8)
    table = RemapTable(np.array([[3 * 32 + 1, 5 * 32, 0]]), np.array([[0, 0, 3 * 32 + 16]]))
    assert remap(raw, table).tolist() == [[0, 0, 0]]


def test_last_pixel_with_zero_fraction_is_in_range():
    raw = np.arange(16, dtype=np.uint8).reshape(4, 4)
    table = RemapTable(np.array([[96]]), np.array([[96]]))
    assert remap(raw, table)[0, 0] == 15


def test_output_shape_follows_table(rng):
    raw = rng.integers(0, 256, (10, 12), dtype=np.uint8)
    table = in_bounds_table(rng, raw.shape, (5, 7))
    assert remap(raw, table).shape == (5, 7)


def test_convex_combination_bounds(rng):
    raw = rng.integers(0, 256, (20, 20), dtype=np.uint8)
    table = in_bounds_table(rng, raw.shape, (30, 30))
    out = remap(raw, table).astype(int)
    x0, y0 = table.x >> 5, table.y >> 5
    x1, y1 = np.minimum(x0 + 1, 19), np.minimum(y0 + 1, 19)
    quad = np.stack([raw[y0, x0], raw[y0, x1], raw[y1, x0], raw[y1, x1]]).astype(int)
    assert np.all(out >= quad.min(axis=0)) and np.all(out <= quad.max(axis=0))
