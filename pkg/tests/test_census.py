import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ssmgm.census import census_transform, cost_vector, cost_volume
from ssmgm.errors import ParameterError


def naive_descriptor(img, r, c, window):
    """Descriptor of pixel (r, c) built one comparison at a time."""
    h = window // 2
    bits = []
    for dy in range(-h, h + 1):
        for dx in range(-h, h + 1):
            if dy == 0 and dx == 0:
                continue
            bits.append(1 if int(img[r + dy, c + dx]) < int(img[r, c]) else 0)
    return sum(b << k for k, b in enumerate(bits))


def naive_costs(left, right, r, c, D, window, cap=255):
    """Re-derive every matching cost from raw pixel windows."""
    h = window // 2
    out = []
    for d in range(D):
        if c - d < h:
            out.append(cap)
            continue
        a = naive_descriptor(left, r, c, window)
        b = naive_descriptor(right, r, c - d, window)
        out.append(bin(a ^ b).count("1"))
    return out


def test_constant_image_has_zero_descriptors():
    assert not census_transform(np.full((9, 9), 77, np.uint8)).desc.any()


def test_bright_centre_sets_all_48_bits():
    img = np.zeros((7, 7), np.uint8)
    img[3, 3] = 255
    assert int(census_transform(img).desc[3, 3]) == (1 << 48) - 1


def test_random_9x9_against_naive(rng):
    img = rng.integers(0, 256, (9, 9), dtype=np.uint8)
    cf = census_transform(img, 7)
    for r in range(3, 6):
        for c in range(3, 6):
            assert int(cf.desc[r, c]) == naive_descriptor(img, r, c, 7)


@pytest.mark.parametrize("window", [3, 5, 7])
def test_border_zero_and_high_bits_clear(rng, window):
    img = rng.integers(0, 256, (15, 17), dtype=np.uint8)
    cf = census_transform(img, window)
    assert not cf.desc[~cf.valid_mask()].any()
    assert np.all(cf.desc >> np.uint64(window * window - 1) == 0)


def test_window_above_seven_rejected():
    with pytest.raises(ParameterError):
        census_transform(np.zeros((20, 20), np.uint8), 9)


def test_self_match_costs_zero(rng):
    img = rng.integers(0, 256, (12, 12), dtype=np.uint8)
    cf = census_transform(img)
    v = cost_vector(cf, cf, 5, 8, 4)
    assert v.costs[0] == 0 and v.costs.min() == 0


def test_five_bit_difference():
    left = census_transform(np.zeros((7, 20), np.uint8))
    right = census_transform(np.zeros((7, 20), np.uint8))
    left.desc[3, 10] = np.uint64(0b1011)
    right.desc[3, 7] = np.uint64(0b110000)
    assert cost_vector(left, right, 3, 10, 6).costs[3] == 5


def test_random_16x16_against_naive(rng):
    left = rng.integers(0, 256, (16, 16), dtype=np.uint8)
    right = rng.integers(0, 256, (16, 16), dtype=np.uint8)
    cl, cr = census_transform(left), census_transform(right)
    vol = cost_volume(cl, cr, 8)
    for r in range(3, 13):
        for c in range(3, 13):
            expect = naive_costs(left, right, r, c, 8, 7)
            v = cost_vector(cl, cr, r, c, 8)
            assert v.costs.tolist() == expect
            assert vol[r, c].tolist() == expect
            assert v.valid_range == min(8, c - 3 + 1)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(-60, 60))
def test_offset_invariance(seed, offset):
    rng = np.random.default_rng(seed)
    left = rng.integers(60, 196, (14, 18)).astype(np.uint8)
    right = rng.integers(60, 196, (14, 18)).astype(np.uint8)
    base = cost_volume(census_transform(left), census_transform(right), 10)
    shifted = cost_volume(census_transform((left.astype(int) + offset).astype(np.uint8)),
                          census_transform((right.astype(int) + offset).astype(np.uint8)), 10)
    assert np.array_equal(base, shifted)


def test_costs_bounded_by_48(rng):
    left = rng.integers(0, 256, (30, 40), dtype=np.uint8)
    right = rng.integers(0, 256, (30, 40), dtype=np.uint8)
    vol = cost_volume(census_transform(left), census_transform(right), 16)
    assert vol[vol != 255].max() <= 48
