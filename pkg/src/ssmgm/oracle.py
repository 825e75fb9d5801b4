"""Reference matchers that materialise the full cost volume.

These trade memory and speed for directness and serve as test oracles and
quality baselines for the streaming engine:

* :func:`mgm_full` - the same grouped four-path recursion, evaluated over a
  full ``(H, W, D)`` volume of aggregated costs.
* :func:`sgm_paths` - classical SGM, one independent recursion per path,
  summed at the end (4 causal paths, or 8 with a reverse pass).
* :func:`census_wta` - argmin of the raw census costs.
"""
from __future__ import annotations

import numpy as np

from .census import census_transform, cost_volume
from .errors import DimensionError, ParameterError
from .pixelio import DisparityMap, RunConfig, as_gray

# (dy, dx) of the neighbour a path comes from
CAUSAL_PATHS = [(0, -1), (-1, -1), (-1, 0), (-1, 1)]
ALL_PATHS = CAUSAL_PATHS + [(0, 1), (1, 1), (1, 0), (1, -1)]


def _prepare(left, right, cfg: RunConfig):
    left = as_gray(left)
    right = as_gray(right)
    if left.shape != right.shape:
        raise DimensionError(f"left {left.shape} and right {right.shape} differ in shape")
    if min(left.shape) < cfg.window:
        raise DimensionError(f"image {left.shape} smaller than census window {cfg.window}")
    cl = census_transform(left, cfg.window)
    cr = census_transform(right, cfg.window)
    return cost_volume(cl, cr, cfg.disparity_range, cfg.cost_cap), cl.valid_mask()


def _crop(vol, h):
    return vol[h : vol.shape[0] - h, h : vol.shape[1] - h]


def _to_map(shape, h, inner_disp) -> DisparityMap:
    disp = np.zeros(shape, np.uint8)
    valid = np.zeros(shape, bool)
    disp[h : shape[0] - h, h : shape[1] - h] = inner_disp
    valid[h : shape[0] - h, h : shape[1] - h] = True
    return DisparityMap(disp, valid)


def transition(prev: np.ndarray, p1: int, p2: int) -> np.ndarray:
    """Vectorised smoothing term: min over the four transitions, minus the minimum.

    ``prev`` has disparity on the last axis; the result has the same shape.
    """
    prev = prev.astype(np.int64)
    pmin = prev.min(axis=-1, keepdims=True)
    best = prev.copy()
    np.minimum(best[..., 1:], prev[..., :-1] + p1, out=best[..., 1:])
    np.minimum(best[..., :-1], prev[..., 1:] + p1, out=best[..., :-1])
    np.minimum(best, pmin + p2, out=best)
    return best - pmin


def mgm_costs(raw: np.ndarray, p1: int, p2: int, cap: int, init: int | None = None) -> np.ndarray:
    """Grouped four-path recursion over a raw volume of census-valid pixels.

    Pixels are visited in anti-diagonal fronts ``t = 2*r + c``: every causal
    neighbour of (r, c) lies on an earlier front, so a whole front is
    independent and can be computed at once.
    """
    rows, cols, D = raw.shape
    init = cap if init is None else init
    # one ring of "outside" pixels on top, left and right
    L = np.full((rows + 1, cols + 2, D), init, np.int64)
    raw = raw.astype(np.int64)
    for t in range(2 * (rows - 1) + cols):
        r = np.arange(max(0, (t - cols + 2) // 2), min(rows - 1, t // 2) + 1)
        c = t - 2 * r
        keep = (c >= 0) & (c < cols)
        r, c = r[keep], c[keep]
        if r.size == 0:
            continue
        pr, pc = r + 1, c + 1
        s = (transition(L[pr - 1, pc - 1], p1, p2) + transition(L[pr - 1, pc], p1, p2)
             + transition(L[pr - 1, pc + 1], p1, p2) + transition(L[pr, pc - 1], p1, p2))
        L[pr, pc] = np.minimum(raw[r, c] + (s >> 2), cap)
    return L[1:, 1:-1]


def mgm_full(left, right, cfg: RunConfig | None = None, *, init_value: int | None = None):
    """Full-volume grouped MGM; returns ``(DisparityMap, costs)``.

    ``costs`` is the (H, W, D) volume of aggregated costs, 0 on border pixels.
    """
    cfg = cfg or RunConfig()
    raw, _ = _prepare(left, right, cfg)
    h = cfg.half_window
    inner = mgm_costs(_crop(raw, h), cfg.p1, cfg.p2, cfg.cost_cap, init_value)
    full = np.zeros(raw.shape, np.int64)
    full[h : raw.shape[0] - h, h : raw.shape[1] - h] = inner
    # np.argmin returns the first minimum: lowest-index tie-break
    return _to_map(raw.shape[:2], h, inner.argmin(axis=-1)), full


def path_costs(raw: np.ndarray, direction: tuple[int, int], p1: int, p2: int) -> np.ndarray:
    """Classical per-path SGM recursion ``L_r`` along ``direction``.

    ``direction`` is the (dy, dx) offset of the predecessor.  A pixel whose
    predecessor is outside ``raw`` starts the path with its raw cost.
    """
    rows, cols, D = raw.shape
    dy, dx = direction
    raw = raw.astype(np.int64)
    L = np.empty_like(raw)
    if dy == 0:
        order = range(cols) if dx < 0 else range(cols - 1, -1, -1)
        for c in order:
            pc = c + dx
            if 0 <= pc < cols:
                L[:, c] = raw[:, c] + transition(L[:, pc], p1, p2)
            else:
                L[:, c] = raw[:, c]
        return L
    order = range(rows) if dy < 0 else range(rows - 1, -1, -1)
    for r in order:
        pr = r + dy
        if not 0 <= pr < rows:
            L[r] = raw[r]
            continue
        L[r] = raw[r]
        c_lo, c_hi = max(0, -dx), min(cols, cols - dx)
        L[r, c_lo:c_hi] += transition(L[pr, c_lo + dx : c_hi + dx], p1, p2)
    return L


def sgm_paths(left, right, cfg: RunConfig | None = None, paths: int = 8,
              *, raw: np.ndarray | None = None) -> DisparityMap:
    """Classical SGM with separate path recursions summed before the argmin.

    ``paths=4`` uses the causal directions (left, top-left, top, top-right);
    ``paths=8`` adds their reverses.  ``raw`` may inject a precomputed raw
    cost volume over the full frame.
    """
    cfg = cfg or RunConfig()
    if paths not in (4, 8):
        raise ParameterError(f"paths must be 4 or 8, got {paths}")
    if raw is None:
        raw, _ = _prepare(left, right, cfg)
    h = cfg.half_window
    inner = _crop(raw, h)
    total = np.zeros(inner.shape, np.int64)
    for direction in (CAUSAL_PATHS if paths == 4 else ALL_PATHS):
        total += path_costs(inner, direction, cfg.p1, cfg.p2)
    return _to_map(raw.shape[:2], h, total.argmin(axis=-1))


def census_wta(left, right, cfg: RunConfig | None = None) -> DisparityMap:
    cfg = cfg or RunConfig()
    raw, _ = _prepare(left, right, cfg)
    h = cfg.half_window
    return _to_map(raw.shape[:2], h, _crop(raw, h).argmin(axis=-1))
