"""Single-storage MGM aggregation over one group of four causal paths.

The frame is scanned in row-major order.  Each pixel reads the aggregated
costs of its top-left, top and top-right neighbours from ``cost_row`` (one
vector per column of the previous row) and of its left neighbour from
``cost_left``.  Only ``width * D`` bytes of aggregated cost are alive at any
time, plus one vector for the left neighbour and the cached minima.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from .census import CensusField, CostRowVector, census_transform
from .errors import DimensionError, ParameterError
from .pixelio import DisparityMap, RunConfig, as_gray

_M1 = np.uint64(0x5555555555555555)
_M2 = np.uint64(0x3333333333333333)
_M4 = np.uint64(0x0F0F0F0F0F0F0F0F)
_H01 = np.uint64(0x0101010101010101)


@dataclass(frozen=True)
class PenaltyParams:
    p1: int = 10
    p2: int = 120
    cost_cap: int = 255

    def __post_init__(self):
        if not 0 <= self.p1 < self.p2 <= self.cost_cap <= 255:
            raise ParameterError(
                f"need 0 <= p1 < p2 <= cost_cap <= 255, got {self.p1}, {self.p2}, {self.cost_cap}"
            )

    @classmethod
    def from_config(cls, cfg: RunConfig) -> "PenaltyParams":
        return cls(cfg.p1, cfg.p2, cfg.cost_cap)


@dataclass
class AggState:
    """Rolling buffers of the streaming engine."""

    cost_row: np.ndarray   # (width, D) uint8, previous row, one path group
    cost_left: np.ndarray  # (D,) uint8
    min_row: np.ndarray    # (width,) uint8
    _min_left: np.ndarray  # (1,) uint8 so compiled code can update it in place

    @classmethod
    def fresh(cls, width: int, D: int, init: int = 255) -> "AggState":
        return cls(
            np.full((width, D), init, np.uint8),
            np.full(D, init, np.uint8),
            np.full(width, init, np.uint8),
            np.full(1, init, np.uint8),
        )

    @property
    def min_left(self) -> int:
        return int(self._min_left[0])

    @min_left.setter
    def min_left(self, value: int):
        self._min_left[0] = value

    @property
    def storage_bytes(self) -> int:
        """Bytes of aggregated-cost storage for the row buffer."""
        return self.cost_row.nbytes

    def reset(self, init: int = 255) -> None:
        self.cost_row.fill(init)
        self.min_row.fill(init)
        self.reset_left(init)

    def reset_left(self, init: int = 255) -> None:
        self.cost_left.fill(init)
        self._min_left[0] = init


@njit(cache=True, nogil=True)
def _popcount64(x):
    x = x - ((x >> np.uint64(1)) & _M1)
    x = (x & _M2) + ((x >> np.uint64(2)) & _M2)
    x = (x + (x >> np.uint64(4))) & _M4
    return (x * _H01) >> np.uint64(56)


@njit(cache=True, nogil=True)
def _smooth(neigh, nmin, d, p1, p2):
    D = neigh.shape[0]
    m = np.int64(nmin)
    best = np.int64(neigh[d])
    if d > 0:
        v = np.int64(neigh[d - 1]) + p1
        if v < best:
            best = v
    if d < D - 1:
        v = np.int64(neigh[d + 1]) + p1
        if v < best:
            best = v
    v = m + p2
    if v < best:
        best = v
    return best - m


@njit(cache=True, nogil=True)
def _add_smooth(neigh, nmin, p1, p2, acc):
    # acc[d] += _smooth(neigh, nmin, d, p1, p2) for every d
    D = neigh.shape[0]
    m = np.int64(nmin)
    jump = m + p2
    for d in range(D):
        best = np.int64(neigh[d])
        if d > 0:
            v = np.int64(neigh[d - 1]) + p1
            if v < best:
                best = v
        if d < D - 1:
            v = np.int64(neigh[d + 1]) + p1
            if v < best:
                best = v
        if jump < best:
            best = jump
        acc[d] += best - m


@njit(cache=True, nogil=True)
def _aggregate(raw, cost_row, min_row, cost_left, min_left, col, p1, p2, cap, out, acc):
    D = raw.shape[0]
    acc[:] = 0
    _add_smooth(cost_row[col - 1], min_row[col - 1], p1, p2, acc)
    _add_smooth(cost_row[col], min_row[col], p1, p2, acc)
    _add_smooth(cost_row[col + 1], min_row[col + 1], p1, p2, acc)
    _add_smooth(cost_left, min_left[0], p1, p2, acc)
    best = np.int64(1 << 30)
    arg = 0
    for d in range(D):
        v = np.int64(raw[d]) + (acc[d] >> 2)
        if v > cap:
            v = cap
        out[d] = v
        if v < best:
            best = v
            arg = d
    return arg, best


@njit(cache=True, nogil=True)
def _update(cost_row, min_row, cost_left, min_left, col, new_costs, new_min):
    cost_row[col - 1, :] = cost_left
    min_row[col - 1] = min_left[0]
    cost_left[:] = new_costs
    min_left[0] = new_min


@njit(cache=True, nogil=True)
def _raw_costs(dl, dr, row, col, half, cap, out):
    D = out.shape[0]
    reach = col - half + 1
    a = dl[row, col]
    for d in range(D):
        if d < reach:
            out[d] = _popcount64(a ^ dr[row, col - d])
        else:
            out[d] = cap


@njit(cache=True, nogil=True)
def _scan(dl, dr, half, p1, p2, cap, init, cost_row, min_row, cost_left, min_left,
          disp, valid, capture, costs_out):
    H, W = dl.shape
    D = cost_left.shape[0]
    raw = np.empty(D, np.uint8)
    new = np.empty(D, np.uint8)
    acc = np.empty(D, np.int64)
    cost_row[:, :] = init
    min_row[:] = init
    last = W - half - 1
    for r in range(half, H - half):
        # left neighbour of the first valid column lies outside the image
        cost_left[:] = init
        min_left[0] = init
        for c in range(half, W - half):
            _raw_costs(dl, dr, r, c, half, cap, raw)
            arg, m = _aggregate(raw, cost_row, min_row, cost_left, min_left, c, p1, p2, cap, new, acc)
            disp[r, c] = arg
            valid[r, c] = True
            if capture:
                costs_out[r, c, :] = new
            _update(cost_row, min_row, cost_left, min_left, c, new, m)
        # the row's last vector still sits in cost_left
        cost_row[last, :] = cost_left
        min_row[last] = min_left[0]


def smoothing_term(neigh_costs, neigh_min: int, d: int, pen: PenaltyParams) -> int:
    """Penalised transition cost from one neighbour's vector into disparity ``d``."""
    neigh = np.ascontiguousarray(neigh_costs, dtype=np.uint8)
    return int(_smooth(neigh, np.uint8(neigh_min), d, pen.p1, pen.p2))


def aggregate_pixel(raw: CostRowVector | np.ndarray, state: AggState, col: int,
                    pen: PenaltyParams) -> tuple[int, np.ndarray]:
    costs = raw.costs if isinstance(raw, CostRowVector) else raw
    costs = np.ascontiguousarray(costs, dtype=np.uint8)
    if not 1 <= col < state.cost_row.shape[0] - 1:
        raise DimensionError(f"column {col} has no top-left/top-right slot in the row buffer")
    out = np.empty_like(costs)
    acc = np.empty(costs.shape[0], np.int64)
    arg, _ = _aggregate(costs, state.cost_row, state.min_row, state.cost_left, state._min_left,
                        col, pen.p1, pen.p2, pen.cost_cap, out, acc)
    return int(arg), out


def update_state(state: AggState, col: int, new_costs, new_min: int | None = None) -> None:
    """Retire ``cost_left`` into the top-left slot, then store the new vector."""
    new_costs = np.ascontiguousarray(new_costs, dtype=np.uint8)
    if new_min is None:
        new_min = int(new_costs.min())
    _update(state.cost_row, state.min_row, state.cost_left, state._min_left, col,
            new_costs, np.uint8(new_min))


def _check_pair(left, right, cfg: RunConfig):
    left = as_gray(left)
    right = as_gray(right)
    if left.shape != right.shape:
        raise DimensionError(f"left {left.shape} and right {right.shape} differ in shape")
    if min(left.shape) < cfg.window:
        raise DimensionError(f"image {left.shape} smaller than census window {cfg.window}")
    return left, right


def match_census(cl: CensusField, cr: CensusField, cfg: RunConfig, *,
                 init_value: int | None = None, capture_costs: bool = False):
    """Run the streaming scan on precomputed census fields.

    Returns ``(DisparityMap, costs)``; ``costs`` is the (H, W, D) volume of
    final aggregated costs when ``capture_costs`` is set, otherwise None.
    """
    init = cfg.cost_cap if init_value is None else int(init_value)
    if not 0 <= init <= 255:
        raise ParameterError(f"init value {init} does not fit 8 bits")
    H, W = cl.desc.shape
    D = cfg.disparity_range
    state = AggState.fresh(W, D, init)
    disp = np.zeros((H, W), np.uint8)
    valid = np.zeros((H, W), bool)
    costs = np.zeros((H, W, D) if capture_costs else (1, 1, D), np.uint8)
    _scan(cl.desc, cr.desc, cl.half, cfg.p1, cfg.p2, cfg.cost_cap, init,
          state.cost_row, state.min_row, state.cost_left, state._min_left,
          disp, valid, capture_costs, costs)
    return DisparityMap(disp, valid), (costs if capture_costs else None)


def match_frame(left, right, cfg: RunConfig | None = None, *,
                init_value: int | None = None) -> DisparityMap:
    """Disparity map of a rectified pair with the single-storage MGM engine.

    ``init_value`` overrides the per-frame buffer initialisation (default:
    ``cfg.cost_cap``).
    """
    cfg = cfg or RunConfig()
    left, right = _check_pair(left, right, cfg)
    cl = census_transform(left, cfg.window)
    cr = census_transform(right, cfg.window)
    return match_census(cl, cr, cfg, init_value=init_value)[0]


def match_frame_costs(left, right, cfg: RunConfig | None = None, *,
                      init_value: int | None = None) -> tuple[DisparityMap, np.ndarray]:
    """Like :func:`match_frame`, also returning every pixel's final aggregated costs."""
    cfg = cfg or RunConfig()
    left, right = _check_pair(left, right, cfg)
    cl = census_transform(left, cfg.window)
    cr = census_transform(right, cfg.window)
    return match_census(cl, cr, cfg, init_value=init_value, capture_costs=True)
