"""Horizontal sectioning: one independent aggregator per band of rows."""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .aggregator import _check_pair, match_census
from .census import census_transform
from .errors import DimensionError, ParameterError
from .pixelio import DisparityMap, RunConfig


@dataclass(frozen=True)
class Section:
    own_start: int
    own_stop: int
    read_start: int
    read_stop: int

    @property
    def read_height(self) -> int:
        return self.read_stop - self.read_start

    @property
    def owned(self) -> range:
        return range(self.own_start, self.own_stop)


@dataclass(frozen=True)
class SectionPlan:
    height: int
    window: int
    sections: tuple[Section, ...]

    @property
    def K(self) -> int:
        return len(self.sections)

    @property
    def overlap(self) -> int:
        return self.window // 2


def plan_sections(height: int, K: int, window: int) -> SectionPlan:
    """Split ``height`` rows into ``K`` owned bands of ``ceil(height / K)`` rows.

    Each band reads ``window // 2`` extra rows above and below (clipped to the
    image) so census windows stay complete at the seams.
    """
    if K < 1:
        raise ParameterError(f"section count must be positive, got {K}")
    if window < 1 or window % 2 == 0:
        raise ParameterError(f"window must be odd, got {window}")
    if height < K * window:
        raise DimensionError(f"height {height} too small for {K} sections of window {window}")
    band = math.ceil(height / K)
    half = window // 2
    sections = []
    for i in range(K):
        start = min(i * band, height)
        stop = min((i + 1) * band, height)
        sections.append(Section(start, stop, max(0, start - half), min(height, stop + half)))
    return SectionPlan(height, window, tuple(sections))


def match_frame_striped(left, right, cfg: RunConfig | None = None, *,
                        sections: int | None = None, workers: int | None = None,
                        init_value: int | None = None) -> DisparityMap:
    """Run one fresh aggregator per section concurrently and stitch owned rows."""
    cfg = cfg or RunConfig()
    left, right = _check_pair(left, right, cfg)
    K = cfg.sections if sections is None else sections
    plan = plan_sections(left.shape[0], K, cfg.window)
    out = DisparityMap.empty(*left.shape)

    def run(sec: Section):
        if sec.own_start == sec.own_stop:
            return
        lv = left[sec.read_start : sec.read_stop]
        rv = right[sec.read_start : sec.read_stop]
        if lv.shape[0] < cfg.window:
            return
        dm, _ = match_census(census_transform(lv, cfg.window), census_transform(rv, cfg.window),
                             cfg, init_value=init_value)
        lo = sec.own_start - sec.read_start
        hi = lo + (sec.own_stop - sec.own_start)
        # disjoint row ranges: no locking
        out.disp[sec.own_start : sec.own_stop] = dm.disp[lo:hi]
        out.valid[sec.own_start : sec.own_stop] = dm.valid[lo:hi]

    with ThreadPoolExecutor(max_workers=workers or plan.K) as pool:
        list(pool.map(run, plan.sections))
    return out


def seam_rows(plan: SectionPlan) -> list[int]:
    """First owned row of every section after the first."""
    return [s.own_start for s in plan.sections[1:] if s.own_start < plan.height]


def invalid_bands(dmap: DisparityMap, window: int) -> np.ndarray:
    """Rows inside the census-valid band that hold no valid pixel at all."""
    half = window // 2
    rows = np.flatnonzero(~dmap.valid.any(axis=1))
    return rows[(rows >= half) & (rows < dmap.height - half)]
