"""Accuracy against ground truth, disparity-to-depth, and the frame-time model."""
from __future__ import annotations

from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from .errors import DegenerateInputError, DimensionError, ParameterError
from .pixelio import DisparityMap

DEFAULT_TOLERANCE = 5
# cycles per pixel beyond the search-range loop; reproduces 2.1 fps for a
# single 100 MHz block on 640x480 with D=92
CALIBRATED_PIPELINE_DEPTH = 63


@dataclass
class AccuracyReport:
    rmse: float
    pct_erroneous: float
    tolerance: float
    evaluated_pixels: int

    def as_text(self) -> str:
        return f"rmse={self.rmse:.2f} pct={self.pct_erroneous:.2f}"

    def as_keyvalue(self, **extra) -> str:
        items = {**asdict(self), **extra}
        return "".join(f"{k}={v}\n" for k, v in items.items())


def accuracy(est: DisparityMap, gt: DisparityMap, tolerance: float = DEFAULT_TOLERANCE) -> AccuracyReport:
    """RMSE and percentage of pixels off by more than ``tolerance``.

    Only pixels valid in both maps count.
    """
    if est.disp.shape != gt.disp.shape:
        raise DimensionError(f"estimate {est.disp.shape} and ground truth {gt.disp.shape} differ")
    mask = est.valid & gt.valid
    n = int(mask.sum())
    if n == 0:
        raise DegenerateInputError("no pixel is valid in both maps")
    err = est.disp[mask].astype(np.float64) - gt.disp[mask].astype(np.float64)
    rmse = float(np.sqrt(np.mean(err * err)))
    pct = float(np.count_nonzero(np.abs(err) > tolerance) * 100.0 / n)
    return AccuracyReport(rmse, pct, tolerance, n)


def error_map(est: DisparityMap, gt: DisparityMap) -> np.ma.MaskedArray:
    """Absolute disparity error, masked outside the jointly valid set."""
    mask = est.valid & gt.valid
    err = np.abs(est.disp.astype(np.int16) - gt.disp.astype(np.int16))
    return np.ma.masked_array(err, ~mask)


def disparity_to_depth(d: DisparityMap, baseline: float, focal: float) -> tuple[np.ndarray, np.ndarray]:
    """Depth in metres (``baseline * focal / disparity``) and its validity mask.

    Zero disparity means infinite depth and is reported invalid (depth 0).
    """
    if baseline <= 0 or focal <= 0:
        raise ParameterError("baseline and focal length must be positive")
    ok = d.valid & (d.disp > 0)
    depth = np.zeros(d.disp.shape, np.float64)
    depth[ok] = baseline * focal / d.disp[ok]
    return depth, ok


@dataclass(frozen=True)
class TimingModel:
    clock_hz: float = 100e6
    pipeline_depth: int = CALIBRATED_PIPELINE_DEPTH
    blocks: int = 1
    rows: int = 480
    cols: int = 640
    D: int = 92

    def __post_init__(self):
        for name in ("clock_hz", "pipeline_depth", "blocks", "rows", "cols", "D"):
            if getattr(self, name) <= 0:
                raise ParameterError(f"{name} must be positive")

    @property
    def cycles_per_frame(self) -> float:
        return self.rows * self.cols * (self.D + self.pipeline_depth)


def estimate_fps(m: TimingModel) -> float:
    """Frames per second with ideal scaling over ``m.blocks`` parallel blocks."""
    return m.blocks * m.clock_hz / m.cycles_per_frame


def write_report(report: AccuracyReport, path, **extra) -> None:
    Path(path).write_text(report.as_keyvalue(**extra))
