"""Single-storage MGM stereo matching: census costs, streaming four-path
aggregation, fixed-point rectification, sectioned execution, evaluation."""

from .aggregator import AggState, PenaltyParams, match_frame, match_frame_costs
from .census import CensusField, census_transform, cost_vector
from .evalkit import AccuracyReport, TimingModel, accuracy, disparity_to_depth, estimate_fps
from .pixelio import DisparityMap, RemapTable, RunConfig, read_pgm, write_pgm
from .rectify import remap
from .stripes import match_frame_striped, plan_sections

__version__ = "0.1.0"
