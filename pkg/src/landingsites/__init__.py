"""UAV landing-site detection from digital elevation models."""

__version__ = "0.1.0"

from .ascii_grid import fill_dsm_from_dtm, parse_asc, read_asc, save_asc, write_asc
from .evaluation import EvalReport, evaluate, timed_run
from .grid import BitMask, DemGrid, GridHeader
from .labeling import LabelMap, connected_components, filter_by_area
from .pipeline import (DetectionParams, LandingClass, LandingMap, LandingSiteDetector,
                       detect)
from .quadtree import (BaselineParams, QuadNode, QuadtreeBaseline, baseline_detect,
                       build_quadtree, sweep_var_thresh)
from .render import render_map, write_ppm
from .synthetic import SynthParams, generate, gt_from_terrain
from .terrain import SlopeMap, obstacle_mask, slope_degrees, threshold_flat

__all__ = [
    "BaselineParams", "BitMask", "DemGrid", "DetectionParams", "EvalReport", "GridHeader",
    "LabelMap", "LandingClass", "LandingMap", "LandingSiteDetector", "QuadNode",
    "QuadtreeBaseline", "SlopeMap", "SynthParams", "baseline_detect", "build_quadtree",
    "connected_components", "detect", "evaluate", "fill_dsm_from_dtm", "filter_by_area",
    "generate", "gt_from_terrain", "obstacle_mask", "parse_asc", "read_asc", "render_map",
    "save_asc", "slope_degrees", "sweep_var_thresh", "threshold_flat", "timed_run",
    "write_asc", "write_ppm",
]
