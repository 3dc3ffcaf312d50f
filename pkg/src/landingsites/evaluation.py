"""Pixel-level precision/recall and wall-clock timing."""

from __future__ import annotations

import time
from dataclasses import dataclass, replace

import numpy as np

from .grid import check_aligned
from .pipeline import LandingClass

UNDEFINED = "undefined"


@dataclass(frozen=True)
class EvalReport:
    """Confusion counts of LANDING against a ground-truth mask.

    ``precision`` and ``recall`` are None when their denominator is zero.
    """

    tp: int
    fp: int
    fn: int
    tn: int
    precision: float | None
    recall: float | None
    elapsed_seconds: float = 0.0
    params_echo: str = ""

    @property
    def total(self):
        return self.tp + self.fp + self.fn + self.tn

    def record(self):
        """Single-line ``key=value`` form for machine consumption."""
        def ratio(x):
            return UNDEFINED if x is None else f"{x:.6g}"

        line = (f"tp={self.tp} fp={self.fp} fn={self.fn} tn={self.tn} "
                f"precision={ratio(self.precision)} recall={ratio(self.recall)} "
                f"seconds={self.elapsed_seconds:.6g}")
        if self.params_echo:
            line += " " + self.params_echo
        return line

    def summary(self):
        def pct(x):
            return UNDEFINED if x is None else f"{x:.4f}"

        return "\n".join([
            f"pixels evaluated : {self.total}",
            f"true positives   : {self.tp}",
            f"false positives  : {self.fp}",
            f"false negatives  : {self.fn}",
            f"true negatives   : {self.tn}",
            f"precision        : {pct(self.precision)}",
            f"recall           : {pct(self.recall)}",
            f"elapsed (s)      : {self.elapsed_seconds:.4f}",
        ])


def evaluate(pred, gt, elapsed_seconds=0.0, params_echo=""):
    """Score a LandingMap against a ground-truth BitMask pixel by pixel."""
    check_aligned(pred.header, gt.header, what="prediction and ground truth")
    predicted = pred.classes == LandingClass.LANDING
    actual = gt.bits
    tp = int(np.count_nonzero(predicted & actual))
    fp = int(np.count_nonzero(predicted & ~actual))
    fn = int(np.count_nonzero(~predicted & actual))
    tn = int(predicted.size) - tp - fp - fn
    precision = tp / (tp + fp) if tp + fp else None
    recall = tp / (tp + fn) if tp + fn else None
    return EvalReport(tp, fp, fn, tn, precision, recall, float(elapsed_seconds), params_echo)


def timed_run(task, *args, **kwargs):
    """Call ``task(*args, **kwargs)`` and return ``(result, elapsed_seconds)``."""
    start = time.perf_counter()
    result = task(*args, **kwargs)
    return result, time.perf_counter() - start


def with_timing(report, elapsed_seconds, params_echo=None):
    changes = {"elapsed_seconds": float(elapsed_seconds)}
    if params_echo is not None:
        changes["params_echo"] = params_echo
    return replace(report, **changes)
