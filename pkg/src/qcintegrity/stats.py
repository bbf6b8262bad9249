"""Correlation and summary statistics for the cross-metric analysis."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats as sps

from .errors import DegenerateSampleError, EmptyInputError


@dataclass(frozen=True)
class PairedSample:
    xs: tuple[float, ...]
    ys: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "xs", tuple(float(x) for x in self.xs))
        object.__setattr__(self, "ys", tuple(float(y) for y in self.ys))
        if len(self.xs) != len(self.ys):
            raise ValueError("paired sample lengths differ")
        if len(self.xs) < 3:
            raise DegenerateSampleError("need at least 3 pairs")
        if not all(math.isfinite(v) for v in self.xs + self.ys):
            raise ValueError("non-finite value in paired sample")


def _pearson_with_p(xs: np.ndarray, ys: np.ndarray) -> tuple[float, float]:
    n = len(xs)
    xc = xs - xs.mean()
    yc = ys - ys.mean()
    denom = math.sqrt(float(xc @ xc)) * math.sqrt(float(yc @ yc))
    if denom == 0.0:
        raise DegenerateSampleError("zero variance in a series")
    r = float(xc @ yc) / denom
    r = max(-1.0, min(1.0, r))
    if 1.0 - abs(r) < 1e-12:
        r = math.copysign(1.0, r)
    if abs(r) == 1.0:
        return r, 0.0
    t = r * math.sqrt((n - 2) / (1.0 - r * r))
    p = 2.0 * float(sps.t.sf(abs(t), n - 2))
    return r, min(p, 1.0)


def pearson(sample: PairedSample) -> tuple[float, float]:
    """Sample Pearson r with a two-sided t-test p-value (n-2 dof)."""
    return _pearson_with_p(np.asarray(sample.xs), np.asarray(sample.ys))


def spearman(sample: PairedSample) -> tuple[float, float]:
    """Spearman rho via Pearson on mid-ranks, same t approximation."""
    rx = sps.rankdata(sample.xs)
    ry = sps.rankdata(sample.ys)
    return _pearson_with_p(np.asarray(rx), np.asarray(ry))


def summarize(values) -> dict[str, float]:
    """Mean/median/quartiles (inclusive linear interpolation)/min/max/stddev."""
    vals = [float(v) for v in values]
    if not vals:
        raise EmptyInputError("cannot summarize an empty list")
    arr = np.asarray(vals)
    return {
        "mean": float(arr.mean()),
        "median": float(np.percentile(arr, 50)),
        "q1": float(np.percentile(arr, 25)),
        "q3": float(np.percentile(arr, 75)),
        "min": float(arr.min()),
        "max": float(arr.max()),
        "stddev": float(arr.std(ddof=1)) if len(vals) > 1 else 0.0,
    }
