"""Multi-scale relevance of event trains.

An event train is binned at many temporal resolutions dt; each binning gives
a point (resolution, relevance) in base-N units so the curve lives in the
unit square.  The multi-scale relevance (MSR) is the area under that curve,
and the optimal time scale maximises resolution + relevance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import BadArgument, Degenerate, EmptyInput
from .sample_core import degeneracy_from_counts, summary_of_degeneracy


@dataclass(frozen=True)
class SpikeTrain:
    times: np.ndarray
    t_total: float

    def __init__(self, times: Sequence[float], t_total: float | None = None):
        arr = np.asarray(times, dtype=np.float64)
        if arr.size == 0:
            raise EmptyInput("train needs at least one event")
        if np.any(np.diff(arr) < 0):
            arr = np.sort(arr)
        if t_total is None:
            t_total = float(arr[-1])
        if t_total <= 0 or arr[0] < 0 or arr[-1] > t_total:
            raise BadArgument("event times must lie in [0, T] with T > 0")
        object.__setattr__(self, "times", arr)
        object.__setattr__(self, "t_total", float(t_total))

    @property
    def n(self) -> int:
        return int(self.times.size)


@dataclass(frozen=True)
class MSRPoint:
    dt: float
    resolution: float
    relevance: float


@dataclass(frozen=True)
class MSRResult:
    curve: tuple  # MSRPoint per grid dt, grid order
    msr: float
    optimal_dt: float
    max_total: float


def default_dt_grid(train: SpikeTrain, n_points: int = 100) -> np.ndarray:
    """Log-spaced from T/(10 N) (near all-singleton) to T (single bin)."""
    return np.geomspace(train.t_total / (10.0 * train.n), train.t_total, n_points)


def bin_counts(train: SpikeTrain, dt: float, origin: float = 0.0) -> np.ndarray:
    """Counts per bin [origin + i dt, origin + (i+1) dt); empty bins kept as 0."""
    if dt <= 0:
        raise BadArgument("dt must be positive")
    idx = np.floor((train.times - origin) / dt).astype(np.int64)
    idx -= idx.min()
    return np.bincount(idx)


def bin_spikes(train: SpikeTrain, dt: float) -> dict:
    """Frequency profile {bin index: count} with empty bins omitted."""
    counts = bin_counts(train, dt)
    return {int(i): int(c) for i, c in enumerate(counts) if c > 0}


def _point(train: SpikeTrain, dt: float, phases: int) -> MSRPoint:
    if phases < 1:
        raise BadArgument("phases must be >= 1")
    res_acc = rel_acc = 0.0
    for p in range(phases):
        origin = -dt * p / phases
        deg = degeneracy_from_counts(bin_counts(train, dt, origin))
        summ = summary_of_degeneracy(deg, base="baseN")
        res_acc += summ.resolution
        rel_acc += summ.relevance
    return MSRPoint(dt=float(dt), resolution=res_acc / phases, relevance=rel_acc / phases)


def msr_curve(
    train: SpikeTrain, grid: Sequence[float] | None = None, phases: int = 1
) -> tuple:
    """Curve sorted by descending resolution; duplicate resolutions keep the
    max-relevance point (larger dt on full ties)."""
    grid = default_dt_grid(train) if grid is None else np.asarray(grid, dtype=float)
    if grid.size == 0 or np.any(grid <= 0):
        raise BadArgument("dt grid must be non-empty and positive")
    pts = [_point(train, float(dt), phases) for dt in grid]
    best: dict = {}
    for p in pts:
        kept = best.get(p.resolution)
        if kept is None or (p.relevance, p.dt) > (kept.relevance, kept.dt):
            best[p.resolution] = p
    return tuple(sorted(best.values(), key=lambda p: -p.resolution))


def msr_area_and_optimum(curve: Sequence[MSRPoint]) -> tuple:
    """(msr, optimal_dt, max_total): unit-square area and argmax of res+rel.

    Duplicate resolutions keep the max relevance; (1, 0) and (0, 0) anchors
    are appended before the trapezoid integral.  Optimal-dt ties go to the
    larger dt.
    """
    if len(curve) < 2:
        raise Degenerate("need at least 2 curve points")
    best: dict = {}
    for p in curve:
        if p.resolution not in best or p.relevance > best[p.resolution]:
            best[p.resolution] = p.relevance
    best.setdefault(0.0, 0.0)
    best.setdefault(1.0, 0.0)
    xs = np.array(sorted(best))
    ys = np.array([best[x] for x in xs])
    msr = float(np.trapezoid(ys, xs))
    opt = max(curve, key=lambda p: (p.resolution + p.relevance, p.dt))
    return msr, opt.dt, opt.resolution + opt.relevance


def multiscale_relevance(
    train: SpikeTrain, grid: Sequence[float] | None = None, phases: int = 1
) -> MSRResult:
    curve = msr_curve(train, grid, phases)
    msr, optimal_dt, max_total = msr_area_and_optimum(curve)
    return MSRResult(curve=curve, msr=msr, optimal_dt=optimal_dt, max_total=max_total)
