"""Maximum-relevance frontier, random baseline, and power-law exponent fits.

Over real-valued degeneracy profiles m_k >= 0 with sum_k k*m_k = N, the
profile maximising the relevance functional at fixed resolution is the power
law m_k = A k^(-1-mu); sweeping mu > 0 traces the frontier.  The relevance
functional is concave and both constraints are affine in m, so the stationary
power-law profile is the exact global maximiser — local perturbations can
only lose relevance at matched resolution.

Along the frontier dH[k]/dH[s] = -mu, hence H[s]+H[k] peaks exactly at the
Zipf point mu = 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import BadArgument, Degenerate, NumericalFailure
from .sample_core import (
    RRPoint,
    Sample,
    DegeneracyProfile,
    build_degeneracy,
    build_frequency,
    entropy_summary,
)


def default_mu_grid(n_points: int = 60, lo: float = 0.05, hi: float = 20.0) -> np.ndarray:
    return np.geomspace(lo, hi, n_points)


@dataclass(frozen=True)
class FrontierPoint:
    mu: float
    resolution: float
    relevance: float
    amplitude: float


@dataclass(frozen=True)
class FrontierCurve:
    points: tuple  # FrontierPoint, sorted by resolution
    n: int


@dataclass(frozen=True)
class BaselinePoint:
    alphabet_size: int
    resolution: float
    relevance: float


@dataclass(frozen=True)
class BaselineCurve:
    points: tuple
    n: int


@dataclass(frozen=True)
class ExponentFit:
    mu: float
    intercept: float
    stderr: float
    points_used: int


@dataclass(frozen=True)
class ZipfGap:
    mu_deviation: float
    frontier_deficit: float


def mean_profile(n: int, mu: float) -> np.ndarray:
    """Power-law Poisson means m̄_k = A k^(-1-mu), k = 1..n, with Σ k m̄_k = n.

    The normalisation has the closed form A = n / Σ_k k^(-mu); no root
    finding is needed.
    """
    if n < 2:
        raise BadArgument("n must be at least 2")
    if mu <= 0:
        raise BadArgument("mu must be positive")
    k = np.arange(1, n + 1, dtype=np.float64)
    w = k ** (-mu)
    denom = w.sum()
    if not np.isfinite(denom) or denom <= 0:
        raise NumericalFailure(f"normalisation sum not finite for mu={mu}")
    return (n / denom) * k ** (-1.0 - mu)


def profile_entropies(means: np.ndarray, n: int) -> RRPoint:
    """Plug-in resolution and relevance of a real-valued profile, in nats."""
    k = np.arange(1, len(means) + 1, dtype=np.float64)
    f = k / n
    res = -np.sum(means * f * np.log(f))
    mass = k * means / n
    pos = mass > 0
    rel = -np.sum(mass[pos] * np.log(mass[pos]))
    return RRPoint(float(res), float(rel))


def max_relevance_frontier(n: int, mu_grid: Sequence[float] | None = None) -> FrontierCurve:
    """Frontier curve over a mu grid, sorted by ascending resolution."""
    grid = default_mu_grid() if mu_grid is None else np.asarray(mu_grid, dtype=float)
    if grid.size == 0 or np.any(grid <= 0):
        raise BadArgument("mu grid must be non-empty and positive")
    pts = []
    for mu in grid:
        means = mean_profile(n, float(mu))
        amp = float(means[0])
        res, rel = profile_entropies(means, n)
        pts.append(FrontierPoint(mu=float(mu), resolution=res, relevance=rel, amplitude=amp))
    pts.sort(key=lambda p: p.resolution)
    return FrontierCurve(points=tuple(pts), n=n)


def _resolution_at_mu(n: int, mu: float) -> float:
    return profile_entropies(mean_profile(n, mu), n).resolution


def frontier_relevance_at(n: int, resolution: float, tol: float = 1e-12) -> float:
    """Exact frontier relevance at a given resolution, via bisection on mu.

    Resolution increases monotonically with mu from ~O(1) toward ln n, so a
    bracketing interval always exists within [1e-6, 1e6] for resolutions in
    the frontier's range.
    """
    lo, hi = 1e-6, 1e6
    f_lo = _resolution_at_mu(n, lo) - resolution
    f_hi = _resolution_at_mu(n, hi) - resolution
    if f_lo * f_hi > 0:
        raise NumericalFailure(
            f"resolution {resolution} not bracketed by mu in [{lo}, {hi}]"
        )
    for _ in range(200):
        mid = math.sqrt(lo * hi)
        f_mid = _resolution_at_mu(n, mid) - resolution
        if f_lo * f_mid <= 0:
            hi = mid
        else:
            lo, f_lo = mid, f_mid
        if hi - lo <= tol * hi:
            break
    mu = math.sqrt(lo * hi)
    return profile_entropies(mean_profile(n, mu), n).relevance


def random_baseline(
    n: int,
    alphabet_sizes: Sequence[int],
    replicas: int,
    seed: int,
) -> BaselineCurve:
    """Mean entropies of uniform multinomial samples, per alphabet size."""
    if replicas < 1:
        raise BadArgument("replicas must be >= 1")
    rng = np.random.default_rng(seed)
    pts = []
    for size in alphabet_sizes:
        if size < 1:
            raise BadArgument("alphabet sizes must be positive")
        res_acc = rel_acc = 0.0
        for _ in range(replicas):
            draws = rng.integers(0, size, size=n)
            summ = entropy_summary(Sample(draws.tolist()))
            res_acc += summ.resolution
            rel_acc += summ.relevance
        pts.append(
            BaselinePoint(
                alphabet_size=int(size),
                resolution=res_acc / replicas,
                relevance=rel_acc / replicas,
            )
        )
    return BaselineCurve(points=tuple(pts), n=n)


def fit_exponent(
    deg: DegeneracyProfile,
    min_mass: float | None = None,
    weight_by_mass: bool = False,
) -> ExponentFit:
    """Fit of ln(k·m_k) on ln(k/N); reported mu is the negated slope.

    Classes enter unweighted by default (each occupied frequency class is one
    regression point); weight_by_mass weights each class by k·m_k instead.
    With min_mass set, classes lighter than the threshold are dropped.
    """
    n = deg.n
    items = sorted(deg.degeneracies.items())
    if min_mass is not None:
        items = [(k, mk) for k, mk in items if k * mk >= min_mass]
    if len(items) < 2:
        raise Degenerate("need at least 2 occupied frequency classes to fit")
    x = np.array([math.log(k / n) for k, _ in items])
    y = np.array([math.log(k * mk) for k, mk in items])
    if weight_by_mass:
        w = np.array([float(k * mk) for k, mk in items])
    else:
        w = np.ones(len(items))
    sw = w.sum()
    xbar = np.sum(w * x) / sw
    ybar = np.sum(w * y) / sw
    sxx = np.sum(w * (x - xbar) ** 2)
    if sxx <= 0:
        raise Degenerate("no spread in frequency classes")
    slope = np.sum(w * (x - xbar) * (y - ybar)) / sxx
    intercept = ybar - slope * xbar
    resid = y - (intercept + slope * x)
    dof = max(len(items) - 2, 1)
    sigma2 = np.sum(w * resid**2) / (sw * dof / len(items))
    stderr = math.sqrt(sigma2 / sxx) if sxx > 0 else math.inf
    return ExponentFit(
        mu=float(-slope),
        intercept=float(intercept),
        stderr=float(stderr),
        points_used=len(items),
    )


def slope_exponent(curve: Sequence[RRPoint], at_resolution: float) -> float:
    """mu = -dH[k]/dH[s] by central difference around the nearest curve point."""
    if len(curve) < 3:
        raise BadArgument("need at least 3 curve points")
    pts = sorted(curve, key=lambda p: p.resolution)
    res = [p.resolution for p in pts]
    if not res[0] <= at_resolution <= res[-1]:
        raise BadArgument(f"resolution {at_resolution} outside curve range")
    j = min(range(len(pts)), key=lambda i: abs(res[i] - at_resolution))
    j = min(max(j, 1), len(pts) - 2)
    dres = res[j + 1] - res[j - 1]
    if dres == 0:
        raise BadArgument("degenerate (duplicate-resolution) curve points")
    drel = pts[j + 1].relevance - pts[j - 1].relevance
    return -drel / dres


def local_slope(curve: Sequence[RRPoint], at_resolution: float, window: float) -> float:
    """mu = -(local regression slope) of relevance on resolution, using every
    curve point within `window` nats of `at_resolution`.

    More robust than slope_exponent on jagged empirical trajectories, where
    adjacent-point differences are dominated by discretization noise.
    """
    res = np.array([p.resolution for p in curve])
    rel = np.array([p.relevance for p in curve])
    mask = np.abs(res - at_resolution) <= window
    if mask.sum() < 3:
        raise BadArgument("fewer than 3 curve points inside the window")
    slope = np.polyfit(res[mask], rel[mask], 1)[0]
    return float(-slope)


def interp_frontier(curve: FrontierCurve, resolution: float) -> float:
    """Frontier relevance at a resolution by linear interpolation.

    Anchors (0, 0) and (ln n, 0) extend the gridded curve so any physical
    sample resolution is covered.
    """
    xs = [0.0] + [p.resolution for p in curve.points] + [math.log(curve.n)]
    ys = [0.0] + [p.relevance for p in curve.points] + [0.0]
    order = np.argsort(xs, kind="stable")
    xs_a = np.asarray(xs)[order]
    ys_a = np.asarray(ys)[order]
    return float(np.interp(resolution, xs_a, ys_a))


def zipf_gap(sample: Sample, mu_grid: Sequence[float] | None = None) -> ZipfGap:
    """Deviation from Zipf (|mu_hat - 1|) and distance below the frontier."""
    deg = build_degeneracy(build_frequency(sample))
    fit = fit_exponent(deg)
    summ = entropy_summary(sample)
    curve = max_relevance_frontier(sample.n, mu_grid)
    deficit = interp_frontier(curve, summ.resolution) - summ.relevance
    return ZipfGap(mu_deviation=abs(fit.mu - 1.0), frontier_deficit=deficit)
