"""Agglomerative clustering and resolution/relevance-based algorithm ranking.

A dendrogram's cut at K clusters is a labeling of the rows, i.e. a sample
whose resolution and relevance trace a curve as K varies.  INFOMAX ranks
algorithms by resolution at a reference K; RELEMAX by resolution + relevance.
Ground-truth comparison uses plug-in mutual information, geometric-mean NMI,
the adjusted Rand index and purity.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import BadArgument, BadData
from .sample_core import DegeneracyProfile, summary_of_degeneracy

LINKAGES = ("single", "complete", "average")
METRICS = ("L1", "L2")


@dataclass(frozen=True)
class Merge:
    left: int  # representative (min original row) of the first cluster
    right: int  # representative of the second, left < right
    distance: float


@dataclass(frozen=True)
class Dendrogram:
    merges: tuple  # N-1 Merge records, bottom-up
    n: int


@dataclass(frozen=True)
class TrajectoryPoint:
    k: int
    resolution: float
    relevance: float


@dataclass(frozen=True)
class TruthMetrics:
    mutual_information: float
    nmi: float
    ari: float
    purity: float


@dataclass(frozen=True)
class RankingReport:
    criterion: str
    ranking: tuple  # algorithm names, best first
    scores: dict  # name -> criterion value used
    k_star: dict  # name -> argmax_K of resolution + relevance
    k_used: dict  # name -> K at which the criterion was evaluated


def _pairwise(data: np.ndarray, metric: str) -> np.ndarray:
    if metric == "L2":
        sq = np.sum(data**2, axis=1)
        d2 = sq[:, None] + sq[None, :] - 2.0 * (data @ data.T)
        np.maximum(d2, 0.0, out=d2)
        return np.sqrt(d2)
    if metric == "L1":
        return np.abs(data[:, None, :] - data[None, :, :]).sum(axis=2)
    raise BadArgument(f"unknown metric {metric!r}")


def agglomerate(data, linkage: str = "complete", metric: str = "L2") -> Dendrogram:
    """Lance-Williams agglomeration; distance ties broken by the smallest
    (representative row index) pair in lexicographic order."""
    if linkage not in LINKAGES:
        raise BadArgument(f"unknown linkage {linkage!r}")
    arr = np.asarray(data, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[0] < 2:
        raise BadArgument("need a 2-d matrix with at least 2 rows")
    if not np.all(np.isfinite(arr)):
        raise BadData("non-finite feature value")
    n = arr.shape[0]
    d = _pairwise(arr, metric)
    d[np.tril_indices(n)] = np.inf  # keep only pairs i < j, row-major argmin
    sizes = np.ones(n, dtype=np.int64)
    active = np.ones(n, dtype=bool)
    merges = []
    for _ in range(n - 1):
        flat = int(np.argmin(d))
        i, j = divmod(flat, n)
        dist = float(d[i, j])
        # Lance-Williams update of distances from the merged cluster (rep i)
        others = np.flatnonzero(active)
        others = others[(others != i) & (others != j)]
        di = np.where(others < i, d[others, i], d[i, others])
        dj = np.where(others < j, d[others, j], d[j, others])
        if linkage == "single":
            new = np.minimum(di, dj)
        elif linkage == "complete":
            new = np.maximum(di, dj)
        else:
            new = (sizes[i] * di + sizes[j] * dj) / (sizes[i] + sizes[j])
        lo = np.minimum(others, i)
        hi = np.maximum(others, i)
        d[lo, hi] = new
        d[j, :] = np.inf
        d[:, j] = np.inf
        active[j] = False
        sizes[i] += sizes[j]
        merges.append(Merge(left=i, right=j, distance=dist))
    return Dendrogram(merges=tuple(merges), n=n)


def cut_at_k(dendrogram: Dendrogram, k: int) -> np.ndarray:
    """Labels 1..K from undoing the last K-1 merges; label order follows the
    ascending representative row index of each surviving cluster."""
    n = dendrogram.n
    if not 1 <= k <= n:
        raise BadArgument(f"K={k} out of range 1..{n}")
    parent = np.arange(n)

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for merge in dendrogram.merges[: n - k]:
        parent[find(merge.right)] = find(merge.left)
    roots = np.array([find(i) for i in range(n)])
    reps = np.unique(roots)
    label_of = {int(r): li + 1 for li, r in enumerate(reps)}
    return np.array([label_of[int(r)] for r in roots], dtype=np.int64)


def rr_trajectory(dendrogram: Dendrogram) -> tuple:
    """(K, resolution, relevance) for K = 1..N, maintained incrementally."""
    n = dendrogram.n
    sizes = {i: 1 for i in range(n)}
    deg = Counter({1: n})
    out = {}

    def snapshot(k: int):
        profile = DegeneracyProfile(degeneracies=dict(deg), n=n, m=k)
        summ = summary_of_degeneracy(profile)
        out[k] = TrajectoryPoint(k=k, resolution=summ.resolution, relevance=summ.relevance)

    snapshot(n)
    for idx, merge in enumerate(dendrogram.merges):
        a, b = sizes.pop(merge.left), sizes.pop(merge.right)
        for s in (a, b):
            deg[s] -= 1
            if deg[s] == 0:
                del deg[s]
        sizes[merge.left] = a + b
        deg[a + b] += 1
        snapshot(n - idx - 1)
    return tuple(out[k] for k in range(1, n + 1))


def rank_algorithms(
    trajectories: dict,
    criterion: str = "RELEMAX",
    k: int | str = "K_star",
) -> RankingReport:
    """Rank named trajectories by INFOMAX (resolution) or RELEMAX
    (resolution + relevance) at a shared K or at each algorithm's K_star."""
    if criterion not in ("INFOMAX", "RELEMAX"):
        raise BadArgument(f"unknown criterion {criterion!r}")
    if not trajectories:
        raise BadArgument("need at least one trajectory")
    scores, k_star, k_used = {}, {}, {}
    for name, traj in trajectories.items():
        by_k = {p.k: p for p in traj}
        star = max(traj, key=lambda p: (p.resolution + p.relevance, -p.k)).k
        k_star[name] = star
        k_eff = star if k == "K_star" else int(k)
        if k_eff not in by_k:
            raise BadArgument(f"trajectory {name!r} does not cover K={k_eff}")
        p = by_k[k_eff]
        scores[name] = p.resolution if criterion == "INFOMAX" else p.resolution + p.relevance
        k_used[name] = k_eff
    ranking = tuple(sorted(scores, key=lambda name: (-scores[name], name)))
    return RankingReport(
        criterion=criterion, ranking=ranking, scores=scores, k_star=k_star, k_used=k_used
    )


def _contingency(labels: Sequence, truth: Sequence) -> np.ndarray:
    a = np.unique(np.asarray(labels), return_inverse=True)[1]
    b = np.unique(np.asarray(truth), return_inverse=True)[1]
    table = np.zeros((a.max() + 1, b.max() + 1), dtype=np.int64)
    np.add.at(table, (a, b), 1)
    return table


def _entropy(p: np.ndarray) -> float:
    p = p[p > 0]
    return float(-np.sum(p * np.log(p)))


def truth_metrics(labels: Sequence, truth: Sequence) -> TruthMetrics:
    labels = list(labels)
    truth = list(truth)
    if len(labels) != len(truth):
        raise BadArgument("label sequences must have equal length")
    if not labels:
        raise BadArgument("empty label sequences")
    table = _contingency(labels, truth)
    n = table.sum()
    pij = table / n
    pi = pij.sum(axis=1)
    pj = pij.sum(axis=0)
    h_s, h_t = _entropy(pi), _entropy(pj)
    pos = pij > 0
    mi = float(np.sum(pij[pos] * (np.log(pij[pos]) - np.log(np.outer(pi, pj)[pos]))))
    mi = max(mi, 0.0)
    nmi = mi / math.sqrt(h_s * h_t) if h_s > 0 and h_t > 0 else (1.0 if h_s == h_t else 0.0)
    # adjusted Rand index, permutation-model expectation
    comb = lambda x: x * (x - 1) / 2.0
    sum_ij = comb(table.astype(np.float64)).sum()
    sum_a = comb(table.sum(axis=1).astype(np.float64)).sum()
    sum_b = comb(table.sum(axis=0).astype(np.float64)).sum()
    total = comb(float(n))
    expected = sum_a * sum_b / total if total > 0 else 0.0
    max_index = 0.5 * (sum_a + sum_b)
    ari = 1.0 if max_index == expected else (sum_ij - expected) / (max_index - expected)
    purity = float(table.max(axis=1).sum() / n)
    return TruthMetrics(mutual_information=mi, nmi=float(nmi), ari=float(ari), purity=purity)


def kendall_tau(rank_a: Sequence, rank_b: Sequence) -> float:
    """Tie-corrected Kendall tau-b between two orderings of the same names."""
    if set(rank_a) != set(rank_b) or len(rank_a) != len(set(rank_a)):
        raise BadArgument("rankings must order the same set of unique names")
    if len(rank_a) < 2:
        raise BadArgument("need at least 2 names")
    pos_a = {name: i for i, name in enumerate(rank_a)}
    pos_b = {name: i for i, name in enumerate(rank_b)}
    names = list(rank_a)
    conc = disc = 0
    for i in range(len(names)):
        for j in range(i + 1, len(names)):
            s = (pos_a[names[i]] - pos_a[names[j]]) * (pos_b[names[i]] - pos_b[names[j]])
            if s > 0:
                conc += 1
            elif s < 0:
                disc += 1
    return (conc - disc) / (conc + disc) if conc + disc else 0.0
