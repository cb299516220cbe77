"""Counting samples compatible with a frequency or degeneracy profile.

For a sample of size N with frequencies {k_s} and degeneracy profile {m_k}:

    W_s   = N! / prod_s k_s!            samples with these frequencies
    W_k   = N! / prod_k (k m_k)!        samples with this coarse profile
    W_s|k = W_s / W_k                   refinements of the coarse profile
    W_m   = M! / prod_k m_k!            labelings of states across classes

All logs are natural.  The three sample counts share the terms
A = lgamma(N+1), B = sum_k m_k lgamma(k+1), C = sum_k lgamma(k m_k + 1),
so log W_s = A - B, log W_k = A - C and log W_s|k = C - B, which keeps
log W_s = log W_k + log W_s|k tight to a single rounding step.

The module also enumerates integer partitions of N (each partition is a
degeneracy profile) and streams per-partition statistics; a jitted walk
handles the large-N regime where pure Python is too slow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np
from numba import njit

from .errors import BadArgument, TooLarge

#: largest N accepted for full partition enumeration (p(120) ~ 1.8e9)
PARTITION_N_MAX = 120

_EXACT_N_MAX = 64


@dataclass(frozen=True)
class LogCounts:
    log_ws: float
    log_wk: float
    log_ws_given_k: float
    log_wm: float


def log_counts(degeneracies: dict, n: int) -> LogCounts:
    """Log multiplicities of a degeneracy profile, nats, via shared lgamma terms."""
    if n < 1:
        raise BadArgument("n must be positive")
    if sum(k * mk for k, mk in degeneracies.items()) != n:
        raise BadArgument("sum of k*m_k must equal n")
    m = sum(degeneracies.values())
    a = math.lgamma(n + 1)
    b = sum(mk * math.lgamma(k + 1) for k, mk in degeneracies.items())
    c = sum(math.lgamma(k * mk + 1) for k, mk in degeneracies.items())
    log_wm = math.lgamma(m + 1) - sum(
        math.lgamma(mk + 1) for mk in degeneracies.values()
    )
    return LogCounts(log_ws=a - b, log_wk=a - c, log_ws_given_k=c - b, log_wm=log_wm)


@dataclass(frozen=True)
class ExactCounts:
    ws: int
    wk: int
    ws_given_k: int
    wm: int


def exact_counts(degeneracies: dict, n: int) -> ExactCounts:
    """Exact big-integer multiplicities; only for small n (tests, spot checks)."""
    if n > _EXACT_N_MAX:
        raise TooLarge(f"exact counting limited to n <= {_EXACT_N_MAX}")
    if sum(k * mk for k, mk in degeneracies.items()) != n:
        raise BadArgument("sum of k*m_k must equal n")
    fact = math.factorial
    ws_den = 1
    wk_den = 1
    for k, mk in degeneracies.items():
        ws_den *= fact(k) ** mk
        wk_den *= fact(k * mk)
    ws = fact(n) // ws_den
    wk = fact(n) // wk_den
    ws_given_k, rem = divmod(ws * wk_den, fact(n))
    assert rem == 0
    m = sum(degeneracies.values())
    wm_den = 1
    for mk in degeneracies.values():
        wm_den *= fact(mk)
    return ExactCounts(ws=ws, wk=wk, ws_given_k=ws_given_k, wm=fact(m) // wm_den)


def count_partitions(n: int) -> int:
    """p(n) via Euler's pentagonal-number recurrence (exact integers)."""
    if n < 0:
        raise BadArgument("n must be non-negative")
    p = [1] + [0] * n
    for i in range(1, n + 1):
        total, g, sign = 0, 1, 1
        while True:
            pent1 = g * (3 * g - 1) // 2
            if pent1 > i:
                break
            total += sign * p[i - pent1]
            pent2 = g * (3 * g + 1) // 2
            if pent2 <= i:
                total += sign * p[i - pent2]
            g += 1
            sign = -sign
        p[i] = total
    return p[n]


def iter_partitions(n: int) -> Iterator[tuple]:
    """Yield partitions of n as descending tuples of parts, reverse-lex order.

    Starts at (n,) and ends at (1,)*n.  Guarded by PARTITION_N_MAX since the
    number of partitions grows like exp(c sqrt(n)).
    """
    if n < 1:
        raise BadArgument("n must be positive")
    if n > PARTITION_N_MAX:
        raise TooLarge(f"partition enumeration limited to n <= {PARTITION_N_MAX}")
    a = [0] * (n + 1)
    a[0] = n
    k = 0
    while True:
        yield tuple(a[: k + 1])
        ones = 0
        while k >= 0 and a[k] == 1:
            ones += 1
            k -= 1
        if k < 0:
            return
        x = a[k] - 1
        total = a[k] + ones
        a[k] = x
        while total > 2 * x:
            total -= x
            k += 1
            a[k] = x
        k += 1
        a[k] = total - x
        if a[k] == 0:
            k -= 1


def degeneracy_of_partition(parts: tuple) -> dict:
    """Degeneracy profile {k: m_k} of a partition given as parts."""
    deg: dict = {}
    for p in parts:
        deg[p] = deg.get(p, 0) + 1
    return deg


@njit(cache=True)
def _partition_walk_stats(n):
    """Walk all partitions of n; per partition accumulate resolution-binned
    tallies of the number of partitions and the max log W_m per resolution bin.

    Returns (count, best_log_wm, best_index_encoded) where best_* refer to the
    global maximiser of log W_m; the caller re-walks to recover it if needed.
    """
    a = np.zeros(n + 1, dtype=np.int64)
    a[0] = n
    k = 0
    count = 0
    lg = np.zeros(n + 2, dtype=np.float64)
    for i in range(1, n + 2):
        lg[i] = lg[i - 1] + np.log(i)  # lg[i] = log(i!)
    best_log_wm = -1.0
    best_count_at = -1
    mk = np.zeros(n + 1, dtype=np.int64)
    while True:
        count += 1
        # degeneracy profile of current partition a[0..k]
        for i in range(n + 1):
            mk[i] = 0
        m = k + 1
        for i in range(m):
            mk[a[i]] += 1
        log_wm = lg[m]
        for v in range(1, n + 1):
            if mk[v] > 1:
                log_wm -= lg[mk[v]]
        if log_wm > best_log_wm:
            best_log_wm = log_wm
            best_count_at = count
        ones = 0
        while k >= 0 and a[k] == 1:
            ones += 1
            k -= 1
        if k < 0:
            return count, best_log_wm, best_count_at
        x = a[k] - 1
        total = a[k] + ones
        a[k] = x
        while total > 2 * x:
            total -= x
            k += 1
            a[k] = x
        k += 1
        a[k] = total - x
        if a[k] == 0:
            k -= 1


def most_numerous_profile(n: int):
    """Partition of n maximising log W_m, with the partition count as a bonus.

    Returns (parts, log_wm, n_partitions).  Uses the jitted walk to find the
    index of the maximiser, then a second pure-python walk to materialise it.
    """
    if n < 1:
        raise BadArgument("n must be positive")
    if n > PARTITION_N_MAX:
        raise TooLarge(f"partition enumeration limited to n <= {PARTITION_N_MAX}")
    count, best_log_wm, best_at = _partition_walk_stats(n)
    for i, parts in enumerate(iter_partitions(n), start=1):
        if i == best_at:
            return parts, best_log_wm, count
    raise AssertionError("unreachable")


def rr_density(n: int, n_bins: int = 60):
    """Histogram of partitions of n over the (resolution, relevance) square.

    Entropies are in base N (unit square).  Returns (res_edges, rel_edges,
    counts[nb, nb]) where counts[i, j] tallies partitions with resolution in
    bin i and relevance in bin j.
    """
    if n < 2:
        raise BadArgument("n must be at least 2")
    if n > PARTITION_N_MAX:
        raise TooLarge(f"partition enumeration limited to n <= {PARTITION_N_MAX}")
    edges = np.linspace(0.0, 1.0, n_bins + 1)
    counts = _rr_density_walk(n, n_bins)
    return edges, edges, counts


@njit(cache=True)
def _rr_density_walk(n, n_bins):
    a = np.zeros(n + 1, dtype=np.int64)
    a[0] = n
    k = 0
    logn = np.log(n)
    counts = np.zeros((n_bins, n_bins), dtype=np.int64)
    mk = np.zeros(n + 1, dtype=np.int64)
    while True:
        for i in range(n + 1):
            mk[i] = 0
        for i in range(k + 1):
            mk[a[i]] += 1
        res = 0.0
        rel = 0.0
        for v in range(1, n + 1):
            if mk[v] > 0:
                f = v / n
                res -= mk[v] * f * np.log(f)
                g = v * mk[v] / n
                rel -= g * np.log(g)
        if n > 1:
            res /= logn
            rel /= logn
        bi = min(int(res * n_bins), n_bins - 1)
        bj = min(int(rel * n_bins), n_bins - 1)
        counts[bi, bj] += 1
        ones = 0
        while k >= 0 and a[k] == 1:
            ones += 1
            k -= 1
        if k < 0:
            return counts
        x = a[k] - 1
        total = a[k] + ones
        a[k] = x
        while total > 2 * x:
            total -= x
            k += 1
            a[k] = x
        k += 1
        a[k] = total - x
        if a[k] == 0:
            k -= 1
