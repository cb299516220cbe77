"""Large deviations of resolution under a Dirichlet-tilted sampling ensemble.

Given an observed frequency vector k over M states (unobserved states carry
k = 0 and prior weight a), generated samples q of size N' are distributed as

    P_beta(q) ∝ prod_s Gamma(k_s + q_s + a) / Gamma(k_s + a) * exp(beta N' H_q[s])

where H_q[s] is the plug-in resolution of q.  beta = 0 is the plain
posterior-predictive ensemble and admits an exact Polya-urn sampler used as
the MCMC oracle; beta < 0 tilts toward low-resolution (mode-collapsed)
samples and beta > 0 toward high-resolution ones.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from ._seeds import derive_seed
from .errors import BadArgument
from .sample_core import FrequencyProfile

_BLOCK = 1 << 16
_N_BATCHES = 30


def _batch_se(x: np.ndarray) -> float:
    """Batch-means standard error, robust to the chain's autocorrelation."""
    if x.size < 2:
        return 0.0
    nb = min(_N_BATCHES, x.size)
    bs = x.size // nb
    means = x[: nb * bs].reshape(nb, bs).mean(axis=1)
    return float(means.std(ddof=1) / math.sqrt(nb))


@dataclass(frozen=True)
class LDTConfig:
    n_prime: int
    m: int
    a: float = 1.0
    beta: float = 0.0
    sweeps: int = 1_000_000
    burnin: int = 100_000
    thin: int = 100
    seed: int = 0

    def __post_init__(self):
        if self.a <= 0 or self.n_prime < 1 or self.m < 1:
            raise BadArgument("need a > 0, n_prime >= 1, m >= 1")
        if self.sweeps <= self.burnin or self.thin < 1:
            raise BadArgument("need sweeps > burnin and thin >= 1")


@dataclass(frozen=True)
class ChainResult:
    beta: float
    hq_s: np.ndarray  # resolution at each emission, nats
    hq_k: np.ndarray  # relevance at each emission, nats
    acceptance: float
    q_trace: tuple | None = None  # per-emission count tuples when requested

    @property
    def mean_hq_s(self) -> float:
        return float(self.hq_s.mean())

    @property
    def mean_hq_k(self) -> float:
        return float(self.hq_k.mean())

    @property
    def se_hq_s(self) -> float:
        return _batch_se(self.hq_s)

    @property
    def se_hq_k(self) -> float:
        return _batch_se(self.hq_k)


@dataclass(frozen=True)
class SweepResult:
    records: tuple  # ChainResult per beta, in input order
    n_prime: int
    m: int


def observed_counts(freq: FrequencyProfile | dict, m: int) -> np.ndarray:
    """Dense k vector over M states: observed counts (descending, for a
    deterministic layout) padded with zeros for the unobserved pool."""
    counts = freq.counts if isinstance(freq, FrequencyProfile) else dict(freq)
    values = sorted((int(c) for c in counts.values()), reverse=True)
    if len(values) > m:
        raise BadArgument(f"M={m} smaller than the {len(values)} observed states")
    k = np.zeros(m, dtype=np.int64)
    k[: len(values)] = values
    return k


def posterior_predictive_sample(
    freq: FrequencyProfile | dict, config: LDTConfig
) -> np.ndarray:
    """Exact beta=0 draw by the Polya urn: each new observation lands on
    state s with weight k_s + q_s(so far) + a.

    Implemented with a token pool: with probability (N+t)/(N+t+aM) copy a
    uniformly chosen existing token, otherwise pick a state uniformly.
    """
    k = observed_counts(freq, config.m)
    n = int(k.sum())
    rng = np.random.default_rng(config.seed)
    tokens = np.repeat(np.arange(config.m), k).tolist()
    am = config.a * config.m
    out = []
    for t in range(config.n_prime):
        pool = n + t
        if rng.random() * (pool + am) < pool:
            s = tokens[int(rng.integers(0, pool))]
        else:
            s = int(rng.integers(0, config.m))
        tokens.append(s)
        out.append(s)
    return np.asarray(out, dtype=np.int64)


def log_weight(q: Sequence[int], k: Sequence[int], a: float, beta: float) -> float:
    """Unnormalised log P_beta(q), recomputed from scratch (test oracle)."""
    q = np.asarray(q, dtype=np.int64)
    k = np.asarray(k, dtype=np.int64)
    n_prime = int(q.sum())
    lg = sum(
        math.lgamma(ks + qs + a) - math.lgamma(ks + a) for ks, qs in zip(k, q)
    )
    pos = q[q > 0]
    hq_s = math.log(n_prime) - float(np.sum(pos * np.log(pos))) / n_prime
    return lg + beta * n_prime * hq_s


def _relevance_of_counts(q: np.ndarray, n_prime: int) -> float:
    pos = q[q > 0]
    ks, mks = np.unique(pos, return_counts=True)
    mass = ks * mks / n_prime
    return float(-np.sum(mass * np.log(mass)))


def _initial_counts(freq, config: LDTConfig, init: str) -> np.ndarray:
    if init == "urn":
        draw = posterior_predictive_sample(
            freq, replace(config, seed=derive_seed(config.seed, 0))
        )
        return np.bincount(draw, minlength=config.m).astype(np.int64)
    if init == "input":
        k = observed_counts(freq, config.m)
        n = int(k.sum())
        # resize the input profile to N' by stochastic rounding of q = k*N'/N
        scaled = k * (config.n_prime / n)
        q = np.floor(scaled).astype(np.int64)
        rem = int(config.n_prime - q.sum())
        if rem > 0:
            frac = scaled - np.floor(scaled)
            order = np.lexsort((np.arange(config.m), -frac))
            q[order[:rem]] += 1
        return q
    raise BadArgument(f"unknown init {init!r}")


def mcmc_tilted_chain(
    freq: FrequencyProfile | dict,
    config: LDTConfig,
    keep_q: bool = False,
    init: str = "urn",
) -> ChainResult:
    """Metropolis chain over generated samples: one uniformly chosen
    observation is reassigned to a uniformly chosen state per step.

    The acceptance ratio touches only the two modified states,
    (k_j + q_j + a)/(k_s + q_s - 1 + a) * exp(-beta * dS) with S = sum q ln q,
    since beta N' dH_q[s] = -beta dS.
    """
    k_arr = observed_counts(freq, config.m)
    n_prime, m, a, beta = config.n_prime, config.m, config.a, config.beta
    q0 = _initial_counts(freq, config, init)
    obs = np.repeat(np.arange(m), q0).tolist()
    q = q0.tolist()
    k = k_arr.tolist()
    xlogx = [0.0] + [i * math.log(i) for i in range(1, n_prime + 1)]
    s_tot = sum(xlogx[qi] for qi in q)
    log_np = math.log(n_prime)

    rng = np.random.default_rng(derive_seed(config.seed, 1))
    emit_s, emit_k, traces = [], [], []
    accepted = 0
    step = 0
    sweeps, burnin, thin = config.sweeps, config.burnin, config.thin
    while step < sweeps:
        nblk = min(_BLOCK, sweeps - step)
        idxs = rng.integers(0, n_prime, size=nblk).tolist()
        js = rng.integers(0, m, size=nblk).tolist()
        us = rng.random(size=nblk).tolist()
        for i, j, u in zip(idxs, js, us):
            step += 1
            s0 = obs[i]
            if j != s0:
                qj, qs = q[j], q[s0]
                ds = xlogx[qj + 1] - xlogx[qj] + xlogx[qs - 1] - xlogx[qs]
                ratio = (k[j] + qj + a) / (k[s0] + qs - 1 + a) * math.exp(-beta * ds)
                if u < ratio:
                    obs[i] = j
                    q[j] = qj + 1
                    q[s0] = qs - 1
                    s_tot += ds
                    accepted += 1
            else:
                accepted += 1
            if step > burnin and (step - burnin) % thin == 0:
                q_np = np.asarray(q, dtype=np.int64)
                emit_s.append(log_np - s_tot / n_prime)
                emit_k.append(_relevance_of_counts(q_np, n_prime))
                if keep_q:
                    traces.append(tuple(q))
    return ChainResult(
        beta=beta,
        hq_s=np.asarray(emit_s),
        hq_k=np.asarray(emit_k),
        acceptance=accepted / sweeps,
        q_trace=tuple(traces) if keep_q else None,
    )


def _chain_worker(args):
    counts, config = args
    return mcmc_tilted_chain(counts, config)


def worker_count(n_tasks: int) -> int:
    cap = os.environ.get("RELAB_THREADS")
    limit = int(cap) if cap else (os.cpu_count() or 1)
    return max(1, min(n_tasks, limit))


def beta_sweep(
    freq: FrequencyProfile | dict, config: LDTConfig, betas: Sequence[float]
) -> SweepResult:
    """One independent chain per beta; chain i runs with seed derived from
    (config.seed, i), so results do not depend on scheduling."""
    betas = [float(b) for b in betas]
    if not betas or not all(math.isfinite(b) for b in betas):
        raise BadArgument("betas must be non-empty and finite")
    counts = freq.counts if isinstance(freq, FrequencyProfile) else dict(freq)
    jobs = [
        (counts, replace(config, beta=b, seed=derive_seed(config.seed, 1000 + i)))
        for i, b in enumerate(betas)
    ]
    workers = worker_count(len(jobs))
    if workers == 1:
        records = [_chain_worker(job) for job in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(_chain_worker, jobs))
    return SweepResult(records=tuple(records), n_prime=config.n_prime, m=config.m)


@dataclass(frozen=True)
class Transition:
    beta_c: float | None
    kind: str  # continuous | discontinuous | none


def detect_transition(sweep: SweepResult) -> Transition:
    """Classify the sweep: a jump in mean resolution larger than 5 local
    standard errors and 0.2 ln N' marks a discontinuous transition; an
    interior maximum of mean relevance without such a jump is continuous."""
    recs = sorted(sweep.records, key=lambda r: r.beta)
    if len(recs) < 5:
        raise BadArgument("need at least 5 beta points")
    means = np.array([r.mean_hq_s for r in recs])
    ses = np.array([r.se_hq_s for r in recs])
    jumps = np.abs(np.diff(means))
    local_se = np.sqrt(ses[:-1] ** 2 + ses[1:] ** 2)
    i = int(np.argmax(jumps))
    threshold = 0.2 * math.log(sweep.n_prime)
    if jumps[i] > 5 * max(local_se[i], 1e-300) and jumps[i] > threshold:
        return Transition(beta_c=0.5 * (recs[i].beta + recs[i + 1].beta), kind="discontinuous")
    rel = np.array([r.mean_hq_k for r in recs])
    j = int(np.argmax(rel))
    if 0 < j < len(recs) - 1:
        return Transition(beta_c=recs[j].beta, kind="continuous")
    return Transition(beta_c=None, kind="none")
