"""Optimal learning machines and random-energy-model simulations.

An optimal learning machine groups states into classes c of size W_c and
assigns every state in class c the coding cost E_c = E0 + (1/mu) ln W_c,
i.e. an exponential density of states with exponent mu.  Normalisation fixes
E0 = ln sum_c W_c^(1 - 1/mu) in closed form.

The random-energy analysis clamps the internal state of a machine whose
log-probabilities u_s and environment scores v_t are iid stretched
exponentials, P(x > t) = exp(-(t/Delta)^gamma).  The clamped-state
distribution is Gibbs, q(s) = exp(beta u_s)/Z with beta = Delta_t*/Delta_t
and Delta_t* = gamma_t (n_t ln 2)^(1 - 1/gamma_t).
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from numba import njit

from ._seeds import derive_seed
from .errors import BadArgument, NumericalFailure, TooLarge

_STATE_CAP = 1 << 22
LN2 = math.log(2.0)


# ---------------------------------------------------------------- OLM ----


@dataclass(frozen=True)
class OLMSpec:
    class_sizes: tuple

    def __init__(self, class_sizes: Sequence[int]):
        sizes = tuple(int(w) for w in class_sizes)
        if not sizes or any(w < 1 for w in sizes):
            raise BadArgument("need at least one class, all sizes >= 1")
        object.__setattr__(self, "class_sizes", sizes)


def pow2_spec(c: int) -> OLMSpec:
    """W_c = 2^c for c = 0..C-1."""
    return OLMSpec([2**i for i in range(c)])


@dataclass(frozen=True)
class OLMSolution:
    e0: float
    mu: float
    e_c: tuple
    p_c: tuple  # total class probabilities W_c e^{-E_c}
    resolution: float  # H[s]
    noise: float  # H[s|E]
    relevance: float  # H[E]


def olm_optimal_costs(spec: OLMSpec, mu: float) -> OLMSolution:
    """Costs E_c = E0 + (1/mu) ln W_c with E0 from normalisation.

    sum_c W_c e^{-E_c} = e^{-E0} sum_c W_c^{1-1/mu} = 1 gives
    E0 = logsumexp((1 - 1/mu) ln W_c) directly.
    """
    if mu <= 0:
        raise BadArgument("mu must be positive")
    log_w = np.log(np.asarray(spec.class_sizes, dtype=np.float64))
    exponents = (1.0 - 1.0 / mu) * log_w
    hi = exponents.max()
    e0 = hi + math.log(np.sum(np.exp(exponents - hi)))
    if not math.isfinite(e0):
        raise NumericalFailure(f"normalisation overflow at mu={mu}")
    e_c = e0 + log_w / mu
    log_p = log_w - e_c  # ln(W_c e^{-E_c})
    p_c = np.exp(log_p)
    resolution = float(np.sum(p_c * e_c))
    noise = float(np.sum(p_c * log_w))
    relevance = float(-np.sum(p_c * log_p))
    return OLMSolution(
        e0=float(e0),
        mu=float(mu),
        e_c=tuple(e_c.tolist()),
        p_c=tuple(p_c.tolist()),
        resolution=resolution,
        noise=noise,
        relevance=relevance,
    )


def olm_entropy_energy_curve(spec: OLMSpec, mu_grid: Sequence[float]) -> tuple:
    """(resolution H[s], noise H[s|E]) per mu, sorted by resolution."""
    pts = [olm_optimal_costs(spec, float(mu)) for mu in mu_grid]
    return tuple(sorted(((s.resolution, s.noise) for s in pts)))


def specific_heat_curve(
    spec: OLMSpec, mu: float, beta_ratio_grid: Sequence[float]
) -> tuple:
    """(beta'/beta, C) with C = (beta'/beta)^2 Var(E) under the reweighted
    distribution p_c(r) ∝ W_c e^{-r E_c}."""
    sol = olm_optimal_costs(spec, mu)
    e_c = np.asarray(sol.e_c)
    log_w = np.log(np.asarray(spec.class_sizes, dtype=np.float64))
    out = []
    for r in beta_ratio_grid:
        r = float(r)
        logits = log_w - r * e_c
        logits -= logits.max()
        p = np.exp(logits)
        p /= p.sum()
        mean = np.sum(p * e_c)
        var = np.sum(p * (e_c - mean) ** 2)
        out.append((r, float(r * r * var)))
    return tuple(out)


# ------------------------------------------------- model enumeration ----


@dataclass(frozen=True)
class ModelRR:
    h_s: float
    h_e: float
    delta: float


def model_relevance(energies: Sequence[float], delta: float = 0.1) -> ModelRR:
    """Exact H[s] and binned H[E] of a model given per-state energies.

    p(s) ∝ e^{-E_s}; coding costs -ln p are binned at width delta for H[E].
    """
    e = np.asarray(energies, dtype=np.float64)
    if e.size > _STATE_CAP:
        raise TooLarge(f"more than {_STATE_CAP} states")
    if e.size == 0 or not np.all(np.isfinite(e)) or delta <= 0:
        raise BadArgument("need finite energies and delta > 0")
    # normalize: coding cost E' = E + ln Z with Z = sum e^{-E}
    neg = -e
    hi = neg.max()
    log_z = hi + math.log(np.sum(np.exp(neg - hi)))
    cost = e + log_z
    p = np.exp(-cost)
    h_s = float(np.sum(p * cost))
    bins = np.floor(cost / delta).astype(np.int64)
    bins -= bins.min()
    mass = np.bincount(bins, weights=p)
    mass = mass[mass > 0]
    h_e = float(-np.sum(mass * np.log(mass)))
    return ModelRR(h_s=h_s, h_e=h_e, delta=float(delta))


def pairwise_couplings(n: int, kind: str, l: int = 0) -> np.ndarray:
    """Sign patterns of fully connected pairwise couplings J_ij (|J| = 1).

    ferromagnetic: all positive; star(l): pairs (0, j) with j <= l negative;
    nested: pairs with i + j <= n/2 negative (1-based indices).
    """
    if n < 2:
        raise BadArgument("need at least 2 spins")
    j = np.ones((n, n))
    if kind == "star":
        if not 1 <= l <= n - 1:
            raise BadArgument("star size l must be in 1..n-1")
        for col in range(1, l + 1):
            j[0, col] = j[col, 0] = -1.0
    elif kind == "nested":
        for a in range(n):
            for b in range(a + 1, n):
                if (a + 1) + (b + 1) <= n / 2:
                    j[a, b] = j[b, a] = -1.0
    elif kind != "ferromagnetic":
        raise BadArgument(f"unknown coupling pattern {kind!r}")
    np.fill_diagonal(j, 0.0)
    return j


def pairwise_energies(couplings: np.ndarray, strength: float = 1.0) -> np.ndarray:
    """E(s) = -strength * sum_{i<j} J_ij s_i s_j over all 2^n spin states."""
    j = np.asarray(couplings, dtype=np.float64)
    n = j.shape[0]
    if j.shape != (n, n) or 2**n > _STATE_CAP:
        raise TooLarge("coupling matrix too large to enumerate")
    out = np.empty(2**n)
    chunk = 1 << 14
    for start in range(0, 2**n, chunk):
        idx = np.arange(start, min(start + chunk, 2**n), dtype=np.int64)
        spins = ((idx[:, None] >> np.arange(n)) & 1) * 2.0 - 1.0
        out[start : start + idx.size] = -0.5 * strength * np.einsum(
            "bi,ij,bj->b", spins, j, spins
        )
    return out


# ---------------------------------------------------------------- REM ----


@dataclass(frozen=True)
class REMConfig:
    n_s: int
    n_t: int
    gamma_s: float
    gamma_t: float
    delta_s: float
    delta_t: float
    replicas: int = 1000
    seed: int = 0
    mode: str = "evt"

    def __post_init__(self):
        if min(self.gamma_s, self.gamma_t, self.delta_s, self.delta_t) <= 0:
            raise BadArgument("gamma and delta parameters must be positive")
        if self.n_s < 1 or self.n_t < 0 or self.replicas < 1:
            raise BadArgument("need n_s >= 1, n_t >= 0, replicas >= 1")
        if self.mode not in ("empirical", "evt"):
            raise BadArgument(f"unknown mode {self.mode!r}")
        if self.mode == "empirical" and self.n_s > 22:
            raise TooLarge("empirical mode limited to n_s <= 22")


@dataclass(frozen=True)
class REMResult:
    h_s_star: float
    h_u: float
    beta_effective: float
    q_hat: np.ndarray
    ties: int


def rem_critical_params(n_t: int, gamma_t: float, delta_t: float) -> tuple:
    """(Delta_t*, beta) with Delta_t* = gamma_t (n_t ln2)^{1-1/gamma_t}."""
    if gamma_t <= 0 or delta_t <= 0 or n_t < 0:
        raise BadArgument("arguments must be positive (n_t >= 0)")
    delta_star = gamma_t * (n_t * LN2) ** (1.0 - 1.0 / gamma_t) if n_t > 0 else gamma_t
    return float(delta_star), float(delta_star / delta_t)


def stretched_exponential(
    gamma: float, delta: float, count: int, rng: np.random.Generator
) -> np.ndarray:
    """Draws with survival function exp(-(x/delta)^gamma) via inverse CDF."""
    u = rng.random(count)
    return delta * (-np.log1p(-u)) ** (1.0 / gamma)


def sample_extreme_value(
    n_t: int, gamma_t: float, delta_t: float, count: int, seed: int
) -> np.ndarray:
    """Max of 2^{n_t} iid stretched exponentials by exact inverse CDF.

    With u uniform, the max solves F(x)^{2^{n_t}} = u, so
    x = delta_t (-ln(-expm1(2^{-n_t} ln u)))^{1/gamma_t}; the expm1/log pair
    keeps precision when 2^{-n_t} ln u underflows toward 0.
    """
    rng = np.random.default_rng(seed)
    u = rng.random(count)
    t = np.log(u) * 2.0 ** (-n_t)
    return delta_t * (-np.log(-np.expm1(t))) ** (1.0 / gamma_t)


@njit(cache=True)
def _empirical_counts(u, scale, gamma_t, delta_t, replicas, seed):
    """Tally argmax_s(u_s + v_s) over replicas; v_s fresh per replica via the
    inverse-CDF maximum with pre-scaled exponent (scale = 2^{-n_t})."""
    np.random.seed(seed)
    m = u.size
    counts = np.zeros(m, dtype=np.int64)
    ties = 0
    inv_g = 1.0 / gamma_t
    for _ in range(replicas):
        best = -1e300
        best_i = 0
        tied = 0
        for s in range(m):
            t = scale * np.log(np.random.random())
            v = delta_t * (-np.log(-np.expm1(t))) ** inv_g
            val = u[s] + v
            if val > best:
                best = val
                best_i = s
                tied = 0
            elif val == best:
                tied += 1
        counts[best_i] += 1
        ties += tied
    return counts, ties


def _empirical_chunk(args):
    u, scale, gamma_t, delta_t, replicas, seed = args
    return _empirical_counts(u, scale, gamma_t, delta_t, replicas, seed)


def _entropy_of(q: np.ndarray) -> float:
    pos = q[q > 0]
    return float(-np.sum(pos * np.log(pos)))


def _h_u_discretized(u: np.ndarray, q: np.ndarray, delta: float = 0.1) -> float:
    bins = np.floor(u / delta).astype(np.int64)
    bins -= bins.min()
    mass = np.bincount(bins, weights=q)
    return _entropy_of(mass)


def quenched_log_probs(config: REMConfig) -> np.ndarray:
    """The machine's log-probabilities u_s, drawn once per seed (quenched)."""
    if 2**config.n_s > _STATE_CAP:
        raise TooLarge("explicit u draw limited to the enumeration cap")
    rng = np.random.default_rng(derive_seed(config.seed, 0))
    return stretched_exponential(config.gamma_s, config.delta_s, 2**config.n_s, rng)


_TAIL_K = 512
_BULK_GRID = 200_000


def _evt_tail_result(config: REMConfig) -> REMResult:
    """Gibbs entropies for state spaces too large to enumerate.

    The top _TAIL_K order statistics of the 2^{n_s} quenched draws are
    sampled exactly through the Renyi spacing chain on y = (u/delta_s)^gamma
    (y_max = n_s ln2 + Gumbel, then y_(i+1) = y_(i) - Exp/i); the remaining
    bulk contributes through its expected density m e^{-y} dy, which
    concentrates at this depth.  All sums run in log space.
    """
    rng = np.random.default_rng(derive_seed(config.seed, 0))
    ln_m = config.n_s * LN2
    _, beta = rem_critical_params(config.n_t, config.gamma_t, config.delta_t)
    inv_g = 1.0 / config.gamma_s
    y_top = np.empty(_TAIL_K)
    y = ln_m + rng.gumbel()
    for i in range(_TAIL_K):
        y_top[i] = y
        y -= rng.exponential() / (i + 1)
        if y <= 0:  # tiny state spaces only; caller enumerates those
            y_top = y_top[: i + 1]
            break
    u_top = config.delta_s * np.maximum(y_top, 0.0) ** inv_g
    y_cut = float(y_top[-1])
    grid = np.linspace(y_cut * 1e-9, y_cut, _BULK_GRID)
    u_grid = config.delta_s * grid**inv_g
    ln_density = ln_m - grid + beta * u_grid  # ln of m f(y) e^{beta u}
    dy = grid[1] - grid[0]
    # trapezoid weights in log space
    ln_w = ln_density + math.log(dy)
    ln_w[0] -= LN2
    ln_w[-1] -= LN2
    ln_terms = np.concatenate([beta * u_top, ln_w])
    hi = ln_terms.max()
    z_rel = np.exp(ln_terms - hi)
    ln_z = hi + math.log(z_rel.sum())
    q_all = z_rel / z_rel.sum()
    u_all = np.concatenate([u_top, u_grid])
    mean_u = float(np.sum(q_all * u_all))
    h_s_star = ln_z - beta * mean_u
    bins = np.floor(u_all / 0.1).astype(np.int64)
    bins -= bins.min()
    mass = np.bincount(bins, weights=q_all)
    return REMResult(
        h_s_star=float(h_s_star),
        h_u=_entropy_of(mass),
        beta_effective=float(beta),
        q_hat=q_all[: u_top.size],
        ties=0,
    )


def rem_simulate(config: REMConfig) -> REMResult:
    """Clamped-state distribution and its entropies.

    evt mode: exact Gibbs q(s) = e^{beta u_s}/Z.  empirical mode: per replica
    draw the environment maxima v_s and record argmax_s(u_s + v_s); ties go
    to the lowest state index and are counted.
    """
    if config.mode == "evt" and 2**config.n_s > _STATE_CAP:
        return _evt_tail_result(config)
    u = quenched_log_probs(config)
    _, beta = rem_critical_params(config.n_t, config.gamma_t, config.delta_t)
    if config.mode == "evt":
        logits = beta * u
        logits -= logits.max()
        q = np.exp(logits)
        q /= q.sum()
        ties = 0
    else:
        from .large_dev import worker_count

        workers = worker_count(config.replicas)
        per = -(-config.replicas // max(workers * 4, 1))
        jobs = []
        done = 0
        i = 0
        scale = 2.0 ** (-config.n_t)
        while done < config.replicas:
            take = min(per, config.replicas - done)
            jobs.append(
                (u, scale, config.gamma_t, config.delta_t, take,
                 derive_seed(config.seed, 1 + i) % (2**32))
            )
            done += take
            i += 1
        if workers == 1 or len(jobs) == 1:
            results = [_empirical_chunk(job) for job in jobs]
        else:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                results = list(pool.map(_empirical_chunk, jobs))
        counts = np.sum([r[0] for r in results], axis=0)
        ties = int(sum(r[1] for r in results))
        q = counts / counts.sum()
    return REMResult(
        h_s_star=_entropy_of(q),
        h_u=_h_u_discretized(u, q),
        beta_effective=beta,
        q_hat=q,
        ties=ties,
    )


def critical_nu(gamma: float, delta_ratio: float) -> float:
    """Phase boundary in nu = n_t/n_s at fixed delta_ratio = Delta_s/Delta_t:
    (Delta_s/Delta_t)^{gamma/(1-gamma)} for gamma > 1 (localised above nu*),
    (gamma Delta_s/Delta_t)^{gamma/(1-gamma)} for gamma < 1 (localised below).
    """
    if gamma == 1.0:
        raise BadArgument("nu* is undefined at gamma = 1 (boundary degenerates)")
    base = delta_ratio if gamma > 1.0 else gamma * delta_ratio
    return float(base ** (gamma / (1.0 - gamma)))


def rem_phase_diagram(
    gamma: float,
    ratio_grid: Sequence[float],
    nu_grid: Sequence[float],
    n_s: int,
    replicas: int = 1000,
    seed: int = 0,
    mode: str = "evt",
) -> dict:
    """Grid of H[s*]/(n_s ln2) over (Delta_s/Delta_t, nu) plus the closed-form
    boundary nu* per ratio (None at gamma = 1)."""
    grid = np.empty((len(ratio_grid), len(nu_grid)))
    for i, ratio in enumerate(ratio_grid):
        for j, nu in enumerate(nu_grid):
            config = REMConfig(
                n_s=n_s,
                n_t=max(int(round(nu * n_s)), 0),
                gamma_s=gamma,
                gamma_t=gamma,
                delta_s=float(ratio),
                delta_t=1.0,
                replicas=replicas,
                seed=derive_seed(seed, i * len(nu_grid) + j),
                mode=mode,
            )
            grid[i, j] = rem_simulate(config).h_s_star / (n_s * LN2)
    boundary = None
    if gamma != 1.0:
        boundary = [critical_nu(gamma, float(r)) for r in ratio_grid]
    return {
        "ratios": [float(r) for r in ratio_grid],
        "nus": [float(v) for v in nu_grid],
        "h_fraction": grid,
        "nu_star": boundary,
    }
