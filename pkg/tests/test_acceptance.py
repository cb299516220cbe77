"""End-to-end acceptance checks, one test per guarantee.

Each test prints a single PASS/FAIL line (visible with pytest -s or -rA) in
addition to its assertions.  The heavyweight ensemble sweeps reuse the frozen
fixtures from conftest and fixed seeds, so reruns are bit-reproducible.
"""

import io
import itertools
import math
import time
from collections import Counter

import numpy as np
import pytest

from relab import (
    LDTConfig,
    REMConfig,
    Sample,
    agglomerate,
    beta_sweep,
    build_degeneracy,
    build_frequency,
    count_partitions,
    critical_nu,
    cut_at_k,
    detect_transition,
    entropy_summary,
    exact_counts,
    fit_exponent,
    frontier_relevance_at,
    kl_posterior_prior,
    log_evidence,
    param_bound,
    mcmc_tilted_chain,
    posterior_predictive_sample,
    rem_simulate,
    rr_trajectory,
    specific_heat_curve,
)
from relab._seeds import derive_seed
from relab.cli import run as cli_run
from relab.combinatorics import _partition_walk_stats
from relab.frontier import (
    default_mu_grid,
    local_slope,
    mean_profile,
    profile_entropies,
)
from relab.inference_bounds import GaussianPosteriorSummary
from relab.olm_rem import LN2, olm_entropy_energy_curve, pow2_spec
from relab.sample_core import degeneracy_from_counts, summary_of_degeneracy

BETA_GRID = [round(-0.5 + 0.05 * i, 2) for i in range(21)]


def _report(name, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}"
    print(line)
    assert ok, line


def test_entropy_identity_suite():
    rng = np.random.default_rng(20260826)
    t0 = time.time()
    worst = 0.0
    for _ in range(10_000):
        n = int(rng.integers(1, 1001))
        s = int(rng.integers(1, 1001))
        counts = np.bincount(rng.integers(0, s, size=n))
        summ = summary_of_degeneracy(degeneracy_from_counts(counts))
        err = abs(summ.resolution - (summ.relevance + summ.noise))
        worst = max(worst, err)
        ok_bounds = (
            -1e-12 <= summ.relevance <= summ.resolution + 1e-12
            and summ.resolution <= math.log(n) + 1e-12
        )
        assert ok_bounds
    elapsed = time.time() - t0
    _report(
        "entropy identity suite",
        worst < 1e-12 and elapsed < 10.0,
        f"max identity error {worst:.2e} nats over 10^4 samples, {elapsed:.1f}s",
    )


def test_counting_oracle():
    t0 = time.time()
    checked = 0
    for n in range(1, 9):
        for n_states in range(1, 5):
            seqs = {}
            coarse = {}
            for obs in itertools.product(range(n_states), repeat=n):
                freq = Counter(obs)
                if len(freq) != n_states:
                    continue  # counted under the smaller alphabet
                profile = tuple(sorted(Counter(freq.values()).items()))
                seqs[profile] = seqs.get(profile, 0) + 1
                coarse.setdefault(profile, set()).add(tuple(freq[x] for x in obs))
            for profile, n_seq in seqs.items():
                deg = dict(profile)
                got = exact_counts(deg, n)
                assert n_seq == got.ws * got.wm  # W_m frequency assignments
                assert len(coarse[profile]) == got.wk
                assert got.ws_given_k * got.wk == got.ws
                checked += 1
    walked = _partition_walk_stats(100)[0]
    assert walked == count_partitions(100) == 190_569_292
    elapsed = time.time() - t0
    _report(
        "counting oracle",
        elapsed < 120.0,
        f"{checked} profiles vs enumeration exact; p(100)={walked:,} enumerated, "
        f"{elapsed:.1f}s",
    )


def test_frontier_zipf_optimality():
    t0 = time.time()
    n = 1000
    grid = default_mu_grid()
    totals = []
    for mu in grid:
        p = profile_entropies(mean_profile(n, float(mu)), n)
        totals.append(p.resolution + p.relevance)
    i = int(np.argmax(totals))
    peak_ok = grid[max(i - 1, 0)] <= 1.0 <= grid[min(i + 1, len(grid) - 1)]
    rng = np.random.default_rng(7)
    worst_gain = -np.inf
    k = np.arange(1, n + 1)
    for mu in (0.5, 1.0, 2.0):
        base = mean_profile(n, mu)
        for _ in range(200):
            pert = np.clip(base * (1 + rng.normal(scale=0.05, size=n)), 1e-12, None)
            pert *= n / np.sum(k * pert)
            q = profile_entropies(pert, n)
            worst_gain = max(
                worst_gain, q.relevance - frontier_relevance_at(n, q.resolution)
            )
    elapsed = time.time() - t0
    _report(
        "frontier Zipf optimality",
        peak_ok and worst_gain < 1e-6 and elapsed < 60.0,
        f"peak at mu={grid[i]:.4f} (one grid step from 1), worst perturbation "
        f"gain {worst_gain:.1e} nats, {elapsed:.1f}s",
    )


def test_iris_reproduction(iris_data):
    t0 = time.time()
    dend_c = agglomerate(iris_data, linkage="complete", metric="L2")
    dend_s = agglomerate(iris_data, linkage="single", metric="L2")
    traj_c = rr_trajectory(dend_c)
    traj_s = rr_trajectory(dend_s)
    # dominance on binned means over the shared resolution range
    res_c = np.array([p.resolution for p in traj_c])
    rel_c = np.array([p.relevance for p in traj_c])
    res_s = np.array([p.resolution for p in traj_s])
    rel_s = np.array([p.relevance for p in traj_s])
    lo = max(res_c.min(), res_s.min())
    hi = min(res_c.max(), res_s.max())
    edges = np.linspace(lo, hi, 21)
    min_gap = np.inf
    for a, b in zip(edges, edges[1:]):
        in_c = (res_c >= a) & (res_c <= b)
        in_s = (res_s >= a) & (res_s <= b)
        if in_c.any() and in_s.any():
            min_gap = min(min_gap, rel_c[in_c].mean() - rel_s[in_s].mean())
    dominance_ok = min_gap > -0.01
    # exponent fits on the complete-linkage cuts
    targets = {103: 1.65, 83: 1.05, 60: 0.44}
    fit_ok = True
    fits = {}
    for k, target in targets.items():
        labels = cut_at_k(dend_c, k)
        deg = build_degeneracy(build_frequency(Sample(labels.tolist())))
        fits[k] = fit_exponent(deg).mu
        fit_ok &= abs(fits[k] - target) <= 0.2
    # local slope of -1 +- 0.3 at the K maximising resolution + relevance
    peak = max(traj_c, key=lambda p: p.resolution + p.relevance)
    mu_at_peak = local_slope(traj_c, peak.resolution, window=0.3)
    slope_ok = abs(mu_at_peak - 1.0) <= 0.3
    elapsed = time.time() - t0
    _report(
        "iris reproduction",
        dominance_ok and fit_ok and slope_ok and elapsed < 30.0,
        f"binned dominance min gap {min_gap:+.4f} nats; fits "
        f"{ {k: round(v, 3) for k, v in fits.items()} }; slope -{mu_at_peak:.2f} "
        f"at K={peak.k}; {elapsed:.1f}s",
    )


def _replicate_chain_means(counts, a, n_chains=16):
    # Independent beta=0 chains, each initialised from an exact urn draw
    # (hence stationary from the first sweep).  The between-chain spread
    # gives an honest standard error even in the slow-mixing a << 1 regime,
    # where within-chain batch means badly underestimate the error.
    hs, hk = [], []
    for i in range(n_chains):
        cfg = LDTConfig(
            n_prime=1338, m=2676, a=a,
            sweeps=1_001_000, burnin=1000, thin=1000,
            seed=derive_seed(4242, i),
        )
        result = mcmc_tilted_chain(counts, cfg)
        hs.append(result.mean_hq_s)
        hk.append(result.mean_hq_k)
    return (
        (np.mean(hs), np.std(hs, ddof=1) / math.sqrt(n_chains)),
        (np.mean(hk), np.std(hk, ddof=1) / math.sqrt(n_chains)),
    )


def _urn_oracle(counts, a, n_reps=600):
    hs, hk = [], []
    for rep in range(n_reps):
        cfg = LDTConfig(
            n_prime=1338, m=2676, a=a, sweeps=2, burnin=1,
            seed=derive_seed(99, rep),
        )
        draw = posterior_predictive_sample(counts, cfg)
        q = np.bincount(draw, minlength=2676)
        pos = q[q > 0].astype(float)
        hs.append(math.log(1338) - float(np.sum(pos * np.log(pos))) / 1338)
        ks, mks = np.unique(pos, return_counts=True)
        mass = ks * mks / 1338
        hk.append(float(-np.sum(mass * np.log(mass))))
    return (
        (np.mean(hs), np.std(hs, ddof=1) / math.sqrt(n_reps)),
        (np.mean(hk), np.std(hk, ddof=1) / math.sqrt(n_reps)),
    )


@pytest.mark.slow
def test_large_deviation_sweep(zipf_counts, uniform_counts):
    t0 = time.time()
    outcomes = {}
    oracle_ok = True
    for name, counts, a in (
        ("zipf", zipf_counts, 0.01),
        ("uniform", uniform_counts, 1.0),
    ):
        config = LDTConfig(
            n_prime=1338, m=2676, a=a,
            sweeps=11_000_000, burnin=1_000_000, thin=1000, seed=42,
        )
        sweep = beta_sweep(counts, config, BETA_GRID)
        assert all(len(r.hq_s) == 10_000 for r in sweep.records)
        outcomes[name] = detect_transition(sweep)
        (chs_m, chs_se), (chk_m, chk_se) = _replicate_chain_means(counts, a)
        (hs_m, hs_se), (hk_m, hk_se) = _urn_oracle(counts, a)
        for cm, cse, um, use in (
            (chs_m, chs_se, hs_m, hs_se),
            (chk_m, chk_se, hk_m, hk_se),
        ):
            oracle_ok &= abs(cm - um) <= 2.0 * math.hypot(cse, use)
    zipf_t, uni_t = outcomes["zipf"], outcomes["uniform"]
    zipf_ok = zipf_t.kind == "continuous" and abs(zipf_t.beta_c) <= 0.1
    uni_ok = uni_t.kind == "discontinuous" and uni_t.beta_c < 0.0
    elapsed = time.time() - t0
    _report(
        "large-deviation sweep",
        zipf_ok and uni_ok and oracle_ok and elapsed < 900.0,
        f"zipf {zipf_t.kind} at beta={zipf_t.beta_c}; uniform {uni_t.kind} at "
        f"beta_c={uni_t.beta_c}; beta=0 oracle within 2 SE: {oracle_ok}; "
        f"{elapsed:.0f}s",
    )


def test_olm_toy():
    t0 = time.time()
    spec = pow2_spec(20)
    peak_ok = True
    peaks = {}
    for mu in (0.5, 1.0, 2.0):
        grid = mu * np.arange(0.5, 2.01, 0.1)
        curve = specific_heat_curve(spec, mu, grid)
        r = np.array([p[0] for p in curve])
        c = np.array([p[1] for p in curve])
        peaks[mu] = float(r[int(np.argmax(c))])
        peak_ok &= abs(peaks[mu] - mu) <= 0.1 * mu + 1e-9
    mu_grid = np.geomspace(0.3, 4.0, 60)
    curve = olm_entropy_energy_curve(spec, mu_grid)
    res = np.array([p[0] for p in curve])
    noise = np.array([p[1] for p in curve])
    second = np.diff(np.diff(noise) / np.diff(res))
    convex_ok = bool(np.all(second >= -1e-9))
    # local slope dH[s|E]/dH[s] equals mu within 5 percent
    slope_ok = True
    sorted_mu = np.sort(mu_grid)
    for j in range(1, len(sorted_mu) - 1):
        mu_mid = sorted_mu[j]
        slope = (noise[j + 1] - noise[j - 1]) / (res[j + 1] - res[j - 1])
        slope_ok &= abs(slope - mu_mid) / mu_mid < 0.05
    elapsed = time.time() - t0
    _report(
        "OLM toy",
        peak_ok and convex_ok and slope_ok and elapsed < 5.0,
        f"specific-heat peaks at r/mu = { {m: round(p / m, 2) for m, p in peaks.items()} } "
        f"(one 0.1*mu step); curve convex; slope = mu within 5%; {elapsed:.1f}s",
    )


@pytest.mark.slow
def test_rem_phase_behavior():
    t0 = time.time()
    n_s = 1000
    # gamma = 2, delta_s = delta_t = 1 -> nu* = 1 and H/(n_s ln2) = 1 - nu/nu*
    gamma2_err = 0.0
    for frac in (0.25, 0.5, 0.75):
        r = rem_simulate(REMConfig(
            n_s=n_s, n_t=round(frac * n_s), gamma_s=2.0, gamma_t=2.0,
            delta_s=1.0, delta_t=1.0, seed=2, mode="evt",
        ))
        gamma2_err = max(gamma2_err, abs(r.h_s_star / (n_s * LN2) - (1.0 - frac)))
    gamma2_ok = gamma2_err < 0.05
    # gamma = 1 empirical vs Gibbs at n_s = 16, 1e5 replicas
    cfg = dict(n_s=16, n_t=30, gamma_s=1.0, gamma_t=1.0, delta_s=3.0, delta_t=1.0, seed=5)
    gibbs = rem_simulate(REMConfig(mode="evt", **cfg))
    emp = rem_simulate(REMConfig(mode="empirical", replicas=100_000, **cfg))
    tv = 0.5 * float(np.abs(gibbs.q_hat - emp.q_hat).sum())
    tv_ok = tv <= 0.02
    # sharpening of H[s*]/(n_s ln2) across n_s (quenched spread shrinks)
    spreads = []
    for ns in (12, 16, 20):
        vals = [
            rem_simulate(REMConfig(
                n_s=ns, n_t=round(1.875 * ns), gamma_s=1.0, gamma_t=1.0,
                delta_s=3.0, delta_t=1.0, seed=seed, mode="evt",
            )).h_s_star / (ns * LN2)
            for seed in range(100)
        ]
        spreads.append(float(np.std(vals, ddof=1)))
    sharpening_ok = spreads[0] > spreads[1] > spreads[2]
    # gamma = 1/2 jump across nu* = 0.25 at delta_s/delta_t = 0.5
    assert critical_nu(0.5, 0.5) == pytest.approx(0.25)
    h_lo = rem_simulate(REMConfig(
        n_s=n_s, n_t=200, gamma_s=0.5, gamma_t=0.5, delta_s=0.5, delta_t=1.0,
        seed=3, mode="evt")).h_s_star
    h_hi = rem_simulate(REMConfig(
        n_s=n_s, n_t=300, gamma_s=0.5, gamma_t=0.5, delta_s=0.5, delta_t=1.0,
        seed=3, mode="evt")).h_s_star
    jump_ok = (h_hi - h_lo) > 0.5 * n_s * LN2
    elapsed = time.time() - t0
    _report(
        "REM phase behavior",
        gamma2_ok and tv_ok and sharpening_ok and jump_ok and elapsed < 600.0,
        f"gamma=2 max err {gamma2_err:.4f}; gamma=1 TV {tv:.4f}; spreads "
        f"{[round(s, 3) for s in spreads]}; gamma=1/2 jump {h_hi - h_lo:.0f} nats; "
        f"{elapsed:.0f}s",
    )


def test_inference_bounds():
    t0 = time.time()
    rng = np.random.default_rng(1)
    worst_gap = 0.0
    for _ in range(100):
        summary = GaussianPosteriorSummary(
            r=int(rng.integers(0, 30)),
            n=int(rng.integers(1, 10**8)),
            logdet_l=float(rng.normal(scale=10.0)),
            log_prior_at_mle=float(rng.normal(scale=10.0)),
            loglik_max=float(rng.normal(scale=1000.0)),
        )
        bms, laplace = log_evidence(summary)
        worst_gap = max(worst_gap, abs(bms - laplace))
    forms_ok = worst_gap < 1e-12
    # Bernoulli pipeline: KL error shrinks with N
    from scipy import stats

    errs = []
    theta = 0.3
    for n in (100, 1_000, 10_000):
        k = round(theta * n)
        t_hat = k / n
        exact = -stats.beta(k + 1, n - k + 1).entropy()
        asym = kl_posterior_prior(GaussianPosteriorSummary(
            r=1, n=n, logdet_l=math.log(1.0 / (t_hat * (1 - t_hat)))))
        errs.append(abs(float(exact) - asym))
    shrink_ok = errs[0] > errs[1] > errs[2]
    bound_ok = param_bound(895, 2.377).r_max == 626
    elapsed = time.time() - t0
    _report(
        "inference bounds",
        forms_ok and shrink_ok and bound_ok and elapsed < 60.0,
        f"evidence forms gap {worst_gap:.1e}; Bernoulli KL errors {errs[0]:.4f} > "
        f"{errs[1]:.4f} > {errs[2]:.4f}; param_bound(895, 2.377) = 626; "
        f"{elapsed:.1f}s",
    )


def test_cli_determinism(tmp_path):
    labels = tmp_path / "labels.txt"
    obs = []
    for r in range(1, 30):
        obs.extend([f"s{r}"] * max(round(50 / r), 1))
    labels.write_text("\n".join(obs) + "\n")
    spikes = tmp_path / "spikes.txt"
    rng = np.random.default_rng(3)
    spikes.write_text(
        "# T=40.0\n" + "\n".join(f"{t:.6f}" for t in np.sort(rng.uniform(0, 40, 60))) + "\n"
    )
    csv = tmp_path / "data.csv"
    rows = ["x,y,label"] + [
        f"{cx + rng.normal():.4f},{cy + rng.normal():.4f},c{c}"
        for c, (cx, cy) in enumerate([(0, 0), (5, 5)])
        for _ in range(10)
    ]
    csv.write_text("\n".join(rows) + "\n")
    commands = [
        ["analyze", str(labels), "--seed", "1"],
        ["count", str(labels)],
        ["partitions", "--n", "15"],
        ["frontier", "--n", "100", "--baseline", "4", "16", "--replicas", "3", "--seed", "2"],
        ["msr", str(spikes), "--phases", "2"],
        ["cluster", str(csv), "--truth", "label", "--k", "2"],
        ["ldt", str(labels), "--betas", "-0.1", "0.0", "0.1", "0.2", "0.3",
         "--sweeps", "20000", "--burnin", "2000", "--thin", "100", "--seed", "6"],
        ["olm", "--pow2", "12", "--mu", "1.5"],
        ["rem", "--ns", "10", "--nt", "20", "--gamma-s", "2.0", "--gamma-t", "2.0", "--seed", "4"],
        ["bound", "--n", "895", "--hk", "2.377"],
        ["evidence", "--r", "2", "--n", "500", "--logdet", "1.0"],
    ]
    all_ok = True
    for argv in commands:
        for fmt in ("json", "tsv"):
            full = argv + ["--format", fmt]
            a, b = io.StringIO(), io.StringIO()
            code_a = cli_run(full, out=a)
            code_b = cli_run(full, out=b)
            all_ok &= code_a == code_b == 0 and a.getvalue() == b.getvalue()
    _report(
        "CLI determinism",
        all_ok,
        f"{len(commands)} commands x 2 formats byte-identical on replay",
    )
