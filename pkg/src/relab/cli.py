"""Command-line front end: file ingestion, dispatch, deterministic reports.

Every report embeds the tool version, the master seed, the unit base and a
sha256 digest of the raw input bytes, and re-running a command with the same
inputs and seed is byte-identical.  Curves are emitted as long-form rows
(x, y, series) in TSV mode; floats print with 12 significant digits there,
matching the JSON encoding to full printed precision.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from typing import Sequence

import numpy as np

from . import __version__
from .errors import BadArgument, BadData, RelabError
from . import cluster_eval, combinatorics, frontier, inference_bounds, large_dev
from . import msr as msr_mod
from . import olm_rem
from .sample_core import Sample, build_degeneracy, build_frequency, entropy_summary

_FLOAT_FMT = "%.12g"


def _digest(paths: Sequence[str]) -> str:
    h = hashlib.sha256()
    for path in paths:
        with open(path, "rb") as fh:
            h.update(fh.read())
    return h.hexdigest()


def _read_labels(path: str) -> Sample:
    with open(path, "r", encoding="utf-8") as fh:
        tokens = [line.strip() for line in fh if line.strip()]
    return Sample(tokens)


def _read_spikes(path: str):
    t_max = None
    times = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                body = line.lstrip("#").strip()
                if body.startswith("T="):
                    t_max = float(body[2:])
                continue
            times.append(float(line))
    return times, t_max


def _read_csv(path: str, truth_col=None):
    with open(path, "r", encoding="utf-8") as fh:
        rows = [line.strip().split(",") for line in fh if line.strip()]
    if not rows:
        raise BadData("empty csv")
    header = None
    try:
        [float(x) for x in rows[0] if x != (truth_col or "")]
        start = 0
    except ValueError:
        header = rows[0]
        start = 1
    body = rows[start:]
    truth_idx = None
    if truth_col is not None:
        if header is not None and truth_col in header:
            truth_idx = header.index(truth_col)
        else:
            try:
                truth_idx = int(truth_col)
            except ValueError:
                raise BadArgument(f"truth column {truth_col!r} not found")
    truth = None
    data_rows = []
    for row in body:
        cells = list(row)
        if truth_idx is not None:
            if not 0 <= truth_idx < len(cells):
                raise BadArgument("truth column index out of range")
            t = cells.pop(truth_idx)
            truth = (truth or []) + [t]
        try:
            data_rows.append([float(x) for x in cells])
        except ValueError as exc:
            raise BadData(f"non-numeric feature cell: {exc}")
    return np.asarray(data_rows, dtype=np.float64), truth


def _fmt(value):
    if isinstance(value, float):
        return _FLOAT_FMT % value
    return str(value)


def _emit(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2, allow_nan=True) + "\n"
    lines = []
    meta = {k: v for k, v in report.items() if k != "result"}
    for key, value in meta.items():
        lines.append(f"{key}\t{_fmt(value)}")
    for key, value in report["result"].items():
        if isinstance(value, list) and value and isinstance(value[0], dict):
            # long-form curve: x, y, series per row
            for row in value:
                items = list(row.items())
                x = _fmt(items[0][1])
                for name, y in items[1:]:
                    lines.append(f"{x}\t{_fmt(y)}\t{key}.{name}")
        elif isinstance(value, dict):
            for sub, v in value.items():
                lines.append(f"{key}.{sub}\t{_fmt(v)}")
        elif isinstance(value, list):
            lines.append(f"{key}\t" + ",".join(_fmt(v) for v in value))
        else:
            lines.append(f"{key}\t{_fmt(value)}")
    return "\n".join(lines) + "\n"


def _cmd_analyze(args) -> dict:
    sample = _read_labels(args.labels_file)
    summ = entropy_summary(sample, base=args.base)
    deg = build_degeneracy(build_frequency(sample))
    fit = frontier.fit_exponent(deg, min_mass=args.min_mass)
    gap = frontier.zipf_gap(sample)
    return {
        "n": summ.n,
        "m": summ.m,
        "resolution": summ.resolution,
        "relevance": summ.relevance,
        "noise": summ.noise,
        "fit": {
            "mu": fit.mu,
            "intercept": fit.intercept,
            "stderr": fit.stderr,
            "points_used": fit.points_used,
        },
        "zipf": {"mu_deviation": gap.mu_deviation, "frontier_deficit": gap.frontier_deficit},
    }


def _cmd_count(args) -> dict:
    sample = _read_labels(args.labels_file)
    deg = build_degeneracy(build_frequency(sample))
    lc = combinatorics.log_counts(deg.degeneracies, deg.n)
    return {
        "n": deg.n,
        "m": deg.m,
        "log_ws": lc.log_ws,
        "log_wk": lc.log_wk,
        "log_ws_given_k": lc.log_ws_given_k,
        "log_wm": lc.log_wm,
    }


def _cmd_partitions(args) -> dict:
    res_edges, rel_edges, counts = combinatorics.rr_density(args.n, args.bins)
    cells = []
    for i, j in zip(*np.nonzero(counts)):
        cells.append(
            {
                "resolution": float(0.5 * (res_edges[i] + res_edges[i + 1])),
                "relevance": float(0.5 * (rel_edges[j] + rel_edges[j + 1])),
                "count": int(counts[i, j]),
            }
        )
    return {
        "n": args.n,
        "bins": args.bins,
        "n_partitions": combinatorics.count_partitions(args.n),
        "density": cells,
    }


def _cmd_frontier(args) -> dict:
    grid = args.mu_grid if args.mu_grid else None
    curve = frontier.max_relevance_frontier(args.n, grid)
    result = {
        "n": args.n,
        "frontier": [
            {
                "mu": p.mu,
                "resolution": p.resolution,
                "relevance": p.relevance,
                "amplitude": p.amplitude,
            }
            for p in curve.points
        ],
    }
    if args.baseline:
        base = frontier.random_baseline(args.n, args.baseline, args.replicas, args.seed)
        result["baseline"] = [
            {"alphabet_size": p.alphabet_size, "resolution": p.resolution, "relevance": p.relevance}
            for p in base.points
        ]
    return result


def _cmd_msr(args) -> dict:
    times, t_header = _read_spikes(args.spikes_file)
    t_max = args.t_max if args.t_max is not None else t_header
    train = msr_mod.SpikeTrain(times, t_max)
    grid = args.grid if args.grid else None
    result = msr_mod.multiscale_relevance(train, grid, phases=args.phases)
    return {
        "n": train.n,
        "t_total": train.t_total,
        "msr": result.msr,
        "optimal_dt": result.optimal_dt,
        "max_total": result.max_total,
        "curve": [
            {"dt": p.dt, "resolution": p.resolution, "relevance": p.relevance}
            for p in result.curve
        ],
    }


_ALGO_NAMES = {"s": "single", "c": "complete", "a": "average"}


def _cmd_cluster(args) -> dict:
    data, truth = _read_csv(args.csv, args.truth)
    metric = args.metric.upper()
    trajectories = {}
    dendros = {}
    for code in args.algo:
        name = _ALGO_NAMES.get(code, code)
        dendros[name] = cluster_eval.agglomerate(data, linkage=name, metric=metric)
        trajectories[name] = cluster_eval.rr_trajectory(dendros[name])
    k = args.k if args.k is not None else "K_star"
    report = cluster_eval.rank_algorithms(trajectories, criterion=args.criterion, k=k)
    result = {
        "criterion": report.criterion,
        "ranking": list(report.ranking),
        "scores": {n: report.scores[n] for n in report.ranking},
        "k_star": report.k_star,
        "k_used": report.k_used,
        "trajectories": [
            {"k": p.k, "resolution": p.resolution, "relevance": p.relevance, "series": name}
            for name, traj in sorted(trajectories.items())
            for p in traj
        ],
    }
    if truth is not None:
        metrics = {}
        for name, dendro in sorted(dendros.items()):
            labels = cluster_eval.cut_at_k(dendro, report.k_used[name])
            tm = cluster_eval.truth_metrics(labels.tolist(), truth)
            metrics[name] = {
                "mutual_information": tm.mutual_information,
                "nmi": tm.nmi,
                "ari": tm.ari,
                "purity": tm.purity,
            }
        result["truth_metrics"] = metrics
    return result


def _cmd_ldt(args) -> dict:
    sample = _read_labels(args.labels_file)
    freq = build_frequency(sample)
    m = args.m if args.m is not None else 2 * freq.n
    n_prime = args.n_prime if args.n_prime is not None else freq.n
    config = large_dev.LDTConfig(
        n_prime=n_prime,
        m=m,
        a=args.a,
        sweeps=args.sweeps,
        burnin=args.burnin,
        thin=args.thin,
        seed=args.seed,
    )
    sweep = large_dev.beta_sweep(freq, config, args.betas)
    transition = large_dev.detect_transition(sweep)
    return {
        "n_prime": sweep.n_prime,
        "m": sweep.m,
        "a": args.a,
        "records": [
            {
                "beta": r.beta,
                "mean_hq_s": r.mean_hq_s,
                "mean_hq_k": r.mean_hq_k,
                "se_hq_s": r.se_hq_s,
                "se_hq_k": r.se_hq_k,
                "acceptance": r.acceptance,
            }
            for r in sweep.records
        ],
        "transition": {"kind": transition.kind, "beta_c": transition.beta_c},
    }


def _cmd_olm(args) -> dict:
    if args.pow2 is not None:
        spec = olm_rem.pow2_spec(args.pow2)
    elif args.classes:
        spec = olm_rem.OLMSpec(args.classes)
    else:
        raise BadArgument("provide --classes or --pow2")
    sol = olm_rem.olm_optimal_costs(spec, args.mu)
    mu_grid = args.mu_grid if args.mu_grid else np.geomspace(0.2, 5.0, 25).tolist()
    ratio_grid = args.ratio_grid if args.ratio_grid else np.linspace(0.2, 3.0, 29).tolist()
    curve = olm_rem.olm_entropy_energy_curve(spec, mu_grid)
    heat = olm_rem.specific_heat_curve(spec, args.mu, ratio_grid)
    return {
        "mu": sol.mu,
        "e0": sol.e0,
        "resolution": sol.resolution,
        "noise": sol.noise,
        "relevance": sol.relevance,
        "costs": [float(e) for e in sol.e_c],
        "entropy_energy": [
            {"resolution": res, "noise": noise} for res, noise in curve
        ],
        "specific_heat": [{"beta_ratio": r, "c": c} for r, c in heat],
    }


def _cmd_rem(args) -> dict:
    if args.phase:
        diagram = olm_rem.rem_phase_diagram(
            gamma=args.gamma_s,
            ratio_grid=args.ratio_grid or [0.5, 1.0, 2.0],
            nu_grid=args.nu_grid or [0.25, 0.5, 0.75, 1.0, 1.25],
            n_s=args.ns,
            replicas=args.replicas,
            seed=args.seed,
            mode=args.mode,
        )
        return {
            "gamma": args.gamma_s,
            "grid": [
                {
                    "ratio": diagram["ratios"][i],
                    "nu": diagram["nus"][j],
                    "h_fraction": float(diagram["h_fraction"][i, j]),
                }
                for i in range(len(diagram["ratios"]))
                for j in range(len(diagram["nus"]))
            ],
            "nu_star": diagram["nu_star"],
        }
    config = olm_rem.REMConfig(
        n_s=args.ns,
        n_t=args.nt,
        gamma_s=args.gamma_s,
        gamma_t=args.gamma_t,
        delta_s=args.ds,
        delta_t=args.dt,
        replicas=args.replicas,
        seed=args.seed,
        mode=args.mode,
    )
    result = olm_rem.rem_simulate(config)
    return {
        "h_s_star": result.h_s_star,
        "h_u": result.h_u,
        "beta_effective": result.beta_effective,
        "ties": result.ties,
    }


def _cmd_bound(args) -> dict:
    bound = inference_bounds.param_bound(args.n, args.hk)
    return {"n": args.n, "relevance": args.hk, "raw": bound.raw, "r_max": bound.r_max,
            "note": bound.note}


def _cmd_evidence(args) -> dict:
    summary = inference_bounds.GaussianPosteriorSummary(
        r=args.r,
        n=args.n,
        logdet_l=args.logdet,
        log_prior_at_mle=args.logprior,
        loglik_max=args.loglik,
    )
    kl = inference_bounds.kl_posterior_prior(summary)
    bms, laplace = inference_bounds.log_evidence(summary)
    return {"kl": kl, "evidence_bms": bms, "evidence_laplace": laplace}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="relab", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--format", choices=("json", "tsv"), default="json")
        p.add_argument("--base", choices=("nats", "bits", "baseN"), default="nats")
        p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("analyze", help="entropies, exponent fit and Zipf gap of a label file")
    p.add_argument("labels_file")
    p.add_argument("--min-mass", type=float, default=None)
    common(p)

    p = sub.add_parser("count", help="log multiplicities of a label file's profile")
    p.add_argument("labels_file")
    common(p)

    p = sub.add_parser("partitions", help="partition density over the entropy square")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--bins", type=int, default=60)
    common(p)

    p = sub.add_parser("frontier", help="max-relevance frontier and random baseline")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--mu-grid", type=float, nargs="*", default=None)
    p.add_argument("--baseline", type=int, nargs="*", default=None)
    p.add_argument("--replicas", type=int, default=100)
    common(p)

    p = sub.add_parser("msr", help="multi-scale relevance of an event train")
    p.add_argument("spikes_file")
    p.add_argument("--t-max", type=float, default=None)
    p.add_argument("--grid", type=float, nargs="*", default=None)
    p.add_argument("--phases", type=int, default=1)
    common(p)

    p = sub.add_parser("cluster", help="agglomerative trajectories and ranking")
    p.add_argument("csv")
    p.add_argument("--algo", choices=("s", "c", "a"), nargs="+", default=["s", "c", "a"])
    p.add_argument("--metric", choices=("l1", "l2"), default="l2")
    p.add_argument("--truth", default=None)
    p.add_argument("--criterion", choices=("INFOMAX", "RELEMAX"), default="RELEMAX")
    p.add_argument("--k", type=int, default=None)
    common(p)

    p = sub.add_parser("ldt", help="tilted-ensemble beta sweep of a label file")
    p.add_argument("labels_file")
    p.add_argument("--betas", type=float, nargs="+", required=True)
    p.add_argument("--a", type=float, default=1.0)
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--n-prime", type=int, default=None)
    p.add_argument("--sweeps", type=int, default=1_000_000)
    p.add_argument("--burnin", type=int, default=100_000)
    p.add_argument("--thin", type=int, default=100)
    common(p)

    p = sub.add_parser("olm", help="optimal-machine costs, curves and specific heat")
    p.add_argument("--classes", type=int, nargs="*", default=None)
    p.add_argument("--pow2", type=int, default=None)
    p.add_argument("--mu", type=float, required=True)
    p.add_argument("--mu-grid", type=float, nargs="*", default=None)
    p.add_argument("--ratio-grid", type=float, nargs="*", default=None)
    common(p)

    p = sub.add_parser("rem", help="random-energy clamped-state simulation")
    p.add_argument("--ns", type=int, required=True)
    p.add_argument("--nt", type=int, default=0)
    p.add_argument("--gamma-s", type=float, default=1.0)
    p.add_argument("--gamma-t", type=float, default=1.0)
    p.add_argument("--ds", type=float, default=1.0)
    p.add_argument("--dt", type=float, default=1.0)
    p.add_argument("--mode", choices=("empirical", "evt"), default="evt")
    p.add_argument("--replicas", type=int, default=1000)
    p.add_argument("--phase", action="store_true")
    p.add_argument("--ratio-grid", type=float, nargs="*", default=None)
    p.add_argument("--nu-grid", type=float, nargs="*", default=None)
    common(p)

    p = sub.add_parser("bound", help="relevance-based parameter-count bound")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--hk", type=float, required=True)
    common(p)

    p = sub.add_parser("evidence", help="posterior-prior KL and log evidence")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--logdet", type=float, default=0.0)
    p.add_argument("--logprior", type=float, default=0.0)
    p.add_argument("--loglik", type=float, default=0.0)
    common(p)

    return parser


_HANDLERS = {
    "analyze": (_cmd_analyze, ["labels_file"]),
    "count": (_cmd_count, ["labels_file"]),
    "partitions": (_cmd_partitions, []),
    "frontier": (_cmd_frontier, []),
    "msr": (_cmd_msr, ["spikes_file"]),
    "cluster": (_cmd_cluster, ["csv"]),
    "ldt": (_cmd_ldt, ["labels_file"]),
    "olm": (_cmd_olm, []),
    "rem": (_cmd_rem, []),
    "bound": (_cmd_bound, []),
    "evidence": (_cmd_evidence, []),
}


def run(argv: Sequence[str] | None = None, out=None) -> int:
    out = out if out is not None else sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    handler, input_attrs = _HANDLERS[args.command]
    try:
        paths = [getattr(args, attr) for attr in input_attrs]
        report = {
            "tool": "relab",
            "version": __version__,
            "command": args.command,
            "seed": args.seed,
            "base": args.base,
            "input_sha256": _digest(paths),
            "result": handler(args),
        }
    except BadArgument as exc:
        print(f"relab: argument error: {exc}", file=sys.stderr)
        return 2
    except RelabError as exc:
        print(f"relab: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"relab: argument error: {exc}", file=sys.stderr)
        return 2
    out.write(_emit(report, args.format))
    return 0


def main() -> None:
    sys.exit(run())
