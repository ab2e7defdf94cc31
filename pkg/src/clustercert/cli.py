"""Command line interface and the certification pipeline behind it.

Verbs: certify, validate, stats, greedy, oracle, opt-solve, gen, discretize.
All output is JSON on stdout (generated point clouds are CSV). Exit codes:
0 success / certified, 3 ran fine but not certified, 2 any error.

Reports follow schema "cert-report/1" and are rendered with sorted keys;
apart from the timings block (nulled by --no-timings) the bytes are fully
deterministic and independent of CERTIFY_WORKERS.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
import time

from . import bounds, discretize, generators, greedy, oracle, stats
from .errors import ClusterCertError, InvalidParams
from .kernels import BACKEND, DEFAULT_BUDGET
from .space import (
    POINT_METRICS,
    FiniteMetricSpace,
    ScaleParams,
    load_points_csv,
    load_space_json,
    points_to_csv_text,
    space_from_points,
    space_to_json_dict,
)

EXIT_OK = 0
EXIT_ERROR = 2
EXIT_NOT_CERTIFIED = 3

REPORT_SCHEMA = "cert-report/1"


def _digest(path: str) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            h.update(chunk)
    return "sha256:" + h.hexdigest()


def load_input(path: str, fmt: str = "auto", metric: str = "euclidean") -> FiniteMetricSpace:
    """Load a space document (JSON) or point cloud (CSV + metric)."""
    if fmt == "auto":
        fmt = "csv" if path.lower().endswith(".csv") else "json"
    if fmt == "json":
        return load_space_json(path)
    if fmt == "csv":
        return space_from_points(load_points_csv(path), metric)
    raise InvalidParams(f"unknown input format {fmt!r}")


def _hist_json(hist) -> list[dict]:
    out = []
    for b in hist:
        out.append(
            {
                "lo": b.lo,
                "hi": None if math.isinf(b.hi) else b.hi,
                "mass": b.mass,
                "edge_class": b.edge_class,
            }
        )
    return out


def hist_csv_text(hist) -> str:
    lines = ["lo,hi,mass,edge_class"]
    for b in hist:
        hi = "inf" if math.isinf(b.hi) else repr(b.hi)
        lines.append(f"{b.lo!r},{hi},{b.mass!r},{b.edge_class}")
    return "\n".join(lines) + "\n"


def _space_block(space: FiniteMetricSpace) -> dict:
    return {
        "n": space.n,
        "total_measure": space.total_measure,
        "uniform_weights": space.uniform_weights,
        "triangle_inequality": space.triangle_ok,
    }


def run_certify(
    input_path: str,
    r: float,
    k: int,
    fmt: str = "auto",
    metric: str = "euclidean",
    alpha: float | None = None,
    beta: float | None = None,
    budget: int = DEFAULT_BUDGET,
    approx: bool = False,
    mc_samples: int | None = None,
    seed: int | None = None,
    medium_multiplier: float = 3.0,
    with_oracle: bool = False,
    oracle_limit: int = oracle.DEFAULT_LIMIT,
    bins: int = 3,
    first_k: bool = False,
    no_timings: bool = False,
    emit_histogram: str | None = None,
    workers: int | None = None,
) -> tuple[dict, int]:
    """Full pipeline: load, stats, bound, greedy structure, optional oracle.

    Returns (report, exit_code). The certificate states that the extracted
    structure covers at least a Psi fraction of the total measure; a vacuous
    bound (Psi <= 0) certifies trivially. Runs with medium_multiplier != 3
    are exploratory and never certified.
    """
    timings: dict[str, float] = {}
    t0 = time.perf_counter()
    space = load_input(input_path, fmt, metric)
    params = ScaleParams(r=r, k=k, medium_multiplier=medium_multiplier)
    timings["load"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    st = stats.compute_stats(
        space,
        params,
        budget=budget,
        mc_samples=mc_samples,
        seed=seed,
        bins=bins,
        workers=workers,
        mc_mode="fallback",
    )
    timings["stats"] = time.perf_counter() - t0

    alpha_used = st.alpha_min if alpha is None else float(alpha)
    alpha_source = "computed" if alpha is None else "supplied"
    if beta is None:
        beta_used = st.beta_min
        beta_source = "monte_carlo" if st.method == "monte_carlo" else "computed"
    else:
        beta_used = float(beta)
        beta_source = "supplied"
    bound = bounds.psi(alpha_used, beta_used, k, alpha_source, beta_source)

    t0 = time.perf_counter()
    decomp = greedy.greedy_decomposition(space, params, budget=budget, approx=approx)
    structure = greedy.structure_from_decomposition(space, decomp, k, first_k=first_k)
    greedy.check_structure(space, structure.clusters, 2.0 * params.r, params.r)
    timings["greedy"] = time.perf_counter() - t0

    mu = space.total_measure
    coverage = structure.measure / mu
    slack = 1e-12 * mu

    oracle_block = None
    timings["oracle"] = 0.0
    if with_oracle:
        t0 = time.perf_counter()
        res = oracle.max_structure_bruteforce(space, params, limit=oracle_limit)
        oracle_cov = res.measure / mu
        oracle_block = {
            "clusters": [list(c) for c in res.structure.clusters],
            "measure": res.measure,
            "coverage_ratio": oracle_cov,
            "assignments_explored": res.assignments_explored,
            "theorem_ok": bound.vacuous or res.measure + 1e-9 * mu >= bound.psi * mu,
            "greedy_le_oracle": structure.measure <= res.measure + 1e-9 * mu,
        }
        timings["oracle"] = time.perf_counter() - t0

    exploratory = medium_multiplier != 3.0
    certified = (not exploratory) and (bound.vacuous or coverage + slack >= bound.psi)

    report = {
        "schema": REPORT_SCHEMA,
        "input_digest": _digest(input_path),
        "params": {
            "r": float(r),
            "k": int(k),
            "medium_multiplier": float(medium_multiplier),
            "budget": int(budget),
            "approx": bool(approx),
            "mc_samples": mc_samples,
            "seed": seed,
            "first_k": bool(first_k),
            "oracle_limit": int(oracle_limit) if with_oracle else None,
        },
        "space": _space_block(space),
        "stats": {
            "medium_measure": st.medium_measure,
            "anticlique_measure": st.anticlique_measure,
            "alpha_min": st.alpha_min,
            "beta_min": st.beta_min,
            "method": st.method,
            "ci_halfwidth": st.ci_halfwidth,
            "histogram": _hist_json(st.histogram),
        },
        "bound": {
            "alpha": bound.alpha,
            "beta": bound.beta,
            "k": bound.k,
            "psi": bound.psi,
            "phi": bound.phi,
            "vacuous": bound.vacuous,
            "alpha_source": bound.alpha_source,
            "beta_source": bound.beta_source,
        },
        "greedy": {
            "clusters": [list(c) for c in structure.clusters],
            "cluster_measures": [
                float(space.weights[list(c)].sum()) if c else 0.0 for c in structure.clusters
            ],
            "measure": structure.measure,
            "exact": decomp.exact,
            "stages": len(decomp.stages),
            "stage_core_sizes": [len(s.core) for s in decomp.stages],
            "stage_zone_sizes": [len(s.zone) for s in decomp.stages],
        },
        "oracle": oracle_block,
        "coverage_ratio": coverage,
        "exploratory": exploratory,
        "certified": certified,
        "timings": None if no_timings else timings,
    }
    if emit_histogram:
        with open(emit_histogram, "w", encoding="utf-8") as fh:
            fh.write(hist_csv_text(st.histogram))
    return report, EXIT_OK if certified else EXIT_NOT_CERTIFIED


def _emit(payload: dict) -> None:
    print(json.dumps(payload, indent=2, sort_keys=True, allow_nan=False))


def _resolve_input(args) -> str:
    pos = getattr(args, "input", None)
    flag = getattr(args, "input_flag", None)
    if pos and flag:
        raise InvalidParams("give the input either positionally or via --input, not both")
    path = pos or flag
    if not path:
        raise InvalidParams("an input file is required")
    return path


def _params_from(args) -> ScaleParams:
    return ScaleParams(
        r=args.r, k=args.k, medium_multiplier=getattr(args, "medium_multiplier", 3.0)
    )


def cmd_certify(args) -> int:
    report, code = run_certify(
        _resolve_input(args),
        r=args.r,
        k=args.k,
        fmt=args.format,
        metric=args.metric,
        alpha=args.alpha,
        beta=args.beta,
        budget=args.budget,
        approx=args.approx,
        mc_samples=args.mc_samples,
        seed=args.seed,
        medium_multiplier=args.medium_multiplier,
        with_oracle=args.with_oracle,
        oracle_limit=args.oracle_limit,
        bins=args.bins,
        first_k=args.first_k,
        no_timings=args.no_timings,
        emit_histogram=args.emit_histogram,
    )
    _emit(report)
    return code


def cmd_validate(args) -> int:
    path = _resolve_input(args)
    space = load_input(path, args.format, args.metric)
    _emit(
        {
            "valid": True,
            "input_digest": _digest(path),
            "backend": BACKEND,
            **_space_block(space),
        }
    )
    return EXIT_OK


def cmd_stats(args) -> int:
    space = load_input(_resolve_input(args), args.format, args.metric)
    params = _params_from(args)
    st = stats.compute_stats(
        space,
        params,
        budget=args.budget,
        mc_samples=args.mc_samples,
        seed=args.seed,
        bins=args.bins,
        mc_mode="force" if args.mc_samples is not None else "never",
    )
    if args.emit_histogram:
        with open(args.emit_histogram, "w", encoding="utf-8") as fh:
            fh.write(hist_csv_text(st.histogram))
    _emit(
        {
            "space": _space_block(space),
            "medium_measure": st.medium_measure,
            "anticlique_measure": st.anticlique_measure,
            "alpha_min": st.alpha_min,
            "beta_min": st.beta_min,
            "method": st.method,
            "ci_halfwidth": st.ci_halfwidth,
            "histogram": _hist_json(st.histogram),
        }
    )
    return EXIT_OK


def cmd_greedy(args) -> int:
    space = load_input(_resolve_input(args), args.format, args.metric)
    params = _params_from(args)
    decomp = greedy.greedy_decomposition(space, params, budget=args.budget, approx=args.approx)
    structure = greedy.structure_from_decomposition(space, decomp, params.k, first_k=args.first_k)
    greedy.check_structure(space, structure.clusters, 2.0 * params.r, params.r)
    _emit(
        {
            "space": _space_block(space),
            "stages": [
                {
                    "core": list(s.core),
                    "zone": list(s.zone),
                    "core_measure": float(space.weights[list(s.core)].sum()),
                    "exact": s.exact,
                }
                for s in decomp.stages
            ],
            "exact": decomp.exact,
            "structure": {
                "clusters": [list(c) for c in structure.clusters],
                "measure": structure.measure,
                "coverage_ratio": structure.measure / space.total_measure,
            },
        }
    )
    return EXIT_OK


def cmd_oracle(args) -> int:
    space = load_input(_resolve_input(args), args.format, args.metric)
    params = _params_from(args)
    res = oracle.max_structure_bruteforce(space, params, limit=args.limit)
    out = {
        "space": _space_block(space),
        "clusters": [list(c) for c in res.structure.clusters],
        "measure": res.measure,
        "coverage_ratio": res.measure / space.total_measure,
        "assignments_explored": res.assignments_explored,
    }
    if args.verify:
        chk = oracle.verify_theorem(space, params, limit=args.limit, budget=args.budget)
        out["verify"] = {
            "alpha_min": chk.alpha,
            "beta_min": chk.beta,
            "psi": chk.psi,
            "greedy_measure": chk.greedy_measure,
            "vacuous": chk.vacuous,
            "uniform_weights": chk.uniform_weights,
            "theorem_ok": chk.theorem_ok,
            "greedy_le_oracle": chk.greedy_le_oracle,
            "passed": chk.passed,
        }
    _emit(out)
    return EXIT_OK


def cmd_opt_solve(args) -> int:
    sol = bounds.opt_solve_numeric(args.n, args.k, args.c, resolution=args.resolution)
    lb, valid = bounds.opt_lower_bound(args.c, args.k)
    _emit(
        {
            "n": sol.n,
            "k": sol.k,
            "c": sol.c,
            "objective": sol.objective,
            "shape": sol.shape,
            "w": list(sol.w),
            "sigma": sol.sigma,
            "s": sol.s,
            "lambda": sol.lam,
            "mu": sol.mu,
            "lower_bound": lb,
            "lower_bound_valid": valid,
            "objective_above_bound": (not valid) or sol.objective + 1e-12 >= lb,
        }
    )
    return EXIT_OK


def _write_provenance(out_path: str, kind: str, params: dict) -> None:
    with open(out_path + ".provenance.json", "w", encoding="utf-8") as fh:
        json.dump({"generator": kind, "params": params}, fh, indent=2, sort_keys=True)
        fh.write("\n")


def cmd_gen(args) -> int:
    kind = args.kind
    if kind == "model":
        space = generators.gen_model(
            args.k, args.pts, args.r, args.separation, args.seed,
            allow_weak_separation=args.weak_separation,
        )
        params = {
            "k": args.k, "pts_per_cluster": args.pts, "r": args.r,
            "separation": args.separation, "seed": args.seed,
            "allow_weak_separation": args.weak_separation,
        }
        payload = space_to_json_dict(space, condensed=args.condensed)
    elif kind == "adversarial":
        space = generators.gen_adversarial(args.s, args.m, args.r, args.r_prime)
        params = {"s": args.s, "m": args.m, "r": args.r, "r_prime": args.r_prime}
        payload = space_to_json_dict(space, condensed=args.condensed)
    elif kind == "random":
        space = generators.gen_random(args.n, args.seed, style=args.style, dim=args.dim)
        params = {"n": args.n, "seed": args.seed, "style": args.style, "dim": args.dim}
        payload = space_to_json_dict(space, condensed=args.condensed)
    elif kind == "blobs":
        pts = generators.gen_blobs(
            args.blobs, args.pts, args.dim, args.spread, args.separation, args.seed
        )
        params = {
            "blobs": args.blobs, "pts_per_blob": args.pts, "dim": args.dim,
            "spread": args.spread, "separation": args.separation, "seed": args.seed,
        }
        text = points_to_csv_text(pts)
        if args.out:
            with open(args.out, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
            _write_provenance(args.out, kind, params)
        else:
            sys.stdout.write(text)
        return EXIT_OK
    else:  # pragma: no cover - argparse restricts choices
        raise InvalidParams(f"unknown generator {kind!r}")
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")
        _write_provenance(args.out, kind, params)
    else:
        _emit(payload)
    return EXIT_OK


def cmd_discretize(args) -> int:
    space = load_input(_resolve_input(args), args.format, args.metric)
    params = _params_from(args)
    disc = discretize.discretize_space(
        space, params, args.epsilon,
        denominator_bound=args.denominator_bound, budget=args.budget,
    )
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(space_to_json_dict(disc.quotient), fh, indent=2, sort_keys=True)
            fh.write("\n")
    if args.map_out:
        with open(args.map_out, "w", encoding="utf-8") as fh:
            json.dump({"cells": [list(c) for c in disc.partition]}, fh, indent=2, sort_keys=True)
            fh.write("\n")
    _emit(
        {
            "space": _space_block(space),
            "epsilon": disc.epsilon,
            "cells": len(disc.partition),
            "cell_sizes": [len(c) for c in disc.partition],
            "denominator_bound": args.denominator_bound,
            "q": [str(f) for f in disc.q],
            "quotient_measure": disc.quotient.total_measure,
            "alpha_min": stats.alpha_min(space, params),
            "beta_min": stats.beta_min(space, params, args.budget),
            "alpha_eps": disc.alpha_eps,
            "beta_eps": disc.beta_eps,
        }
    )
    return EXIT_OK


def _add_input_args(sp) -> None:
    sp.add_argument("input", nargs="?", help="space JSON document or point-cloud CSV")
    sp.add_argument("--input", dest="input_flag", metavar="PATH", help=argparse.SUPPRESS)
    sp.add_argument("--format", choices=("auto", "json", "csv"), default="auto")
    sp.add_argument("--metric", choices=POINT_METRICS, default="euclidean",
                    help="metric for CSV point clouds")


def _add_scale_args(sp) -> None:
    sp.add_argument("--r", type=float, required=True, help="cluster scale r")
    sp.add_argument("--k", type=int, required=True, help="structure order k (>= 2)")
    sp.add_argument("--medium-multiplier", type=float, default=3.0,
                    help="medium band upper edge as a multiple of r (non-default = exploratory)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="clustercert",
        description="Certify cluster structure in finite semimetric spaces.",
    )
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("certify", help="compute stats, bound, and greedy structure")
    _add_input_args(p)
    _add_scale_args(p)
    p.add_argument("--alpha", type=float, default=None, help="override alpha_min")
    p.add_argument("--beta", type=float, default=None, help="override beta_min")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--approx", action="store_true", help="accept truncated searches")
    p.add_argument("--mc-samples", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--with-oracle", action="store_true")
    p.add_argument("--oracle-limit", type=int, default=oracle.DEFAULT_LIMIT)
    p.add_argument("--bins", type=int, default=3)
    p.add_argument("--first-k", action="store_true",
                   help="take the first k greedy stages instead of the heaviest k")
    p.add_argument("--no-timings", action="store_true")
    p.add_argument("--emit-histogram", metavar="PATH", default=None)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("validate", help="validate an input document")
    _add_input_args(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("stats", help="distance distribution statistics")
    _add_input_args(p)
    _add_scale_args(p)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--mc-samples", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--bins", type=int, default=3)
    p.add_argument("--emit-histogram", metavar="PATH", default=None)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("greedy", help="greedy decomposition and structure")
    _add_input_args(p)
    _add_scale_args(p)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--approx", action="store_true")
    p.add_argument("--first-k", action="store_true")
    p.set_defaults(func=cmd_greedy)

    p = sub.add_parser("oracle", help="exhaustive best structure (small n)")
    _add_input_args(p)
    _add_scale_args(p)
    p.add_argument("--limit", type=int, default=oracle.DEFAULT_LIMIT)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET,
                   help="stats budget for --verify")
    p.add_argument("--verify", action="store_true",
                   help="also check the coverage bound and greedy dominance")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("opt-solve", help="minimize top-k mass under a sigma constraint")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--c", type=float, required=True)
    p.add_argument("--resolution", type=float, default=1e-4)
    p.set_defaults(func=cmd_opt_solve)

    p = sub.add_parser("gen", help="generate seeded instances")
    kinds = p.add_subparsers(dest="kind", required=True)

    g = kinds.add_parser("model", help="planted clusters, zero alpha/beta")
    g.add_argument("--k", type=int, required=True)
    g.add_argument("--pts", type=int, required=True)
    g.add_argument("--r", type=float, required=True)
    g.add_argument("--separation", type=float, required=True)
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("--weak-separation", action="store_true")
    g.add_argument("--condensed", action="store_true")
    g.add_argument("--out", default=None)
    g.set_defaults(func=cmd_gen)

    g = kinds.add_parser("adversarial", help="transversal worst case")
    g.add_argument("--s", type=int, required=True)
    g.add_argument("--m", type=int, required=True)
    g.add_argument("--r", type=float, required=True)
    g.add_argument("--r-prime", type=float, required=True)
    g.add_argument("--condensed", action="store_true")
    g.add_argument("--out", default=None)
    g.set_defaults(func=cmd_gen)

    g = kinds.add_parser("blobs", help="Gaussian blob point cloud (CSV)")
    g.add_argument("--blobs", type=int, required=True)
    g.add_argument("--pts", type=int, required=True)
    g.add_argument("--dim", type=int, required=True)
    g.add_argument("--spread", type=float, required=True)
    g.add_argument("--separation", type=float, required=True)
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("--out", default=None)
    g.set_defaults(func=cmd_gen)

    g = kinds.add_parser("random", help="uniform cube points or random semimetric")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("--style", choices=generators.RANDOM_STYLES, default="uniform_cube")
    g.add_argument("--dim", type=int, default=3)
    g.add_argument("--condensed", action="store_true")
    g.add_argument("--out", default=None)
    g.set_defaults(func=cmd_gen)

    p = sub.add_parser("discretize", help="epsilon-coarsen a space")
    _add_input_args(p)
    _add_scale_args(p)
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--denominator-bound", type=int, default=discretize.DEFAULT_DENOMINATOR_BOUND)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--out", default=None, help="write the quotient space JSON here")
    p.add_argument("--map-out", default=None, help="write the cell membership map here")
    p.set_defaults(func=cmd_discretize)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ClusterCertError as exc:
        _emit({"error": exc.to_dict()})
        return EXIT_ERROR
    except json.JSONDecodeError as exc:
        _emit(
            {
                "error": {
                    "type": "parse_error",
                    "message": f"line {exc.lineno}, column {exc.colno}: {exc.msg}",
                    "details": {"lineno": exc.lineno, "colno": exc.colno},
                }
            }
        )
        return EXIT_ERROR
    except OSError as exc:
        _emit({"error": {"type": "io_error", "message": str(exc), "details": {}}})
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
