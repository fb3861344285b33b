"""Command-line front end: instance lifecycle, reductions, attacks, verification.

Exit codes: 0 success, 1 not-found / insufficient coverage, 2 bad input,
3 resource ceiling.  Every randomized run records its seed in the report and
is reproducible from it.  Long experiments stream line-delimited JSON
progress events to stderr with --progress.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from fractions import Fraction

import numpy as np

from . import estimator, ffmat, lattice, reductions, regsd, ressd
from .errors import DimensionTooLarge, OutputCapExceeded, RsdkitError

EXIT_OK = 0
EXIT_NOT_FOUND = 1
EXIT_BAD_INPUT = 2
EXIT_CEILING = 3


def _report(command, parameters, seed, t0, outcome, artifacts=(), metrics=None):
    rep = {
        "command": command,
        "parameters": parameters,
        "seed": seed,
        "wall_time_ms": round((time.perf_counter() - t0) * 1e3, 3),
        "outcome": outcome,
        "artifacts": list(artifacts),
        "metrics": metrics or {},
    }
    print(json.dumps(rep, sort_keys=True))
    return rep


def _progress(enabled, **event):
    if enabled:
        print(json.dumps({"event": "progress", **event}), file=sys.stderr, flush=True)


def _params(args) -> dict:
    return {k: v for k, v in vars(args).items()
            if k not in ("func", "cmd") and isinstance(v, (int, float, str, bool, type(None)))}


def _resolve(path):
    """Relative paths resolve under RSDKIT_DATA_DIR when set."""
    import os

    if path is None or os.path.isabs(path):
        return path
    return os.path.join(os.environ.get("RSDKIT_DATA_DIR", "."), path)


def _parse_restriction(args, field_p):
    if args.z is not None:
        return ressd.cross_restriction(field_p, args.z)
    if args.e is not None:
        elems = tuple(int(x) for x in args.e.split(","))
        return ressd.RestrictionSet(ffmat.PrimeField(field_p), elems)
    if args.e_file is not None:
        with open(args.e_file) as fh:
            elems = tuple(int(x) for x in json.load(fh))
        return ressd.RestrictionSet(ffmat.PrimeField(field_p), elems)
    raise RsdkitError("one of --z, --e, --e-file is required")


# ----------------------------------------------------------------------
# gen


def cmd_gen(args) -> int:
    t0 = time.perf_counter()
    E = _parse_restriction(args, args.p)
    inst = ressd.generate_instance(args.p, args.n, args.k, E, args.seed)
    out = _resolve(args.out)
    digest = ressd.save_instance(inst, out)
    _report("gen", {"p": args.p, "n": args.n, "k": args.k, "E": list(E.elements)},
            args.seed, t0, "ok", artifacts=[out], metrics={"sha256": digest})
    return EXIT_OK


# ----------------------------------------------------------------------
# solve


def _solve_lattice_route(inst, args, variant):
    ceiling = args.ceiling
    if variant == "cvp":
        ctx = reductions.ressd_to_cvp(inst)
        basis, ball = ctx.lattice, ctx.ball()
    elif variant == "listcvp":
        mu = Fraction(args.mu) if args.mu is not None else reductions.mean_center(inst.E)
        ctx = reductions.compact_listcvp(inst, mu)
        rsq = Fraction(args.radius) ** 2 if args.radius is not None \
            else reductions.median_radius_sq(inst.E, inst.n)
        basis, ball = ctx.lattice, ctx.ball(radius_sq=rsq)
    else:  # listsvp
        mu = int(args.mu) if args.mu is not None else int(round(reductions.mean_center(inst.E)))
        ctx = reductions.listsvp_reduce(inst, mu)
        rsq = Fraction(args.radius) ** 2 if args.radius is not None \
            else reductions.median_radius_sq(inst.E, inst.n)
        basis, ball = ctx.lattice, ctx.ball(radius_sq=rsq)
    if basis.dim > ceiling:
        raise DimensionTooLarge(
            f"lattice dimension {basis.dim} exceeds ceiling {ceiling} (--ceiling to override)")
    beta = args.beta if args.beta is not None else min(basis.dim, ceiling)
    reduced = lattice.bkz(basis, beta, ceiling=max(beta, ceiling)) if beta >= 2 else lattice.lll(basis)
    cfg = lattice.EnumConfig(pruning="linear" if args.pruning else None,
                             repeats=args.repeats, randomize_basis=args.repeats > 1,
                             seed=args.seed)
    vectors = lattice.list_enum(reduced, ball, cfg, ceiling=ceiling,
                                max_vectors=args.max_vectors)
    if variant == "cvp":
        sols = []
        for v in vectors:
            e = reductions.cvp_solution_to_ressd(ctx, v)
            if ressd.check_solution(inst, e):
                sols.append(e)
    else:
        sols = ctx.pull_back_solutions(vectors)
    if args.vectors_out:
        lattice.write_vector_stream(_resolve(args.vectors_out), vectors)
    return sols, {"enumerated": int(len(vectors)), "lattice_dim": basis.dim,
                  "beta": beta}


def cmd_solve(args) -> int:
    t0 = time.perf_counter()
    inst = ressd.load_instance(_resolve(args.instance))
    params = {"instance": args.instance, "method": args.method}
    solution = None
    metrics = {}
    if args.method == "naive":
        solution = ressd.naive_solve(inst)
    elif args.method == "regsd-prange":
        exp = regsd.expand(inst)
        res = regsd.prange_regular(exp, args.seed, args.max_iters)
        solution = res.solution
        metrics = res.to_run_log()
    elif args.method == "regsd-enum":
        exp = regsd.expand(inst)
        w = args.w_enum if args.w_enum is not None else max(2, inst.n // 2)
        ell = args.ell if args.ell is not None else max(1, min(inst.n - inst.k, 2))
        res = regsd.enum_isd(exp, w, ell, args.seed, args.max_iters)
        solution = res.solution
        metrics = res.to_run_log()
    else:
        sols, metrics = _solve_lattice_route(inst, args, args.method)
        solution = sols[0] if sols else None
        metrics["solutions_found"] = len(sols)
    if solution is None:
        _report("solve", params, args.seed, t0, "not-found", metrics=metrics)
        return EXIT_NOT_FOUND
    assert ressd.check_solution(inst, solution), "internal: unverified solution"
    metrics["solution"] = solution.tolist()
    out = _resolve(args.out)
    if out:
        with open(out, "w") as fh:
            fh.write(ressd.to_canonical_json({"solution": solution.tolist()}))
    _report("solve", params, args.seed, t0, "ok",
            artifacts=[out] if out else [], metrics=metrics)
    return EXIT_OK


# ----------------------------------------------------------------------
# reduce


def cmd_reduce(args) -> int:
    t0 = time.perf_counter()
    inst = ressd.load_instance(_resolve(args.instance))
    src_hash = ressd.instance_hash(inst)
    params = {"instance": args.instance, "target": args.target}
    payload = None
    if args.target == "regsd":
        exp = regsd.expand(inst)
        payload = regsd.expanded_to_dict(exp)
        payload["provenance"] = {"instance_sha256": src_hash}
    elif args.target == "cvp":
        ctx = reductions.ressd_to_cvp(inst)
        payload = lattice.basis_to_dict(
            ctx.lattice,
            provenance={"instance_sha256": src_hash, "reduction": "cvp-exact"})
        payload["reduction"] = {"variant": "cvp", "target": [int(x) for x in ctx.target],
                                "radius_sq": ctx.expanded.n}
    else:
        mu = Fraction(args.mu) if args.mu is not None else reductions.mean_center(inst.E)
        if args.target == "listcvp":
            ctx = reductions.compact_listcvp(inst, mu)
        else:
            ctx = reductions.listsvp_reduce(inst, int(mu))
        rsq = reductions.median_radius_sq(inst.E, inst.n)
        payload = lattice.basis_to_dict(
            ctx.lattice,
            provenance={"instance_sha256": src_hash, "reduction": args.target})
        payload["reduction"] = {
            "variant": ctx.variant,
            "mu": str(ctx.mu),
            "anchor": ctx.anchor.tolist(),
            "radius_sq": str(rsq),
            "target": [str(x) for x in ctx.target] if ctx.target is not None else None,
        }
    out = _resolve(args.out)
    with open(out, "w") as fh:
        fh.write(ressd.to_canonical_json(payload))
    _report("reduce", params, None, t0, "ok", artifacts=[out],
            metrics={"instance_sha256": src_hash})
    return EXIT_OK


# ----------------------------------------------------------------------
# estimate


def cmd_estimate(args) -> int:
    t0 = time.perf_counter()
    if args.table is not None:
        art = estimator.regenerate_table(args.table, diameter_samples=args.diameter_samples,
                                         sample_seed=args.seed or 1)
        csv_text = art.to_csv()
        if args.out:
            with open(args.out, "w") as fh:
                fh.write(csv_text)
        else:
            sys.stdout.write(csv_text)
        diffs = estimator.golden_diff(args.table, art)
        bad = [d for d in diffs if not d.ok]
        _report("estimate", {"table": args.table}, args.seed, t0,
                "ok" if not bad else "golden-mismatch",
                artifacts=[args.out] if args.out else [],
                metrics={"cells_checked": len(diffs), "cells_failing": len(bad)})
        return EXIT_OK if not bad else EXIT_NOT_FOUND
    attack = args.attack
    if attack == "naive":
        est = estimator.naive_cost(args.n, args.k, args.z)
    elif attack == "prange":
        est = estimator.prange_cost(args.n, args.k, args.z)
    elif attack == "enum-isd":
        if args.w_enum is not None and args.ell is not None:
            est = estimator.enum_isd_cost(args.n, args.k, args.p, args.z, args.w_enum, args.ell)
        else:
            est = estimator.optimize_enum_isd(args.n, args.k, args.p, args.z)
    elif attack == "hybrid-batchcvp":
        est = estimator.hybrid_batchcvp_estimate(args.n, args.k, args.p, args.z, args.zprime)
    elif attack == "hybrid-listcvp":
        E = ressd.cross_restriction(args.p, args.z)
        est = estimator.hybrid_listcvp_estimate(args.n, args.k, args.p, E, args.zprime)
    else:
        raise RsdkitError(f"unknown attack {attack!r}")
    if args.json:
        print(json.dumps(est.to_dict(), sort_keys=True))
    else:
        print(f"{est.attack}: time 2^{est.log2_time:.1f}, memory 2^{est.log2_memory:.1f}, "
              f"success 2^{est.log2_success:.1f}")
        for k, v in est.breakdown.items():
            print(f"  {k}: {v:.2f}" if isinstance(v, float) else f"  {k}: {v}")
    return EXIT_OK


# ----------------------------------------------------------------------
# verify


def cmd_verify(args) -> int:
    t0 = time.perf_counter()
    seed = args.seed
    if args.experiment == "median":
        E = ressd.cross_restriction(args.p, args.z).truncate(args.zprime)
        mu = reductions.mean_center(E)
        rsq = reductions.median_radius_sq(E, args.n)
        est = reductions.success_prob_mc(E, args.n, mu, 0.0, args.samples, seed,
                                         radius_sq=rsq)
        metrics = {"mu": float(mu), "radius": math.sqrt(float(rsq)),
                   "measured_fraction": est.p_hat, "stderr": est.stderr,
                   "heuristic_target": 0.5}
        _report("verify-median", _params(args), seed, t0, "ok", metrics=metrics)
        return EXIT_OK
    if args.experiment == "gh-count":
        E = ressd.cross_restriction(args.p, args.z).truncate(args.zprime)
        inst = ressd.generate_instance(args.p, args.n, args.k, E, seed)
        ctx = reductions.compact_listcvp(inst, reductions.mean_center(E))
        if ctx.lattice.dim > args.ceiling:
            _report("verify-gh-count", _params(args), seed, t0, "ceiling")
            return EXIT_CEILING
        reduced = lattice.bkz(ctx.lattice, min(ctx.lattice.dim, args.ceiling))
        ball = ctx.ball()
        vectors, nodes = lattice.list_enum(reduced, ball, lattice.EnumConfig(),
                                           ceiling=args.ceiling,
                                           max_vectors=args.max_vectors,
                                           return_nodes=True)
        predicted = lattice.gh_count_log2(inst.n, float(ball.radius),
                                          (inst.n - inst.k) * math.log2(inst.p))
        measured = math.log2(len(vectors)) if len(vectors) else -math.inf
        metrics = {"enumerated": int(len(vectors)), "nodes": int(nodes),
                   "measured_log2": measured, "predicted_log2": predicted,
                   "deviation_log2": measured - predicted}
        _report("verify-gh-count", _params(args), seed, t0, "ok", metrics=metrics)
        return EXIT_OK
    if args.experiment == "trunc-prob":
        E = ressd.cross_restriction(args.p, args.z)
        inst = ressd.generate_instance(args.p, args.n, args.k, E, seed)
        hits = 0
        for i in range(args.samples):
            _, _, _E2 = None, None, None
            new, _ctx, _E2 = ressd.mult_truncate(inst, args.zprime, seed + 1 + i)
            hits += new.planted is not None
            if args.progress and (i + 1) % max(1, args.samples // 10) == 0:
                _progress(True, done=i + 1, total=args.samples)
        expected = (args.zprime / args.z) ** args.n
        p_hat = hits / args.samples
        stderr = math.sqrt(max(expected * (1 - expected), 1.0 / args.samples) / args.samples)
        metrics = {"measured": p_hat, "expected": expected, "stderr": stderr,
                   "within_3_sigma": abs(p_hat - expected) <= 3 * stderr}
        _report("verify-trunc-prob", _params(args), seed, t0, "ok", metrics=metrics)
        return EXIT_OK
    if args.experiment == "eq1-rate":
        E = ressd.cross_restriction(args.p, args.z)
        inst = ressd.generate_instance(args.p, args.n, args.k, E, seed)
        exp = regsd.expand(inst)
        res = regsd.prange_regular(exp, seed, args.iters, count_all=True)
        expected = 2.0 ** estimator.prange_success_log2(args.n, args.k, args.z)
        p_hat = res.successes / res.iterations
        stderr = math.sqrt(max(expected * (1 - expected), 1.0 / res.iterations) / res.iterations)
        metrics = {"measured": p_hat, "expected": expected, "stderr": stderr,
                   "successes": res.successes, "iterations": res.iterations,
                   "singular_draws": res.singular_draws,
                   "within_3_sigma": abs(p_hat - expected) <= 3 * stderr}
        _report("verify-eq1-rate", _params(args), seed, t0, "ok", metrics=metrics)
        return EXIT_OK
    raise RsdkitError(f"unknown experiment {args.experiment!r}")


# ----------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="rsdkit",
                                 description="restricted-decoding cryptanalysis workbench")
    sub = ap.add_subparsers(dest="cmd", required=True)

    g = sub.add_parser("gen", help="generate a planted instance")
    g.add_argument("--p", type=int, required=True)
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--k", type=int, required=True)
    g.add_argument("--z", type=int, help="use the order-z subgroup restriction")
    g.add_argument("--e", type=str, help="comma-separated restriction elements")
    g.add_argument("--e-file", type=str, help="JSON file with restriction elements")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", type=str, required=True)
    g.set_defaults(func=cmd_gen)

    s = sub.add_parser("solve", help="run a solver on an instance file")
    s.add_argument("instance")
    s.add_argument("--method", required=True,
                   choices=["naive", "regsd-prange", "regsd-enum", "cvp", "listcvp", "listsvp"])
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--max-iters", type=int, default=100000)
    s.add_argument("--w-enum", type=int)
    s.add_argument("--ell", type=int)
    s.add_argument("--mu", type=str)
    s.add_argument("--radius", type=str)
    s.add_argument("--beta", type=int)
    s.add_argument("--pruning", action="store_true")
    s.add_argument("--repeats", type=int, default=1)
    s.add_argument("--ceiling", type=int, default=lattice.DEFAULT_ENUM_CEILING)
    s.add_argument("--max-vectors", type=int, default=1 << 22)
    s.add_argument("--vectors-out", type=str,
                   help="stream enumerated vectors (line-delimited JSON)")
    s.add_argument("--out", type=str)
    s.set_defaults(func=cmd_solve)

    r = sub.add_parser("reduce", help="write a reduced problem file")
    r.add_argument("instance")
    r.add_argument("--target", required=True, choices=["regsd", "cvp", "listcvp", "listsvp"])
    r.add_argument("--mu", type=str)
    r.add_argument("--out", type=str, required=True)
    r.set_defaults(func=cmd_reduce)

    e = sub.add_parser("estimate", help="attack cost estimates and table regeneration")
    e.add_argument("attack", nargs="?",
                   choices=["naive", "prange", "enum-isd", "hybrid-batchcvp", "hybrid-listcvp"])
    e.add_argument("--table", type=int, choices=[2, 3, 4, 6])
    e.add_argument("--n", type=int)
    e.add_argument("--k", type=int)
    e.add_argument("--p", type=int, default=127)
    e.add_argument("--z", type=int, default=7)
    e.add_argument("--zprime", type=int, default=7)
    e.add_argument("--w-enum", type=int)
    e.add_argument("--ell", type=int)
    e.add_argument("--diameter-samples", type=int, default=0)
    e.add_argument("--seed", type=int)
    e.add_argument("--json", action="store_true")
    e.add_argument("--out", type=str)
    e.set_defaults(func=cmd_estimate)

    v = sub.add_parser("verify", help="statistical verification experiments")
    v.add_argument("experiment", choices=["median", "gh-count", "trunc-prob", "eq1-rate"])
    v.add_argument("--p", type=int, default=127)
    v.add_argument("--n", type=int, default=35)
    v.add_argument("--k", type=int, default=21)
    v.add_argument("--z", type=int, default=7)
    v.add_argument("--zprime", type=int, default=4)
    v.add_argument("--samples", type=int, default=100000)
    v.add_argument("--iters", type=int, default=10000)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--ceiling", type=int, default=lattice.DEFAULT_ENUM_CEILING)
    v.add_argument("--max-vectors", type=int, default=1 << 22)
    v.add_argument("--progress", action="store_true")
    v.set_defaults(func=cmd_verify)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except (DimensionTooLarge, OutputCapExceeded) as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        return EXIT_CEILING
    except (RsdkitError, ValueError, OSError) as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        return EXIT_BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
