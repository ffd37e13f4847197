"""Command-line interface.

Subcommands: ``simulate``, ``metric``, ``oscillation``, ``verify``,
``estimate``, ``garch``.  Reports are emitted as canonical JSON (full
double precision, sorted keys) or flat CSV (6 significant digits);
identical argv and seed produce byte-identical JSON on any worker
count.  Wall-clock diagnostics go to stderr, never into the payload.

Exit codes: 0 success / all verifications passed; 1 a verification
failed its threshold; 2 usage, parse or domain errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor

from . import extremal, maxima, models, regvar, skorokhod, verify
from .cadlag import StepFunction
from .errors import ResourceLimitError

_FMT = "%.6g"


def _default_threads() -> int:
    env = os.environ.get("MAXSTREAM_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def _resolve_threads(args) -> int:
    # The environment variable wins over the flag.
    env = os.environ.get("MAXSTREAM_THREADS")
    if env:
        return max(1, int(env))
    return max(1, args.threads)


def _build_model(args) -> models.ProcessModel:
    if getattr(args, "config", None):
        with open(args.config, "r", encoding="utf-8") as fh:
            return models.model_from_dict(json.load(fh))
    kind = args.model
    if kind == "iid":
        return models.IID(alpha=args.alpha, scale=args.scale)
    if kind == "mm":
        if not args.coeffs:
            raise ValueError("--coeffs is required for the mm model")
        return models.MovingMaxima(tuple(float(v) for v in args.coeffs.split(",")))
    if kind == "armax":
        return models.Armax(args.c)
    if kind == "garch2":
        return models.SquaredGarch(args.alpha0, args.alpha1, args.beta1)
    raise ValueError(f"unknown model {kind!r}")


def _add_model_flags(p: argparse.ArgumentParser, with_extremal: bool = False):
    choices = ["iid", "mm", "armax", "garch2"]
    if with_extremal:
        choices.append("extremal")
    p.add_argument("--model", choices=choices, default="iid",
                   help="process model")
    p.add_argument("--config", default=None,
                   help="JSON file with a model spec (overrides inline flags)")
    p.add_argument("--alpha", type=float, default=1.0, help="iid tail index")
    p.add_argument("--scale", type=float, default=1.0, help="iid Frechet scale")
    p.add_argument("--coeffs", default=None,
                   help="mm coefficients, comma separated (sum to 1)")
    p.add_argument("--c", type=float, default=0.5, help="armax coefficient")
    p.add_argument("--alpha0", type=float, default=1e-6, help="garch2 alpha0")
    p.add_argument("--alpha1", type=float, default=0.1, help="garch2 alpha1")
    p.add_argument("--beta1", type=float, default=0.8, help="garch2 beta1")


def _emit(args, payload: str):
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(payload)
    else:
        sys.stdout.write(payload)


def _emit_report(args, report: verify.VerificationReport) -> int:
    if args.format == "csv":
        _emit(args, report.to_csv())
    else:
        _emit(args, report.to_json() + "\n")
    print(f"runtime_seconds={report.runtime_seconds:.3f}", file=sys.stderr)
    return 0 if report.passed else 1


def _emit_obj(args, obj: dict) -> int:
    if args.format == "csv":
        keys = list(obj)
        row = ",".join(
            _FMT % v if isinstance(v, float) else str(v)
            for v in (obj[k] for k in keys))
        _emit(args, ",".join(keys) + "\n" + row + "\n")
    else:
        _emit(args, json.dumps(obj, sort_keys=True, indent=2) + "\n")
    return 0


def _pmap(args):
    threads = _resolve_threads(args)
    if threads <= 1:
        return None
    pool = ThreadPoolExecutor(max_workers=threads)
    return pool.map


# ----------------------------------------------------------------------
# Subcommand runners
# ----------------------------------------------------------------------

def _cmd_simulate(args) -> int:
    if args.model == "extremal":
        path = extremal.simulate_extremal_process(
            args.alpha, args.theta, args.floor, args.seed)
        _emit(args, path.to_csv() if args.format == "csv"
              else path.to_json() + "\n")
        return 0
    model = _build_model(args)
    xs = models.generate(model, args.n, args.seed)
    if args.path:
        a_n = args.an if args.an is not None else regvar.normalizer_an(model, args.n)
        path = maxima.partial_max_process(xs, a_n)
        _emit(args, path.to_csv() if args.format == "csv"
              else path.to_json() + "\n")
        return 0
    if args.format == "csv":
        rows = "\n".join(_FMT % v for v in xs)
        _emit(args, rows + "\n")
    else:
        _emit(args, json.dumps(
            {"model": models.model_to_dict(model), "n": args.n,
             "seed": args.seed, "sequence": [float(v) for v in xs]},
            sort_keys=True) + "\n")
    return 0


def _load_path(fname: str) -> StepFunction:
    with open(fname, "r", encoding="utf-8") as fh:
        text = fh.read()
    if fname.endswith(".csv"):
        return StepFunction.from_csv(text)
    return StepFunction.from_json(text)


def _cmd_metric(args) -> int:
    f = _load_path(args.left)
    g = _load_path(args.right)
    fn = skorokhod.d_m1 if args.kind == "m1" else skorokhod.d_j1
    value = fn(f, g, args.tol)
    return _emit_obj(args, {"metric": args.kind, "value": float(value),
                            "tol": args.tol})


def _cmd_oscillation(args) -> int:
    f = _load_path(args.path)
    out = {"delta": args.delta}
    if args.kind in ("m1", "both"):
        out["m1"] = skorokhod.osc_m1(f, args.delta)
    if args.kind in ("j1", "both"):
        out["j1"] = skorokhod.osc_j1(f, args.delta)
    return _emit_obj(args, out)


def _cmd_verify(args) -> int:
    pmap = _pmap(args)
    if args.check == "max-limit":
        report = verify.verify_max_limit(
            _build_model(args), args.n, args.trials, args.seed,
            ks_threshold=args.ks_threshold, pmap=pmap)
    elif args.check == "fidi":
        times = tuple(float(v) for v in args.times.split(","))
        levels = tuple(float(v) for v in args.levels.split(","))
        report = verify.verify_fidi(
            _build_model(args), args.n, args.trials, times, levels,
            args.seed, tolerance=args.tolerance, pmap=pmap)
    elif args.check == "j1-failure":
        report = verify.j1_failure_experiment(
            args.c0, args.c1, args.eps, args.n, args.trials, args.seed,
            a_tol=args.a_tol, ab_floor=args.ab_floor, pmap=pmap)
    elif args.check == "cluster-poisson":
        report = verify.poisson_cluster_check(
            _build_model(args), args.n, args.u, args.block_len,
            args.trials, args.seed, mean_rtol=args.mean_rtol, pmap=pmap)
    elif args.check == "karamata":
        report = _karamata_report(args)
    else:  # pragma: no cover - argparse restricts choices
        raise ValueError(args.check)
    return _emit_report(args, report)


def _karamata_report(args) -> verify.VerificationReport:
    import time
    t0 = time.perf_counter()
    target = args.alpha / (args.s - args.alpha)
    value = regvar.karamata_ratio(args.alpha, args.s, args.eps, args.n)
    passed = abs(value - target) <= args.rtol * target
    return verify.VerificationReport(
        experiment="karamata",
        model=None,
        params={"alpha": args.alpha, "s": args.s, "eps": args.eps,
                "n": args.n, "rtol": args.rtol},
        estimates={"ratio": {"value": float(value), "stderr": None}},
        targets={"ratio": {"value": float(target),
                           "provenance": "limit alpha / (s - alpha)"}},
        passed=bool(passed),
        runtime_seconds=time.perf_counter() - t0,
    )


def _cmd_estimate(args) -> int:
    model = _build_model(args)
    if args.method == "conditional":
        if args.grid:
            report = verify.theta_conditional_grid(
                model, args.trials, args.seed, pmap=_pmap(args))
            return _emit_report(args, report)
        est, se = verify.estimate_theta_conditional(
            model, args.r, args.quantile, args.trials, args.seed,
            pmap=_pmap(args))
        return _emit_obj(args, {
            "method": "conditional", "estimate": est, "stderr": se,
            "r": args.r, "quantile": args.quantile, "trials": args.trials,
            "seed": args.seed})
    xs = models.generate(model, args.n, args.seed)
    threshold = model.marginal_quantile(args.threshold_quantile)
    est = verify.estimate_theta_blocks(xs, args.block_len, threshold)
    return _emit_obj(args, {
        "method": "blocks", "estimate": est, "n": args.n,
        "block_len": args.block_len,
        "threshold_quantile": args.threshold_quantile,
        "threshold": float(threshold), "seed": args.seed})


def _cmd_garch(args) -> int:
    if args.quantity == "alpha":
        value = models.garch_tail_index(args.alpha1, args.beta1)
        return _emit_obj(args, {"alpha": value, "alpha1": args.alpha1,
                                "beta1": args.beta1})
    res = models.garch_extremal_index(
        args.alpha1, args.beta1, k_max=args.k_max, trials=args.trials,
        seed=args.seed)
    return _emit_obj(args, {
        "theta": res.estimate, "stderr": res.stderr,
        "k_values": list(res.k_values),
        "k_estimates": list(res.k_estimates),
        "alpha1": args.alpha1, "beta1": args.beta1,
        "k_max": args.k_max, "trials": args.trials, "seed": args.seed})


# ----------------------------------------------------------------------
# Parser
# ----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    fmt = argparse.ArgumentDefaultsHelpFormatter
    top = argparse.ArgumentParser(
        prog="maxstream",
        description="Simulation and verification toolkit for partial-maxima "
                    "limit theorems of heavy-tailed stationary sequences.")
    sub = top.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--seed", type=int, default=0, help="base RNG seed")
        p.add_argument("--threads", type=int, default=_default_threads(),
                       help="worker threads (env MAXSTREAM_THREADS overrides)")
        p.add_argument("--out", default=None, help="output file (default stdout)")
        p.add_argument("--format", choices=["json", "csv"], default="json",
                       help="output format")

    p = sub.add_parser("simulate", formatter_class=fmt,
                       help="draw a sequence, a maxima path, or an extremal-"
                            "process path")
    _add_model_flags(p, with_extremal=True)
    p.add_argument("--n", type=int, default=1000, help="sequence length")
    p.add_argument("--path", action="store_true",
                   help="emit the scaled partial-maxima path instead of the "
                        "raw sequence")
    p.add_argument("--an", type=float, default=None,
                   help="override the normalizer a_n (default: exact quantile)")
    p.add_argument("--theta", type=float, default=1.0,
                   help="extremal-process theta")
    p.add_argument("--floor", type=float, default=0.05,
                   help="extremal-process simulation floor")
    common(p)
    p.set_defaults(run=_cmd_simulate)

    p = sub.add_parser("metric", formatter_class=fmt,
                       help="M1/J1 distance between two serialized paths")
    p.add_argument("kind", choices=["m1", "j1"])
    p.add_argument("--left", required=True, help="path file (json or csv)")
    p.add_argument("--right", required=True, help="path file (json or csv)")
    p.add_argument("--tol", type=float, default=1e-6,
                   help="refinement tolerance")
    common(p)
    p.set_defaults(run=_cmd_metric)

    p = sub.add_parser("oscillation", formatter_class=fmt,
                       help="M1/J1 oscillation of a serialized path")
    p.add_argument("--path", required=True, help="path file (json or csv)")
    p.add_argument("--delta", type=float, required=True, help="window width")
    p.add_argument("--kind", choices=["m1", "j1", "both"], default="both")
    common(p)
    p.set_defaults(run=_cmd_oscillation)

    p = sub.add_parser("verify", formatter_class=fmt,
                       help="run a verification experiment (exit 1 on fail)")
    p.add_argument("check", choices=["max-limit", "fidi", "j1-failure",
                                     "cluster-poisson", "karamata"])
    _add_model_flags(p)
    p.add_argument("--n", type=int, default=10_000, help="path length")
    p.add_argument("--trials", type=int, default=4000, help="Monte Carlo trials")
    p.add_argument("--ks-threshold", type=float, default=None,
                   help="KS pass threshold (default 2*1.628/sqrt(trials))")
    p.add_argument("--times", default="0.5,1.0", help="fidi times, comma list")
    p.add_argument("--levels", default="1.0,2.0", help="fidi levels, comma list")
    p.add_argument("--tolerance", type=float, default=0.02,
                   help="fidi absolute tolerance")
    p.add_argument("--c0", type=float, default=0.2, help="j1-failure c0")
    p.add_argument("--c1", type=float, default=0.8, help="j1-failure c1")
    p.add_argument("--eps", type=float, default=10.0,
                   help="j1-failure / karamata epsilon")
    p.add_argument("--a-tol", type=float, default=0.005,
                   help="j1-failure tolerance on P(A)")
    p.add_argument("--ab-floor", type=float, default=0.01,
                   help="j1-failure floor on P(A \\ B)")
    p.add_argument("--u", type=float, default=1.0, help="cluster level u")
    p.add_argument("--block-len", type=int, default=None,
                   help="cluster block length (default ceil(sqrt(n)))")
    p.add_argument("--mean-rtol", type=float, default=0.15,
                   help="cluster mean relative tolerance")
    p.add_argument("--s", type=float, default=2.0, help="karamata moment order")
    p.add_argument("--rtol", type=float, default=0.02,
                   help="karamata relative tolerance")
    common(p)
    p.set_defaults(run=_cmd_verify)

    p = sub.add_parser("estimate", formatter_class=fmt,
                       help="estimate the extremal index from simulation")
    p.add_argument("quantity", choices=["theta"])
    p.add_argument("--method", choices=["conditional", "blocks"],
                   default="conditional")
    _add_model_flags(p)
    p.add_argument("--r", type=int, default=50, help="conditional window")
    p.add_argument("--quantile", type=float, default=0.999,
                   help="conditional threshold quantile")
    p.add_argument("--grid", action="store_true",
                   help="report the full (r, quantile) grid of conditional "
                        "estimates (r in 10/50/200, q in 0.99/0.999)")
    p.add_argument("--trials", type=int, default=1_000_000,
                   help="conditional simulated stretches")
    p.add_argument("--n", type=int, default=1_000_000, help="blocks sample size")
    p.add_argument("--block-len", type=int, default=None,
                   help="blocks length (default ceil(sqrt(n)))")
    p.add_argument("--threshold-quantile", type=float, default=0.998,
                   help="blocks threshold quantile")
    common(p)
    p.set_defaults(run=_cmd_estimate)

    p = sub.add_parser("garch", formatter_class=fmt,
                       help="squared-GARCH tail index or extremal index")
    p.add_argument("quantity", choices=["alpha", "theta"])
    p.add_argument("--alpha1", type=float, required=True)
    p.add_argument("--beta1", type=float, required=True)
    p.add_argument("--k-max", type=int, default=100,
                   help="theta truncation depth")
    p.add_argument("--trials", type=int, default=100_000,
                   help="theta Monte Carlo trials")
    common(p)
    p.set_defaults(run=_cmd_garch)

    return top


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.run(args)
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"maxstream: error: {exc}", file=sys.stderr)
        return 2
    except ResourceLimitError as exc:
        print(f"maxstream: resource limit: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
