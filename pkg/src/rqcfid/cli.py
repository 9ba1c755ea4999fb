"""Command-line front end.

Subcommands: fidelity, analytic, route-stats, qv-contour, hu-vs-f, brickwall,
validate.  Exit codes: 0 success, 2 flag errors (argparse), 1 runtime errors
or failed validation criteria.  `--config file.json` supplies defaults for
any flag; explicit flags win.  `--seed` fully determines all outputs.
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
from typing import Optional

from . import acceptance, analytics
from .circuits import BRICKWALL, ORIGINAL, SOLVABLE, CircuitConfig
from .experiments import SweepSpec, hu_vs_f_scatter, run_sweep, write_results
from .routing import Architecture, NoiseParams, routing_stats
from .seeding import Seed


def _default_threads() -> int:
    env = os.environ.get("RQC_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def _add_common(p: argparse.ArgumentParser, mc: bool = True) -> None:
    p.add_argument("--seed", type=int, default=0, help="64-bit master seed")
    p.add_argument("--out", type=str, default=None, help="output file path")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--config", type=str, default=None,
                   help="JSON file with default values for any flag")
    if mc:
        p.add_argument("--threads", type=int, default=None,
                       help="worker processes (default: RQC_THREADS or all cores)")


def _add_arch(p: argparse.ArgumentParser) -> None:
    p.add_argument("--arch", choices=("fc", "line", "grid"), default="fc")
    p.add_argument("--d", type=int, default=None, help="grid dimension")
    p.add_argument("--side", type=int, default=None, help="grid side (equal sides)")
    p.add_argument("--sides", type=str, default=None,
                   help="comma-separated per-axis grid sides (overrides --d/--side)")


def _arch_from(args) -> Architecture:
    if args.arch != "grid":
        return Architecture.fully_connected() if args.arch == "fc" else Architecture.line()
    if args.sides:
        return Architecture.grid(*(int(s) for s in args.sides.split(",")))
    if args.d is None or args.side is None:
        raise ValueError("grid architecture needs --sides or both --d and --side")
    return Architecture.grid(*([args.side] * args.d))


def _noise_from(args) -> NoiseParams:
    if getattr(args, "sigma", None) is not None and args.p:
        raise ValueError("--p and --sigma are mutually exclusive")
    if getattr(args, "sigma", None) is not None:
        return NoiseParams(alpha=args.alpha, sigma=args.sigma)
    return NoiseParams(alpha=args.alpha, p=args.p)


def _write_meta(args, extra: Optional[dict] = None) -> None:
    if not args.out:
        return
    meta = {k: v for k, v in vars(args).items() if k not in ("func", "config")}
    if extra:
        meta.update(extra)
    with open(str(args.out) + ".meta.json", "w") as fh:
        json.dump(meta, fh, indent=1, default=str)
        fh.write("\n")


def _emit(rows, args, columns=None, extra_meta: Optional[dict] = None) -> None:
    if args.out:
        write_results(rows, args.out, args.format, columns=columns)
        _write_meta(args, extra_meta)
    else:
        for r in rows:
            d = dataclasses.asdict(r) if dataclasses.is_dataclass(r) else dict(r)
            print(" ".join(f"{k}={v}" for k, v in d.items()))


# ---------------------------------------------------------------- commands

def _cmd_fidelity(args) -> int:
    arch = _arch_from(args)
    noise = _noise_from(args)
    cfg = CircuitConfig(args.L, args.T, arch, noise, model=args.model)
    if args.axis:
        if not args.values:
            raise ValueError("--axis needs --values")
        values = tuple(float(v) if args.axis in ("alpha", "p") else int(v)
                       for v in args.values.split(","))
    else:
        values = (args.T,)
    spec = SweepSpec(cfg, axis=args.axis or "T", values=values, trials=args.trials)
    rows = run_sweep(spec, Seed(args.seed), workers=args.threads)
    extra = {"derived_p": noise.p} if noise.pulse_mode else None
    _emit(rows, args, extra_meta=extra)
    return 0


def _cmd_analytic(args) -> int:
    arch = _arch_from(args)
    mode = args.mode or analytics.default_delta_mode(arch)
    delta = analytics.delta_formula(arch, args.L, args.p, mode)
    value = analytics.solvable_fidelity(args.L, args.T, args.alpha, delta)
    print(value)
    if args.out:
        rows = [{"L": args.L, "T": args.T, "alpha": args.alpha, "p": args.p,
                 "arch": arch.label(), "mode": mode, "value": value}]
        write_results(rows, args.out, args.format)
        _write_meta(args)
    return 0


def _cmd_route_stats(args) -> int:
    arch = _arch_from(args)
    L = args.L if args.L else arch.num_qubits
    if L is None:
        raise ValueError("--L is required for non-grid architectures")
    stats = routing_stats(arch, L, args.samples, Seed(args.seed))
    rows = [{"arch": stats.arch, "L": stats.num_qubits, "samples": stats.samples,
             "mean_swaps": stats.mean_swaps, "var_swaps": stats.var_swaps,
             "mean_layers": stats.mean_layers, "max_layers": stats.max_layers}]
    _emit(rows, args)
    return 0


def _cmd_qv_contour(args) -> int:
    arch = _arch_from(args)
    if arch.kind == "grid":
        raise ValueError("contours are implemented for fc and line architectures")
    grid = [args.p_max * k / (args.p_points - 1) for k in range(args.p_points)]
    pts = analytics.qv_contour(args.L, args.T, arch, grid)
    rows = [{"arch": arch.label(), "L": args.L, "T": args.T, "p": p,
             "alpha_star": a} for p, a in pts]
    _emit(rows, args)
    return 0


_SCATTER_COLUMNS = ("arch", "L", "T", "alpha", "p",
                    "f_mean", "f_stderr", "h_mean", "h_stderr")


def _cmd_hu_vs_f(args) -> int:
    configs = [c for c in acceptance.heavy_output_scatter_configs(args.L)
               if args.arch == "both" or c.arch.kind == args.arch]
    result = hu_vs_f_scatter(configs, args.trials, Seed(args.seed),
                             workers=args.threads)
    rows = list(result.points)
    _emit(rows, args, columns=_SCATTER_COLUMNS)
    if result.fit is None:
        print("fit: degenerate (no spread in fidelity)")
    else:
        print(f"fit: h = {result.fit.slope:.4f} * F + {result.fit.intercept:.4f}, "
              f"r^2 = {result.fit.r_squared:.4f}")
    print(f"linear-map RMS residual: {result.map_rms:.4f}")
    return 0


def _cmd_brickwall(args) -> int:
    cfg = CircuitConfig(args.L, args.T, Architecture.fully_connected(),
                        NoiseParams(alpha=args.alpha), model=BRICKWALL)
    spec = SweepSpec(cfg, axis="T", values=(args.T,), trials=args.trials)
    rows = run_sweep(spec, Seed(args.seed), workers=args.threads)
    _emit(rows, args)
    return 0


def _cmd_validate(args) -> int:
    numbers = [int(n) for n in args.only.split(",")] if args.only else None
    results = acceptance.run(numbers, workers=args.threads)
    return 0 if all(r.passed for r in results) else 1


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="rqcfid",
        description="Random-circuit fidelity decay: simulation, closed forms, "
                    "routing statistics and the quantum-volume threshold.")
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fidelity", help="Monte Carlo fidelity sweep")
    _add_arch(p)
    p.add_argument("--model", choices=(ORIGINAL, SOLVABLE, BRICKWALL), default=ORIGINAL)
    p.add_argument("--L", type=int, required=True)
    p.add_argument("--T", type=int, required=True)
    p.add_argument("--alpha", type=float, default=0.0)
    p.add_argument("--p", type=float, default=0.0)
    p.add_argument("--sigma", type=float, default=None)
    p.add_argument("--trials", type=int, default=2000)
    p.add_argument("--axis", choices=("T", "alpha", "p", "L"), default=None)
    p.add_argument("--values", type=str, default=None,
                   help="comma-separated axis values (with --axis)")
    _add_common(p)
    p.set_defaults(func=_cmd_fidelity)

    p = sub.add_parser("analytic", help="closed-form fidelity prediction")
    _add_arch(p)
    p.add_argument("--L", type=int, required=True)
    p.add_argument("--T", type=int, required=True)
    p.add_argument("--alpha", type=float, default=0.0)
    p.add_argument("--p", type=float, default=0.0)
    p.add_argument("--mode", type=str, default=None,
                   help="delta variant (default: exact for fc, sparse otherwise)")
    _add_common(p, mc=False)
    p.set_defaults(func=_cmd_analytic)

    p = sub.add_parser("route-stats", help="swap/layer statistics of the router")
    _add_arch(p)
    p.add_argument("--L", type=int, default=None)
    p.add_argument("--samples", type=int, default=10000)
    _add_common(p, mc=False)
    p.set_defaults(func=_cmd_route_stats)

    p = sub.add_parser("qv-contour", help="quantum-volume threshold contour")
    _add_arch(p)
    p.add_argument("--L", type=int, required=True)
    p.add_argument("--T", type=int, required=True)
    p.add_argument("--p-max", type=float, default=0.05)
    p.add_argument("--p-points", type=int, default=26)
    _add_common(p, mc=False)
    p.set_defaults(func=_cmd_qv_contour)

    p = sub.add_parser("hu-vs-f", help="heavy output vs fidelity scatter and fit")
    p.add_argument("--arch", choices=("fc", "line", "both"), default="both")
    p.add_argument("--L", type=int, default=10)
    p.add_argument("--trials", type=int, default=1000)
    _add_common(p)
    p.set_defaults(func=_cmd_hu_vs_f)

    p = sub.add_parser("brickwall", help="brick-wall circuit fidelity estimate")
    p.add_argument("--L", type=int, required=True)
    p.add_argument("--T", type=int, required=True)
    p.add_argument("--alpha", type=float, default=0.0)
    p.add_argument("--trials", type=int, default=10000)
    _add_common(p)
    p.set_defaults(func=_cmd_brickwall)

    p = sub.add_parser("validate", help="run the acceptance criteria")
    p.add_argument("--only", type=str, default=None,
                   help="comma-separated criterion numbers")
    _add_common(p)
    p.set_defaults(func=_cmd_validate)
    return top


def _inject_config(argv: list[str]) -> list[str]:
    """Expand --config file.json into flags placed right after the subcommand,
    so explicit flags (parsed later) win."""
    if "--config" not in argv:
        return argv
    at = argv.index("--config")
    with open(argv[at + 1]) as fh:
        defaults = json.load(fh)
    injected = []
    for key, value in defaults.items():
        injected += [f"--{key.replace('_', '-')}", str(value)]
    return argv[:1] + injected + argv[1:]


def main(argv=None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    parser = build_parser()
    try:
        argv = _inject_config(list(argv))
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    args = parser.parse_args(argv)   # bad flags -> argparse exits with code 2
    if hasattr(args, "threads") and args.threads is None:
        args.threads = _default_threads()
    try:
        return args.func(args)
    except Exception as exc:  # runtime failures -> exit 1 with a message
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
