"""Command-line interface: spectrum, dynamics, limits, compare, validate.

Exit codes: 0 success, 1 validation failure, 2 usage error, 3 solver
failure, 4 degenerate-parameter error.
"""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import dynamics, emit, limits, oracle, presets, solver
from .errors import BracketError, ConvergenceError, DegenerateParameterError, QLadderError
from .params import ModelParams
from .version import __version__

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_USAGE = 2
EXIT_SOLVER = 3
EXIT_DEGENERATE = 4


def _usage_error(message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return EXIT_USAGE


def _model_params(args) -> ModelParams:
    return ModelParams(v=args.v, delta=args.delta, a=args.a, e_phi=args.e_phi)


def _add_model_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--v", type=float, required=True, help="coupling amplitude")
    sub.add_argument("--delta", type=float, required=True, help="ladder spacing (> 0)")
    sub.add_argument("--a", type=float, required=True, help="dimensionless resonance width (> 0)")
    sub.add_argument("--e-phi", type=float, default=0.0, dest="e_phi", help="discrete-state energy")


def _meta_for(p: ModelParams) -> dict:
    return {
        "v": p.v,
        "delta": p.delta,
        "a": p.a,
        "e_phi": p.e_phi,
        "gamma": p.gamma,
        "big_gamma": p.big_gamma,
        "w_scale": p.w,
    }


def _cmd_spectrum(args) -> int:
    if args.v == 0.0:
        return _usage_error("coupling must be nonzero")
    if (args.window_min is None) != (args.window_max is None):
        return _usage_error("--window-min and --window-max must be given together")
    p = _model_params(args)
    window = None
    if args.window_min is not None:
        if args.window_min >= args.window_max:
            return _usage_error("--window-min must be below --window-max")
        window = (args.window_min, args.window_max)
    s = solver.solve_spectrum(p, window)
    columns = ["index", "eps", "energy", "weight", "interval_index", "residual"]
    rows = [
        [i, float(s.eps[i]), float(s.energies[i]), float(s.weights[i]), int(s.interval_index[i]), float(s.residuals[i])]
        for i in range(len(s))
    ]
    meta = _meta_for(p)
    meta.update(
        window_min=s.window[0],
        window_max=s.window[1],
        norm_deficit=s.norm_deficit,
        n_eigenvalues=len(s),
    )
    if args.format == "json":
        emit.write_json(args.out, columns, rows, meta)
    else:
        emit.write_csv(args.out, columns, rows, meta)
    return EXIT_OK


def _cmd_dynamics(args) -> int:
    if args.v == 0.0:
        return _usage_error("coupling must be nonzero")
    if args.t_max <= 0.0:
        return _usage_error("--t-max must be positive")
    p = _model_params(args)
    columns = ["t"]
    meta = _meta_for(p)
    meta.update(t_max=args.t_max, t_steps=args.t_steps, engine=args.engine, renormalize=args.renormalize)

    p_semi = p_orc = None
    if args.engine in ("semi", "both"):
        s = solver.solve_spectrum(p)
        series = dynamics.survival_series(s, args.t_max, args.t_steps, renormalize=args.renormalize)
        times, p_semi = series.times, series.probs
        meta["norm_deficit"] = s.norm_deficit
        columns.append("p_semi")
    if args.engine in ("oracle", "both"):
        series = oracle.oracle_survival(p, args.n_cut, args.t_max, args.t_steps)
        times, p_orc = series.times, series.probs
        meta["n_cut"] = args.n_cut
        columns.append("p_oracle")
    if args.engine == "both":
        columns.append("abs_diff")

    rows = []
    for i, t in enumerate(times):
        row = [float(t)]
        if p_semi is not None:
            row.append(float(p_semi[i]))
        if p_orc is not None:
            row.append(float(p_orc[i]))
        if args.engine == "both":
            row.append(float(abs(p_semi[i] - p_orc[i])))
        rows.append(row)
    emit.write_csv(args.out, columns, rows, meta)
    return EXIT_OK


def _cmd_limits(args) -> int:
    times = np.linspace(0.0, args.t_max, args.t_steps + 1)
    if args.t_max <= 0.0:
        return _usage_error("--t-max must be positive")
    meta: dict = {"kind": args.kind, "t_max": args.t_max, "t_steps": args.t_steps}
    if args.kind == "rabi":
        spec = limits.LimitSpec("rabi", {"e1": args.e_phi, "v": args.v})
        meta.update(e1=args.e_phi, v=args.v)
    elif args.kind == "bj":
        if args.v == 0.0:
            return _usage_error("coupling must be nonzero")
        if args.delta is None or args.delta <= 0.0:
            return _usage_error("bj limit needs --delta > 0")
        spec = limits.LimitSpec("bj", {"v": args.v, "delta": args.delta, "e_phi": args.e_phi})
        meta.update(v=args.v, delta=args.delta, e_phi=args.e_phi)
    elif args.kind == "ww":
        if args.big_gamma is None or args.big_gamma <= 0.0:
            return _usage_error("ww limit needs --big-gamma > 0")
        spec = limits.LimitSpec("ww", {"big_gamma": args.big_gamma})
        meta.update(big_gamma=args.big_gamma)
    else:
        if args.w is None or args.gamma is None or args.gamma <= 0.0:
            return _usage_error("fano limit needs --w and --gamma > 0")
        if args.e_phi != 0.0:
            return _usage_error("closed-form fano survival is defined for e_phi = 0")
        spec = limits.LimitSpec("fano", {"w": args.w, "gamma": args.gamma, "e_phi": 0.0})
        meta.update(w=args.w, gamma=args.gamma)
    probs = limits.limit_survival(spec, times)
    rows = [[float(t), float(pv)] for t, pv in zip(times, probs)]
    emit.write_csv(args.out, ["t", "p"], rows, meta)
    return EXIT_OK


def _panel_series(panel: presets.Panel):
    s = solver.solve_spectrum(
        panel.params,
        target_deficit=panel.target_deficit,
        max_half_width=panel.max_half_width,
    )
    series = dynamics.survival_series(s, panel.t_max, panel.n_steps)
    overlays = [
        (spec.kind, limits.limit_survival(spec, series.times)) for spec in panel.overlays
    ]
    return series, overlays, s.norm_deficit


def _cmd_compare(args) -> int:
    try:
        preset = presets.resolve(args.preset)
    except KeyError as exc:
        return _usage_error(str(exc))
    os.makedirs(args.out, exist_ok=True)

    workers = min(4, len(preset.panels))
    env_cap = os.environ.get("QLADDER_THREADS")
    if env_cap:
        try:
            workers = max(1, min(int(env_cap), workers))
        except ValueError:
            return _usage_error(f"QLADDER_THREADS must be a positive integer, got {env_cap!r}")
    with ThreadPoolExecutor(max_workers=workers) as pool:
        results = list(pool.map(_panel_series, preset.panels))

    for panel, (series, overlays, deficit) in zip(preset.panels, results):
        columns = ["t", "p_general"] + [f"p_{kind}" for kind, _ in overlays]
        rows = []
        for i, t in enumerate(series.times):
            row = [float(t), float(series.probs[i])]
            row.extend(float(curve[i]) for _, curve in overlays)
            rows.append(row)
        meta = _meta_for(panel.params)
        meta.update(preset=preset.name, panel=panel.slug, norm_deficit=deficit, t_max=panel.t_max)
        stem = os.path.join(args.out, f"{preset.name}_{panel.slug}")
        emit.write_csv(stem + ".csv", columns, rows, meta)
        if args.svg:
            series_list = [("general", series.probs)] + [(kind, curve) for kind, curve in overlays]
            emit.write_svg(
                stem + ".svg",
                series.times,
                series_list,
                title=f"{preset.name} {panel.slug}",
            )
    return EXIT_OK


def _cmd_validate(args) -> int:
    from .validate import run_validation

    checks = run_validation()
    for c in checks:
        status = "PASS" if c.passed else "FAIL"
        print(f"{status} {c.name} measured={emit.fmt(c.measured)} bound={emit.fmt(c.bound)}")
    n_fail = sum(1 for c in checks if not c.passed)
    print(f"# {len(checks) - n_fail}/{len(checks)} checks passed")
    if args.out:
        rows = [[c.name, float(c.measured), float(c.bound), c.passed] for c in checks]
        emit.write_csv(args.out, ["name", "measured", "bound", "pass"], rows, {"n_checks": len(checks)})
    return EXIT_OK if n_fail == 0 else EXIT_VALIDATION


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qladder",
        description="Spectral solver and dynamics for a Lorentzian-coupled discrete state on a uniform ladder",
    )
    parser.add_argument("--version", action="version", version=f"qladder {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("spectrum", help="solve eigenvalues and weights, emit CSV/JSON")
    _add_model_flags(sp)
    sp.add_argument("--window-min", type=float, default=None)
    sp.add_argument("--window-max", type=float, default=None)
    sp.add_argument("--out", required=True)
    sp.add_argument("--format", choices=("csv", "json"), default="csv")
    sp.set_defaults(func=_cmd_spectrum)

    dy = sub.add_parser("dynamics", help="survival probability time series")
    _add_model_flags(dy)
    dy.add_argument("--t-max", type=float, required=True, dest="t_max")
    dy.add_argument("--t-steps", type=int, default=2000, dest="t_steps")
    dy.add_argument("--n-cut", type=int, default=300, dest="n_cut", help="ladder cutoff for the oracle engine")
    dy.add_argument("--engine", choices=("semi", "oracle", "both"), default="semi")
    dy.add_argument("--renormalize", action="store_true")
    dy.add_argument("--out", required=True)
    dy.set_defaults(func=_cmd_dynamics)

    li = sub.add_parser("limits", help="reference-model survival curve")
    li.add_argument("--kind", choices=("rabi", "bj", "ww", "fano"), required=True)
    li.add_argument("--v", type=float, default=0.0)
    li.add_argument("--delta", type=float, default=None)
    li.add_argument("--e-phi", type=float, default=0.0, dest="e_phi")
    li.add_argument("--big-gamma", type=float, default=None, dest="big_gamma")
    li.add_argument("--w", type=float, default=None)
    li.add_argument("--gamma", type=float, default=None)
    li.add_argument("--t-max", type=float, required=True, dest="t_max")
    li.add_argument("--t-steps", type=int, default=2000, dest="t_steps")
    li.add_argument("--out", required=True)
    li.set_defaults(func=_cmd_limits)

    cp = sub.add_parser("compare", help="figure preset: general model plus overlays")
    cp.add_argument("--preset", required=True)
    cp.add_argument("--out", required=True, help="output directory")
    cp.add_argument("--svg", action="store_true", help="emit an SVG plot per panel")
    cp.set_defaults(func=_cmd_compare)

    va = sub.add_parser("validate", help="run the full invariant suite")
    va.add_argument("--out", default=None, help="optional CSV report path")
    va.set_defaults(func=_cmd_validate)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        return args.func(args)
    except DegenerateParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except (BracketError, ConvergenceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except (ValueError, QLadderError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
