"""Command-line front end.

Exit codes: 0 on success, 1 when a validation run has failing records,
2 on usage or input errors.
"""
from __future__ import annotations

import argparse
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from pathlib import Path

from .expansion import (
    FamilySpec,
    InvalidSpecError,
    TruncationConfig,
    bilateral_sinc_sum,
    family_value,
    in_domain,
    sampling_sum,
)
from .gseries import eta3, g_abel_extrapolate, g_closed, table1_classify
from .harness import (
    REGISTRY,
    ReportRecord,
    default_config,
    emit_report,
    format_float,
    run_scenario,
    scenario_passed,
)
from .specfun import SpecialFunctionError

ACCEL = {"none": "none", "cesaro": "cesaro", "wynn": "wynn_epsilon"}


class UsageError(Exception):
    pass


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma-separated list of numbers: {text!r}")


def _int_min(lo: int):
    def conv(text: str) -> int:
        v = int(text)
        if v < lo:
            raise argparse.ArgumentTypeError(f"must be >= {lo}")
        return v
    return conv


def _finite(text: str) -> float:
    v = float(text)
    if not math.isfinite(v):
        raise argparse.ArgumentTypeError("must be finite")
    return v


def read_config(path) -> dict[str, str]:
    """Parse a key=value file; blank lines and '#' comments are ignored."""
    out = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key.replace("-", "_")] = value
    return out


# ------------------------------------------------------------------ parser

def _add_family(p: argparse.ArgumentParser) -> None:
    p.add_argument("--family", choices=("legendre", "gegenbauer", "jacobi", "hermite"),
                   default="legendre")
    p.add_argument("--nu", type=_finite, required=False)
    p.add_argument("--gamma", type=_finite, help="Gegenbauer parameter, > 0")
    p.add_argument("--alpha", type=_finite, action="append", default=None,
                   help="repeatable, paired with --beta by position")
    p.add_argument("--beta", type=_finite, action="append", default=None)
    p.add_argument("--theta", type=_finite, action="append", default=None,
                   help="repeatable angle in radians")
    p.add_argument("--thetas", type=_floats, help="comma-separated angles in radians")
    p.add_argument("--x", type=_floats, help="Hermite arguments, comma-separated")
    p.add_argument("--k", type=int, help="Hermite index multiplier (k*N must be 2)")
    p.add_argument("--epsilon", type=int, choices=(0, 1), default=0)


def _add_truncation(p: argparse.ArgumentParser) -> None:
    p.add_argument("--nmax", type=_int_min(8), help="truncation index (>= 8)")
    p.add_argument("--accel", choices=tuple(ACCEL), help="series acceleration")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sincsum", description=__doc__.splitlines()[0])
    parser.add_argument("--config", help="key=value file; command-line flags take precedence")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate f_nu for a family product")
    _add_family(p)

    p = sub.add_parser("expand", help="sampling sum of f_nu from integer-degree samples")
    _add_family(p)
    _add_truncation(p)
    p.add_argument("--bilateral", action="store_true", help="use the two-sided sinc form")

    p = sub.add_parser("g", help="closed form of the alternating series G")
    p.add_argument("--n", type=int, choices=(1, 2, 3, 4))
    p.add_argument("--theta", type=_finite, action="append", default=None)
    p.add_argument("--thetas", type=_floats)
    p.add_argument("--gamma", type=_finite, default=0.5)
    p.add_argument("--abel", action="store_true", help="also print the Abel extrapolation")
    p.add_argument("--t-grid", type=_floats, dest="t_grid")
    p.add_argument("--nmax", type=_int_min(8))

    p = sub.add_parser("classify", help="eta invariants and Table 1 row for an angle tuple")
    p.add_argument("--theta", type=_finite, action="append", default=None)
    p.add_argument("--thetas", type=_floats)

    for name, text in (("validate", "run registered validation scenarios"),
                       ("sweep", "residual sweep over a degree grid")):
        p = sub.add_parser(name, help=text)
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--out", help="report path")
        p.add_argument("--seed", type=int)
        p.add_argument("--jobs", type=_int_min(1), default=None,
                       help="worker processes (default: number of processors)")
        _add_truncation(p)
        if name == "validate":
            p.add_argument("--scenario", action="append", choices=sorted(REGISTRY))
            p.add_argument("--all", action="store_true")
            p.add_argument("--samples", type=_int_min(1))
        else:
            _add_family(p)
            p.add_argument("--nu-min", type=_finite, default=0.1)
            p.add_argument("--nu-max", type=_finite, default=4.9)
            p.add_argument("--steps", type=_int_min(1), default=49)
            p.add_argument("--tol", type=_finite, default=1e-6)
    return parser


# ----------------------------------------------------------------- helpers

def _angles(args, need: int | None = None) -> list[float]:
    th = list(args.theta or []) + list(args.thetas or [])
    if not th:
        raise UsageError("give angles with --theta or --thetas")
    if need is not None and len(th) != need:
        raise UsageError(f"expected {need} angles, got {len(th)}")
    return th


def _spec_from_args(args) -> FamilySpec:
    fam = args.family
    if fam == "hermite":
        if not args.x:
            raise UsageError("hermite needs --x")
        return FamilySpec.hermite(args.x, k=args.k, epsilon=args.epsilon)
    th = _angles(args)
    if any(not abs(t) < math.pi for t in th):
        raise UsageError("angles must satisfy |theta| < pi")
    if fam == "legendre":
        return FamilySpec.legendre(th)
    if fam == "gegenbauer":
        if args.gamma is None or not args.gamma > 0:
            raise UsageError("gegenbauer needs --gamma > 0")
        return FamilySpec.gegenbauer(args.gamma, th)
    alphas, betas = args.alpha or [], args.beta or []
    if not alphas or len(alphas) != len(betas):
        raise UsageError("--alpha and --beta must be given the same number of times")
    if min(alphas + betas) <= -1:
        raise UsageError("alpha and beta must exceed -1")
    pairs = list(zip(alphas, betas))
    if len(pairs) == 1 and len(th) > 1:
        pairs = pairs * len(th)
    return FamilySpec.jacobi(pairs, th)


def _truncation(args) -> TruncationConfig:
    t = TruncationConfig()
    if getattr(args, "nmax", None) is not None:
        t = replace(t, n_max=args.nmax)
    if getattr(args, "accel", None) is not None:
        t = replace(t, acceleration=ACCEL[args.accel])
    return t


def _require_nu(args) -> float:
    if args.nu is None:
        raise UsageError("--nu is required")
    return args.nu


def _print(*pairs) -> None:
    for label, value in pairs:
        if isinstance(value, float):
            value = format_float(value)
        print(f"{label} {value}" if label else value)


# ---------------------------------------------------------------- commands

def cmd_eval(args) -> int:
    _print(("", family_value(_spec_from_args(args), _require_nu(args))))
    return 0


def cmd_expand(args) -> int:
    spec, nu, t = _spec_from_args(args), _require_nu(args), _truncation(args)
    if not spec.is_hermite and not in_domain(spec.thetas):
        print("warning: angles lie outside sum |theta_i| < pi", file=sys.stderr)
    est = bilateral_sinc_sum(spec, nu, t) if args.bilateral else sampling_sum(spec, nu, t)
    exact = family_value(spec, nu)
    _print(("sum", est.value), ("tail", est.est_tail), ("exact", exact),
           ("residual", abs(exact - est.value)))
    return 0


def cmd_g(args) -> int:
    th = _angles(args)
    if args.n is not None and args.n != len(th):
        raise UsageError(f"--n {args.n} does not match {len(th)} angles")
    if not args.gamma > 0:
        raise UsageError("--gamma must be positive")
    kwargs = {}
    if args.t_grid is not None:
        grid = args.t_grid
        if len(grid) < 3 or any(not 0 < v < 1 for v in grid) or sorted(set(grid)) != grid:
            raise UsageError("--t-grid needs >= 3 strictly increasing values in (0, 1)")
        kwargs["t_grid"] = grid
    if args.nmax is not None:
        kwargs["n_max"] = args.nmax
    g = g_closed(args.gamma, th, **kwargs)
    if g.kind in ("zero", "finite"):
        _print(("", g.as_float()))
    elif g.kind == "delta":
        _print(("delta", f"support_x={format_float(g.support_x)} weight={format_float(g.weight)}"))
    else:
        _print(("", "boundary"))
    if args.abel:
        est = g_abel_extrapolate(args.gamma, th, **kwargs)
        _print(("abel", est.estimate), ("spread", est.spread))
    return 0


def cmd_classify(args) -> int:
    th = _angles(args)
    if len(th) == 3:
        _print(("eta3", float(eta3(*th))))
        return 0
    if len(th) != 4:
        raise UsageError("classify takes 3 or 4 angles")
    from .gseries import abc_coefficients, eta4
    ep, em = eta4(th)
    a, b, c = abc_coefficients(th)
    row = table1_classify(th)
    sg = lambda s: {1: "+", -1: "-", 0: "0"}[s]  # noqa: E731
    _print(("eta_plus", float(ep)), ("eta_minus", float(em)),
           ("A", float(a)), ("B", float(b)), ("C", float(c)),
           ("abc_signs", ",".join(map(sg, row.abc_signs))),
           ("eta_signs", ",".join(map(sg, row.eta_signs))),
           ("tag", row.tag))
    return 0


def _run_named(job: tuple) -> list[ReportRecord]:
    name, overrides = job
    return run_scenario(default_config(name, **overrides))


def _pool_map(fn, jobs: list, workers: int | None):
    workers = workers or os.cpu_count() or 1
    if workers == 1 or len(jobs) <= 1:
        return [fn(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=min(workers, len(jobs))) as pool:
        return list(pool.map(fn, jobs))


def cmd_validate(args) -> int:
    names = sorted(REGISTRY) if args.all else sorted(set(args.scenario or []))
    if not names:
        raise UsageError("give --scenario NAME or --all")
    overrides = {"seed": args.seed, "samples": args.samples}
    if args.nmax is not None or args.accel is not None:
        overrides["truncation"] = _truncation(args)
    results = _pool_map(_run_named, [(n, overrides) for n in names], args.jobs)
    records, status = [], 0
    for name, recs in zip(names, results):
        records.extend(recs)
        ok = scenario_passed(name, recs)
        expected = REGISTRY[name].expected_failure
        n_pass = sum(r.passed for r in recs)
        label = "PASS" if ok else "FAIL"
        note = " (expected-failure scenario, not counted in exit code)" if expected else ""
        print(f"{label} {name}: {n_pass}/{len(recs)} records pass{note}", file=sys.stderr)
        if not expected and n_pass != len(recs):
            status = 1
    if args.out:
        emit_report(records, args.format, args.out)
    return status


def _sweep_case(job: tuple) -> ReportRecord:
    import time
    spec, nu, t, tol, i = job
    start = time.perf_counter()
    inputs = {"nu": float(format_float(nu)), "kind": spec.kind.value,
              "points": [float(format_float(p)) for p in spec.points]}
    try:
        measured = abs(family_value(spec, nu) - sampling_sum(spec, nu, t).value)
    except (ArithmeticError, ValueError) as exc:
        measured, inputs["error"] = math.nan, f"{type(exc).__name__}: {exc}"
    return ReportRecord("sweep", f"nu-{i:05d}", inputs, measured, tol, measured <= tol,
                        (time.perf_counter() - start) * 1e3)


def cmd_sweep(args) -> int:
    spec, t = _spec_from_args(args), _truncation(args)
    if not args.nu_min < args.nu_max and args.steps > 1:
        raise UsageError("--nu-min must be below --nu-max")
    if not args.tol > 0:
        raise UsageError("--tol must be positive")
    n = args.steps
    nus = [args.nu_min + (args.nu_max - args.nu_min) * i / max(n - 1, 1) for i in range(n)]
    records = _pool_map(_sweep_case, [(spec, v, t, args.tol, i) for i, v in enumerate(nus)],
                        args.jobs)
    if args.out:
        emit_report(records, args.format, args.out)
    else:
        for r in records:
            _print(("", f"{format_float(r.inputs['nu'])} {format_float(r.measured)}"))
    return 0 if all(r.passed for r in records) else 1


COMMANDS = {"eval": cmd_eval, "expand": cmd_expand, "g": cmd_g, "classify": cmd_classify,
            "validate": cmd_validate, "sweep": cmd_sweep}


def _apply_config(parser: argparse.ArgumentParser, argv: list[str]) -> argparse.Namespace:
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    args = parser.parse_args(argv)
    if not known.config:
        return args
    try:
        conf = read_config(known.config)
    except OSError as exc:
        raise UsageError(f"cannot read config: {exc}")
    # Re-parse with the config values as defaults so explicit flags win.
    sub = parser._subparsers._group_actions[0].choices[args.command]  # noqa: SLF001
    dests = {a.dest: a for a in sub._actions}  # noqa: SLF001
    defaults = {}
    for key, raw in conf.items():
        if key not in dests or key == "help":
            raise UsageError(f"unknown config key {key!r} for {args.command}")
        action = dests[key]
        try:
            if isinstance(action, argparse._StoreTrueAction):  # noqa: SLF001
                val = raw.lower() in ("1", "true", "yes", "on")
            else:
                conv = action.type or str
                val = conv(raw)
                if action.choices is not None and val not in action.choices:
                    raise ValueError(f"{raw!r} not in {sorted(map(str, action.choices))}")
                if isinstance(action, argparse._AppendAction):  # noqa: SLF001
                    val = [val]
        except (ValueError, argparse.ArgumentTypeError) as exc:
            raise UsageError(f"config key {key!r}: {exc}")
        defaults[key] = val
    sub.set_defaults(**defaults)
    return parser.parse_args(argv)


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = _apply_config(parser, argv)
        return COMMANDS[args.command](args)
    except SystemExit as exc:
        return int(exc.code or 0)
    except (UsageError, InvalidSpecError, SpecialFunctionError, ValueError) as exc:
        print(f"sincsum: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
