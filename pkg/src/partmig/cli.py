"""Command-line front end (``pm``).

Exit codes: 0 success, 1 validation or analysis failure, 2 usage error
(including unreadable spec files and malformed JSON).
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .errors import ConsistencyError, ConvergenceError, SpecFormatError
from .experiment import (
    ConfigError,
    ScenarioConfig,
    _check_params,
    default_threads,
    fmt,
    run_scenario,
)
from .model import SingleEggSpec, load_spec, validate


class _UsageError(Exception):
    pass


def _add_common(p, spec=True, out=True):
    if spec:
        p.add_argument("--spec", required=True, metavar="PATH", help="model spec JSON file")
    if out:
        p.add_argument("--out", metavar="PATH", help="output directory for artifacts")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pm", description="Partial-migration population models."
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("validate", help="check a spec against the model assumptions")
    _add_common(p, out=False)

    p = sub.add_parser("r0", help="basic reproduction number, Perron root and regime")
    _add_common(p)
    p.add_argument("--phi", type=float, help="override phi of a single-egg spec")

    p = sub.add_parser("classify", help="growth regime and, for density-dependent "
                                        "specs, the long-run outcome")
    _add_common(p)
    p.add_argument("--phi", type=float, help="override phi of a single-egg spec")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--steps", type=int, default=50_000, help="iteration cap per orbit")
    p.add_argument("--tol", type=float, default=1e-12, help="convergence tolerance")
    p.add_argument("--threads", type=int, default=None)

    p = sub.add_parser("simulate", help="iterate the model from an initial state")
    _add_common(p)
    p.add_argument("--phi", type=float, help="override phi of a single-egg spec")
    p.add_argument("--x0", help="comma-separated initial state (default: all ones)")
    p.add_argument("--steps", type=int, default=50_000)
    p.add_argument("--tol", type=float, default=1e-12)

    p = sub.add_parser("sweep", help="R0 over allocation grids")
    _add_common(p)
    p.add_argument("--mode", choices=("phi", "phi2"), required=True)
    p.add_argument("--grid", type=int, default=11, help="grid points per axis")

    p = sub.add_parser("sensitivity", help="finite-difference dR0 per parameter")
    _add_common(p)
    p.add_argument("--param", action="append", dest="params", metavar="HANDLE",
                   help="parameter handle such as t1 or migrant.f3 (repeatable)")

    p = sub.add_parser("verify", help="run the property and oracle suites")
    _add_common(p, spec=False)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--threads", type=int, default=None)
    return parser


def _load(path):
    try:
        return load_spec(path)
    except OSError as exc:
        raise _UsageError(f"cannot read spec file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise _UsageError(f"malformed JSON in {path}: {exc}") from exc


def _with_phi(spec, phi):
    if phi is None:
        return spec
    if not isinstance(spec, SingleEggSpec):
        raise _UsageError("--phi applies to single_egg specs only")
    return dataclasses.replace(spec, phi=phi)


def _scenario(args, task, spec=None, params=None, seed=None):
    params = params or {}
    if spec is not None:
        problems = [str(v) for v in validate(spec).violations]
        problems += _check_params(task, spec, params)
        if problems:
            raise ConfigError(problems)
    out = Path(args.out) if getattr(args, "out", None) else None
    return run_scenario(ScenarioConfig(task, spec, out, seed, params))


def _print_files(summary):
    for f in summary.get("files", []):
        print(f"wrote {f}")


def _cmd_validate(args):
    spec = _load(args.spec)
    report = validate(spec)
    if report.ok:
        print("valid")
        return 0
    for v in report.violations:
        print(f"invalid: {v}")
    return 1


def _cmd_r0(args):
    spec = _with_phi(_load(args.spec), args.phi)
    s = _scenario(args, "r0", spec)
    print(f"R0 = {fmt(s['r0'])}")
    print(f"lambda = {fmt(s['lam'])}")
    print(f"regime = {s['regime']}")
    _print_files(s)
    return 0


def _cmd_classify(args):
    spec = _with_phi(_load(args.spec), args.phi)
    params = {"steps": args.steps, "tol": args.tol}
    s = _scenario(args, "classify", spec, params, seed=args.seed)
    print(f"R0 = {fmt(s['r0'])}")
    print(f"lambda = {fmt(s['lam'])}")
    print(f"regime = {s['regime']}")
    status = 0
    if "outcome" in s:
        print(f"outcome = {s['outcome']}")
        for issue in s["issues"]:
            print(f"issue: {issue}")
        if not s["consistent"]:
            status = 1
    _print_files(s)
    return status


def _cmd_simulate(args):
    spec = _with_phi(_load(args.spec), args.phi)
    params = {"steps": args.steps, "tol": args.tol}
    if args.x0 is not None:
        try:
            params["x0"] = [float(v) for v in args.x0.split(",")]
        except ValueError as exc:
            raise _UsageError(f"--x0: {exc}") from exc
    s = _scenario(args, "simulate", spec, params)
    print(f"steps = {s['steps_taken']}")
    print(f"stop = {s['stop_reason']}")
    print("final = " + ", ".join(fmt(v) for v in s["final"]))
    _print_files(s)
    return 0


def _cmd_sweep(args):
    spec = _load(args.spec)
    if args.grid < 2:
        raise _UsageError("--grid must be at least 2")
    task = "sweep_phi" if args.mode == "phi" else "sweep_phi2"
    s = _scenario(args, task, spec, {"resolution": args.grid})
    print(f"rows = {s['rows']}")
    ok = True
    for name, value in sorted(s["checks"].items()):
        print(f"{name} = {fmt(value) if isinstance(value, float) else value}")
        if isinstance(value, bool):
            ok &= value
    _print_files(s)
    return 0 if ok else 1


def _cmd_sensitivity(args):
    spec = _load(args.spec)
    params = {} if args.params is None else {"parameters": args.params}
    s = _scenario(args, "sensitivity", spec, params)
    for handle, d, status in s["derivatives"]:
        print(f"{handle}: {fmt(d) if status == 'ok' else status}")
    _print_files(s)
    return 0 if s["checks"]["nonnegative"] else 1


def _cmd_verify(args):
    threads = args.threads if args.threads is not None else default_threads()
    s = _scenario(args, "verify", None, {"threads": threads}, seed=args.seed)
    print(f"checks = {s['total']}")
    print(f"failed = {s['failed']}")
    print("verify: " + ("pass" if s["passed"] else "FAIL"))
    print(f"wall time = {s['wall_time_s']:.2f} s")
    _print_files(s)
    return 0 if s["passed"] else 1


_COMMANDS = {
    "validate": _cmd_validate,
    "r0": _cmd_r0,
    "classify": _cmd_classify,
    "simulate": _cmd_simulate,
    "sweep": _cmd_sweep,
    "sensitivity": _cmd_sensitivity,
    "verify": _cmd_verify,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if getattr(args, "threads", None) is not None and args.threads < 1:
        print("error: --threads must be >= 1", file=sys.stderr)
        return 2
    np.seterr(all="ignore")
    try:
        return _COMMANDS[args.command](args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SpecFormatError as exc:
        print(f"invalid: {exc}", file=sys.stderr)
        return 1
    except ConfigError as exc:
        for problem in exc.problems:
            print(f"invalid: {problem}", file=sys.stderr)
        return 1
    except (ConsistencyError, ConvergenceError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
