"""Config-driven scenarios: sweeps, sensitivity tables and the verify suite.

A scenario config is a JSON object::

    {
      "spec": {...} | "spec_path": "relative/or/absolute.json",
      "task": "r0" | "classify" | "simulate" | "sweep_phi" | "sweep_phi2"
              | "sensitivity" | "verify",
      "seed": 42,
      "output": "out/dir",          (optional; omit to write nothing)
      "params": {...}
    }

``params`` per task (all optional):

* ``classify``: ``steps``, ``tol``
* ``simulate``: ``x0`` (list), ``steps``, ``tol``, ``stride``
* ``sweep_phi``: ``grid`` (list of phi) or ``resolution`` (int)
* ``sweep_phi2``: ``grid_s``/``grid_r`` (lists) or ``resolution`` (int)
* ``sensitivity``: ``parameters`` (list of handles, default all), ``h``
* ``verify``: ``threads``

Every file is written atomically into ``output``.  Files never contain wall
times, so equal configs give byte-identical outputs.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import os
import tempfile
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from . import __version__
from . import dynamics, sampling, spectral
from .errors import ConvergenceError
from .model import (
    IsolatedSpec,
    SingleEggSpec,
    TwoEggSpec,
    canonical_json,
    egg_rows,
    is_density_dependent,
    linearization,
    load_spec,
    spec_from_dict,
    validate,
)

TASKS = ("r0", "classify", "simulate", "sweep_phi", "sweep_phi2", "sensitivity", "verify")
_TASK_PARAMS = {
    "r0": set(),
    "classify": {"steps", "tol"},
    "simulate": {"x0", "steps", "tol", "stride"},
    "sweep_phi": {"grid", "resolution"},
    "sweep_phi2": {"grid_s", "grid_r", "resolution"},
    "sensitivity": {"parameters", "h"},
    "verify": {"threads"},
}
THREADS_ENV = "PARTMIG_THREADS"


class ConfigError(ValueError):
    """Config failed validation; ``problems`` lists field-level messages."""

    def __init__(self, problems):
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


def fmt(x: float) -> str:
    """Human-readable number: 12 decimals in the usual range, else 12 significant digits."""
    x = float(x)
    if x == 0.0 or 1e-3 <= abs(x) < 1e6:
        return f"{x:.12f}"
    return f"{x:.11e}"


def default_threads() -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


# ---------------------------------------------------------------------------
# config
# ---------------------------------------------------------------------------


@dataclass
class ScenarioConfig:
    task: str
    spec: object | None
    output: Path | None
    seed: int | None = None
    params: dict = field(default_factory=dict)


def config_from_dict(doc: dict, base_dir: Path | None = None) -> ScenarioConfig:
    problems = []
    if not isinstance(doc, dict):
        raise ConfigError(["config: expected an object"])
    extra = set(doc) - {"spec", "spec_path", "task", "seed", "output", "params"}
    if extra:
        problems.append(f"config: unknown keys {sorted(extra)}")
    task = doc.get("task")
    if task not in TASKS:
        problems.append(f"task: must be one of {TASKS}, got {task!r}")
    params = doc.get("params", {})
    if not isinstance(params, dict):
        problems.append("params: expected an object")
        params = {}
    elif task in _TASK_PARAMS:
        bad = set(params) - _TASK_PARAMS[task]
        if bad:
            problems.append(f"params: unknown keys for task {task!r}: {sorted(bad)}")
    seed = doc.get("seed")
    if seed is not None and (isinstance(seed, bool) or not isinstance(seed, int)):
        problems.append("seed: must be an integer")
    if task == "verify" and seed is None:
        problems.append("seed: required for randomized task 'verify'")
    if "output" in doc and not isinstance(doc["output"], str):
        problems.append("output: must be a path string")

    spec = None
    if task != "verify":
        has_inline, has_path = "spec" in doc, "spec_path" in doc
        if has_inline == has_path:
            problems.append("spec: give exactly one of 'spec' or 'spec_path'")
        else:
            try:
                if has_inline:
                    spec = spec_from_dict(doc["spec"])
                else:
                    p = Path(doc["spec_path"])
                    if base_dir is not None and not p.is_absolute():
                        p = base_dir / p
                    spec = load_spec(p)
            except (ValueError, OSError) as exc:
                problems.append(f"spec: {exc}")
        if spec is not None:
            report = validate(spec)
            problems += [f"spec: {v}" for v in report.violations]
            problems += _check_params(task, spec, params)
    if problems:
        raise ConfigError(problems)
    out = Path(doc["output"]) if "output" in doc else None
    if out is not None and base_dir is not None and not out.is_absolute():
        out = base_dir / out
    return ScenarioConfig(task, spec, out, seed, dict(params))


def _in_unit(values):
    return all(isinstance(v, (int, float)) and 0.0 <= v <= 1.0 for v in values)


def _check_params(task, spec, params):
    problems = []
    if task == "sweep_phi" and not isinstance(spec, SingleEggSpec):
        problems.append("task sweep_phi needs a single_egg spec")
    if task == "sweep_phi2" and not isinstance(spec, TwoEggSpec):
        problems.append("task sweep_phi2 needs a two_egg spec")
    for key in ("grid", "grid_s", "grid_r"):
        if key in params and not (isinstance(params[key], list) and _in_unit(params[key])):
            problems.append(f"params.{key}: must be a list of numbers in [0, 1]")
    if "resolution" in params and not (isinstance(params["resolution"], int) and params["resolution"] >= 2):
        problems.append("params.resolution: must be an integer >= 2")
    if "x0" in params:
        x0 = params["x0"]
        if not (isinstance(x0, list) and len(x0) == spec.dim
                and all(isinstance(v, (int, float)) and v >= 0 for v in x0)):
            problems.append(f"params.x0: must be {spec.dim} nonnegative numbers")
    if "parameters" in params:
        handles = spectral.parameter_handles(spec)
        ps = params["parameters"]
        if not isinstance(ps, list) or any(p not in handles for p in ps):
            problems.append(f"params.parameters: each must be one of {handles}")
    return problems


def load_config(path) -> ScenarioConfig:
    path = Path(path)
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    return config_from_dict(doc, base_dir=path.parent)


# ---------------------------------------------------------------------------
# output helpers
# ---------------------------------------------------------------------------


def write_atomic(path: Path, text: str) -> None:
    """Write via a temp file in the same directory and rename into place."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def spec_hash(spec) -> str:
    return hashlib.sha256(canonical_json(spec).encode()).hexdigest()


@dataclass
class SweepTable:
    columns: list
    rows: list
    metadata: dict = field(default_factory=dict)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\r\n")
        w.writerow(self.columns)
        for row in self.rows:
            w.writerow([repr(v) if isinstance(v, float) else v for v in row])
        return buf.getvalue()

    def column(self, name):
        i = self.columns.index(name)
        return [row[i] for row in self.rows]


def _metadata(spec, grid, checks=None):
    meta = {
        "spec_sha256": spec_hash(spec),
        "grid": grid,
        "tool_version": __version__,
    }
    if checks is not None:
        meta["checks"] = checks
    return meta


# ---------------------------------------------------------------------------
# sweeps
# ---------------------------------------------------------------------------


def sweep_phi(spec: SingleEggSpec, grid) -> SweepTable:
    """R0 of the shared-egg model along ``phi``.

    ``r0`` comes from the next-generation operator of the assembled
    linearization; ``r0_closed_form`` is the convex combination.  Recorded
    checks: linear-fit residual, closed-form agreement and endpoint argmax.
    """
    grid = [float(p) for p in grid]
    rows = []
    for p in grid:
        s = SingleEggSpec(spec.migrant, spec.resident, p)
        value = spectral.r0_next_generation(linearization(s), egg_rows(s))
        closed = spectral.r0_single_egg(s)
        rows.append((p, value, closed, spectral.regime_of(value).value))
    values = np.array([r[1] for r in rows])
    checks = {}
    if len(grid) >= 2:
        coef = np.polyfit(grid, values, 1)
        resid = float(np.max(np.abs(np.polyval(coef, grid) - values)))
        checks["linear_fit_residual"] = resid
        checks["linear"] = bool(resid <= 1e-10)
    if rows:
        gap = max(abs(r[1] - r[2]) / max(abs(r[2]), 1e-300) for r in rows)
        checks["closed_form_max_rel_diff"] = float(gap)
        checks["closed_form_agrees"] = bool(gap <= 1e-10)
        r_s = spectral.r0_isolated_closed_form(spec.migrant)
        r_r = spectral.r0_isolated_closed_form(spec.resident)
        best = grid[int(np.argmax(values))]
        if abs(r_s - r_r) > 1e-12 * max(r_s, r_r) and {0.0, 1.0} <= set(grid):
            checks["argmax_at_endpoint"] = bool(best == (1.0 if r_s > r_r else 0.0))
    return SweepTable(
        ["phi", "r0", "r0_closed_form", "regime"], rows,
        _metadata(spec, {"phi": grid}, checks),
    )


def sweep_phi2(spec: TwoEggSpec, grid_s, grid_r) -> SweepTable:
    """R0 of the two-egg model over a ``phi_s`` x ``phi_r`` grid.

    Checks: agreement with the next-generation operator, the corner values
    ``R0(0,0) = sqrt(R0^s R0^r)``, ``R0(0,1) = R0^r``,
    ``R0(1, phi_r) = max(R0^s, phi_r R0^r)``,
    and that the maximum sits on the edge where the larger of the two
    isolated numbers is kept.
    """
    grid_s = [float(p) for p in grid_s]
    grid_r = [float(p) for p in grid_r]
    r_s = spectral.r0_isolated_closed_form(spec.migrant)
    r_r = spectral.r0_isolated_closed_form(spec.resident)
    rows = []
    worst = 0.0
    for ps in grid_s:
        for pr in grid_r:
            closed = spectral.two_pool_r0(r_s, r_r, ps, pr)
            s = TwoEggSpec(spec.migrant, spec.resident, ps, pr)
            ngm = spectral.r0_next_generation(linearization(s), egg_rows(s))
            worst = max(worst, abs(ngm - closed) / max(closed, 1e-300))
            rows.append((ps, pr, closed, ngm, spectral.regime_of(closed).value))
    checks = {"next_generation_max_rel_diff": float(worst),
              "next_generation_agrees": bool(worst <= 1e-10)}
    tol = 1e-10 * max(1.0, r_s, r_r)
    lookup = {(r[0], r[1]): r[2] for r in rows}
    corner_ok = True
    if (0.0, 0.0) in lookup:
        corner_ok &= abs(lookup[(0.0, 0.0)] - np.sqrt(r_s * r_r)) <= tol
    if (0.0, 1.0) in lookup:
        corner_ok &= abs(lookup[(0.0, 1.0)] - r_r) <= tol
    for (ps, pr), v in lookup.items():
        # phi_s = 1 makes the 2x2 operator triangular
        if ps == 1.0:
            corner_ok &= abs(v - max(r_s, pr * r_r)) <= tol
    checks["corner_identities"] = bool(corner_ok)
    values = np.array([r[2] for r in rows])
    vmax = values.max()
    top = [(r[0], r[1]) for r in rows if r[2] >= vmax - 1e-9 * max(1.0, vmax)]
    if abs(r_s - r_r) <= 1e-12 * max(r_s, r_r):
        checks["boundary_argmax"] = bool(np.ptp(values) <= tol)
    elif r_r < r_s and 1.0 in grid_s:
        checks["boundary_argmax"] = bool(all(ps == 1.0 for ps, _ in top))
    elif r_s < r_r and 1.0 in grid_r:
        checks["boundary_argmax"] = bool(all(pr == 1.0 for _, pr in top))
    return SweepTable(
        ["phi_s", "phi_r", "r0", "r0_next_generation", "regime"], rows,
        _metadata(spec, {"phi_s": grid_s, "phi_r": grid_r}, checks),
    )


def sensitivity_table(spec, parameters=None, h=None) -> SweepTable:
    """Finite-difference ``dR0/dtheta`` per parameter handle.

    A perturbation that leaves the admissible region marks its row instead
    of aborting the table.
    """
    if parameters is None:
        parameters = spectral.parameter_handles(spec)
    rows = []
    for handle in parameters:
        theta = spectral.get_parameter(spec, handle)
        step = spectral.default_step(theta) if h is None else float(h)
        try:
            d = spectral.sensitivity(spec, handle, step)
            rows.append((handle, float(theta), step, d, "ok"))
        except ValueError as exc:
            rows.append((handle, float(theta), step, "", f"invalid: {exc}"))
    derivs = [r[3] for r in rows if r[4] == "ok"]
    checks = {"nonnegative": all(d >= -1e-8 for d in derivs)}
    return SweepTable(
        ["parameter", "value", "h", "dR0", "status"], rows,
        _metadata(spec, {"parameters": list(parameters)}, checks),
    )


# ---------------------------------------------------------------------------
# verification suite
# ---------------------------------------------------------------------------

BUNDLED = (
    "migrant.json", "resident.json", "single_egg.json", "two_egg.json",
    "bh_growth.json", "bh_decline.json", "bh_single_egg.json", "bh_two_egg.json",
)


def bundled_spec(name: str):
    ref = resources.files("partmig").joinpath("data", name)
    return spec_from_dict(json.loads(ref.read_text(encoding="utf-8")))


def _result(suite, subject, check, passed, **details):
    return {"suite": suite, "subject": subject, "check": check,
            "passed": bool(passed), "details": details}


def _rel(a, b):
    return abs(a - b) / max(abs(b), 1e-300)


def _linear_checks(name, spec):
    out = []
    value = spectral.r0(spec)
    ngm = spectral.r0_next_generation(spec)
    dense = spectral.r0_dense(spec)
    out.append(_result("spectral", name, "r0_oracle_equivalence",
                       _rel(value, dense) <= 1e-10 and _rel(ngm, dense) <= 1e-10,
                       r0=value, r0_next_generation=ngm, r0_dense=dense))
    try:
        gc = spectral.classify(spec)
        out.append(_result("spectral", name, "lambda_r0_relation", True,
                           lam=gc.lam, r0=gc.r0, regime=gc.regime.value))
    except Exception as exc:  # noqa: BLE001 - recorded as a failed check
        out.append(_result("spectral", name, "lambda_r0_relation", False, error=str(exc)))
    sens = sensitivity_table(spec)
    out.append(_result("spectral", name, "sensitivity_nonnegative",
                       sens.metadata["checks"]["nonnegative"],
                       min_derivative=min((r[3] for r in sens.rows if r[4] == "ok"), default=None)))
    if isinstance(spec, SingleEggSpec):
        table = sweep_phi(spec, np.linspace(0.0, 1.0, 101))
        c = table.metadata["checks"]
        out.append(_result("spectral", name, "single_egg_linearity",
                           c["linear"] and c["closed_form_agrees"] and c.get("argmax_at_endpoint", True),
                           **c))
    if isinstance(spec, TwoEggSpec):
        surf = spectral.allocation_surface(spec, 101)
        out.append(_result("spectral", name, "allocation_surface_boundary_max",
                           surf.max_on_predicted_edge, predicted_edge=surf.predicted_edge,
                           max_value=surf.max_value))
        r_s, r_r = surf.r0_s, surf.r0_r
        corners = surf.corners
        tol = 1e-10 * max(1.0, r_s, r_r)
        out.append(_result("spectral", name, "corner_identities",
                           abs(corners[(0.0, 0.0)] - np.sqrt(r_s * r_r)) <= tol
                           and abs(corners[(0.0, 1.0)] - r_r) <= tol
                           and abs(corners[(1.0, 0.0)] - r_s) <= tol,
                           corners={f"{k[0]},{k[1]}": v for k, v in corners.items()}))
        out.append(_gradient_check(name, spec, np.random.default_rng(0), 10))
    return out


def _gradient_check(name, spec, rng, points):
    r_s = spectral.r0_isolated_closed_form(spec.migrant)
    r_r = spectral.r0_isolated_closed_form(spec.resident)
    h = 1e-6
    worst = 0.0
    for _ in range(points):
        ps, pr = rng.uniform(0.01, 0.99, size=2)
        gs, gr = spectral.two_pool_gradient(r_s, r_r, ps, pr)
        fs = (spectral.two_pool_r0(r_s, r_r, ps + h, pr) - spectral.two_pool_r0(r_s, r_r, ps - h, pr)) / (2 * h)
        fr = (spectral.two_pool_r0(r_s, r_r, ps, pr + h) - spectral.two_pool_r0(r_s, r_r, ps, pr - h)) / (2 * h)
        worst = max(worst, abs(gs - fs), abs(gr - fr))
    return _result("spectral", name, "gradient_finite_difference", worst <= 1e-6, max_abs_error=worst)


def _nonlinear_checks(name, spec, seed):
    out = []
    d = spec.dim
    for rep in (
        dynamics.check_monotone(spec, 10_000, seed),
        dynamics.check_strong_sublinear(spec, d, 1_000, seed),
        dynamics.check_eventual_positivity(spec, d, 100, seed),
        dynamics.check_bound(spec, 10_000, seed),
        dynamics.check_nonnegative(spec, 10_000, seed),
        dynamics.check_linear_dominance(spec, 10_000, seed),
    ):
        out.append(_result("dynamics", name, rep.name, rep.passed,
                           samples=rep.samples, violations=rep.violation_count))
    r1 = dynamics.check_strong_sublinear(spec, 1, 1_000, seed)
    out.append(_result("dynamics", name, "egg_coordinates_linear",
                       r1.details["egg_max_rel_dev"] <= 1e-14,
                       max_rel_dev=r1.details["egg_max_rel_dev"]))
    try:
        report = dynamics.classify_trichotomy(spec, seed=seed)
        out.append(_result("dynamics", name, "trichotomy", report.consistent,
                           outcome=report.outcome, r0=report.r0_at_origin,
                           issues=report.issues, orbits=len(report.evidence)))
    except ConvergenceError as exc:
        out.append(_result("dynamics", name, "trichotomy", False, error=str(exc)))
    return out


def _spec_job(job):
    name, spec, seed = job
    results = [_result("model", name, "valid", validate(spec).ok)]
    results += _linear_checks(name, spec)
    if is_density_dependent(spec):
        results += _nonlinear_checks(name, spec, seed)
    return results


def _random_jobs(seed, count=20):
    rng = np.random.default_rng(seed)
    jobs = []
    for k in range(count):
        n, m = (int(v) for v in rng.integers(2, 11, size=2))
        jobs.append((f"random_linear_{k}_isolated", sampling.random_isolated(rng, n), seed))
        jobs.append((f"random_linear_{k}_single_egg", sampling.random_single_egg(rng, n, m), seed))
        jobs.append((f"random_linear_{k}_two_egg", sampling.random_two_egg(rng, n, m), seed))
    for k in range(4):
        n, m = (int(v) for v in rng.integers(2, 6, size=2))
        target = float(rng.uniform(0.2, 0.9) if k % 2 == 0 else rng.uniform(1.5, 5.0))
        for label, spec in (
            ("isolated", sampling.random_isolated(rng, n, True)),
            ("single_egg", sampling.random_single_egg(rng, n, m, True)),
            ("two_egg", sampling.random_two_egg(rng, n, m, True)),
        ):
            jobs.append((f"random_bh_{k}_{label}", sampling.with_r0(spec, target), seed))
    return jobs


def run_verification(seed: int, threads: int = 1) -> dict:
    """Run the property and oracle suites on the bundled and random specs.

    The returned report contains no timing information.
    """
    jobs = [(name.removesuffix(".json"), bundled_spec(name), seed) for name in BUNDLED]
    jobs += _random_jobs(seed)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            parts = list(ex.map(_spec_job, jobs))
    else:
        parts = [_spec_job(j) for j in jobs]
    results = [r for part in parts for r in part]
    failed = [r for r in results if not r["passed"]]
    return {
        "seed": seed,
        "tool_version": __version__,
        "checks": results,
        "total": len(results),
        "failed": len(failed),
        "passed": not failed,
    }


# ---------------------------------------------------------------------------
# scenario dispatch
# ---------------------------------------------------------------------------


def _grid(params, key, default_resolution=11):
    if key in params:
        return [float(v) for v in params[key]]
    return list(np.linspace(0.0, 1.0, params.get("resolution", default_resolution)))


def run_scenario(config: ScenarioConfig) -> dict:
    """Execute one scenario and write its artifacts; returns a summary dict.

    With ``config.output`` unset nothing is written.
    """
    start = time.perf_counter()
    out = config.output
    spec = config.spec
    p = config.params
    summary = {"task": config.task, "files": []}

    def emit(name, text):
        if out is None:
            return
        path = Path(out) / name
        write_atomic(path, text)
        summary["files"].append(str(path))

    if config.task == "r0":
        gc = spectral.classify(spec)
        result = {
            "r0": gc.r0, "lambda": gc.lam, "regime": gc.regime.value,
            "r0_next_generation": spectral.r0_next_generation(spec),
            "spec_sha256": spec_hash(spec), "tool_version": __version__,
        }
        if not isinstance(spec, IsolatedSpec):
            result["r0_migrant"] = spectral.r0_isolated_closed_form(spec.migrant)
            result["r0_resident"] = spectral.r0_isolated_closed_form(spec.resident)
        emit("r0.json", dump_json(result))
        summary.update(r0=gc.r0, lam=gc.lam, regime=gc.regime.value)

    elif config.task == "classify":
        gc = spectral.classify(spec)
        result = {"r0": gc.r0, "lambda": gc.lam, "regime": gc.regime.value}
        summary.update(r0=gc.r0, lam=gc.lam, regime=gc.regime.value)
        if is_density_dependent(spec):
            report = dynamics.classify_trichotomy(
                spec, seed=config.seed or 0,
                tol=p.get("tol", dynamics.CONVERGENCE_TOL),
                max_steps=p.get("steps", dynamics.MAX_STEPS),
            )
            result["trichotomy"] = report.to_dict()
            summary.update(outcome=report.outcome, consistent=report.consistent,
                           issues=report.issues)
        emit("classification.json", dump_json(result))

    elif config.task == "simulate":
        x0 = np.asarray(p.get("x0", np.ones(spec.dim)), dtype=float)
        traj = dynamics.simulate(
            spec, x0, max_steps=p.get("steps", dynamics.MAX_STEPS),
            tol=p.get("tol", dynamics.CONVERGENCE_TOL), stride=p.get("stride", 1),
        )
        emit("trajectory.csv", traj.to_csv())
        summary.update(steps_taken=traj.steps_taken, stop_reason=traj.stop_reason,
                       final=[float(v) for v in traj.states[-1]])

    elif config.task in ("sweep_phi", "sweep_phi2"):
        if config.task == "sweep_phi":
            table = sweep_phi(spec, _grid(p, "grid"))
        else:
            table = sweep_phi2(spec, _grid(p, "grid_s"), _grid(p, "grid_r"))
        emit(f"{config.task}.csv", table.to_csv())
        emit(f"{config.task}.meta.json", dump_json(table.metadata))
        summary.update(rows=len(table.rows), checks=table.metadata["checks"])

    elif config.task == "sensitivity":
        table = sensitivity_table(spec, p.get("parameters"), p.get("h"))
        emit("sensitivity.csv", table.to_csv())
        emit("sensitivity.meta.json", dump_json(table.metadata))
        summary.update(rows=len(table.rows), checks=table.metadata["checks"],
                       derivatives=[(r[0], r[3], r[4]) for r in table.rows])

    elif config.task == "verify":
        report = run_verification(config.seed, p.get("threads", default_threads()))
        emit("verify_report.json", dump_json(report))
        summary.update(total=report["total"], failed=report["failed"], passed=report["passed"])

    summary["wall_time_s"] = time.perf_counter() - start
    return summary


def main(argv=None) -> int:
    """``python -m partmig.experiment CONFIG.json``"""
    import sys

    args = sys.argv[1:] if argv is None else argv
    if len(args) != 1:
        print("usage: python -m partmig.experiment CONFIG.json", file=sys.stderr)
        return 2
    try:
        cfg = load_config(args[0])
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ConfigError as exc:
        for problem in exc.problems:
            print(f"error: {problem}", file=sys.stderr)
        return 1
    summary = run_scenario(cfg)
    print(json.dumps(summary, indent=2, sort_keys=True, default=str))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
