"""Density-dependent iteration, property checks and outcome classification.

The map ``x -> A(x) x`` is evaluated through its coordinate functions: the
egg coordinates are fecundity-weighted sums, every other coordinate collects
the survivor flow ``s_i(x_i) = x_i t_i(x_i)`` of the stage feeding it, and
the last stage of each chain also keeps its own survivors.  The same map is
available in matrix form as ``assemble(spec, x) @ x`` (:func:`step_matrix`).

All evaluation helpers accept a batch of states in the leading axes.
"""

from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import ConvergenceError
from .model import (
    BevertonHolt,
    Constant,
    IsolatedSpec,
    SingleEggSpec,
    Spec,
    TwoEggSpec,
    assemble,
    egg_rows,
    is_density_dependent,
    linearization,
    populations,
)
from .sampling import log_uniform
from .spectral import dominant_eigenpair, r0

CONVERGENCE_TOL = 1e-12
EXTINCTION_TOL = 1e-8
RESIDUAL_TOL = 1e-9
AGREEMENT_TOL = 1e-6
STRICT_MARGIN = 1e-12
NEAR_THRESHOLD = 1e-6
MAX_STEPS = 50_000
OVERFLOW = 1e300


# ---------------------------------------------------------------------------
# coordinate maps
# ---------------------------------------------------------------------------


def _flows(rules, x):
    """``s_i(x_i)`` for a run of stages, vectorized over the batch axes."""
    if all(isinstance(r, (Constant, BevertonHolt)) for r in rules):
        b, c = np.array([r.coefficients() for r in rules]).T
        return b * x / (1.0 + c * x)
    return np.stack([r.flow(x[..., k]) for k, r in enumerate(rules)], axis=-1)


def _dot(x, f):
    """``x @ f`` in a fixed left-to-right order, so each orbit's arithmetic
    does not depend on the shape of the batch it is evaluated in."""
    out = np.zeros(x.shape[:-1])
    for k, fk in enumerate(f):
        out = out + x[..., k] * fk
    return out


def _chain(inflow, flows):
    """Post-egg stages of one population: ``[inflow, s_2, ..., s_{n-1}]`` with
    ``s_n`` added to the last entry (survival in the final stage)."""
    out = np.concatenate([inflow[..., None], flows[..., :-1]], axis=-1)
    out[..., -1] += flows[..., -1]
    return out


def _isolated_map(spec: IsolatedSpec, x, flows=_flows):
    egg = _dot(x[..., 1:], spec.fecundities)
    s1 = flows(spec.transitions[:1], x[..., :1])[..., 0]
    post = _chain(s1, flows(spec.transitions[1:], x[..., 1:]))
    return np.concatenate([egg[..., None], post], axis=-1)


def _single_egg_map(spec: SingleEggSpec, x, flows=_flows):
    mig, res = spec.migrant, spec.resident
    n = mig.n
    eggs, xm, xr = x[..., :1], x[..., 1:n], x[..., n:]
    egg = _dot(xm, mig.fecundities) + _dot(xr, res.fecundities)
    into_m = spec.phi * flows(mig.transitions[:1], eggs)[..., 0]
    into_r = (1.0 - spec.phi) * flows(res.transitions[:1], eggs)[..., 0]
    out_m = _chain(into_m, flows(mig.transitions[1:], xm))
    out_r = _chain(into_r, flows(res.transitions[1:], xr))
    return np.concatenate([egg[..., None], out_m, out_r], axis=-1)


def _two_egg_map(spec: TwoEggSpec, x, flows=_flows):
    mig, res = spec.migrant, spec.resident
    n = mig.n
    xs, xr = x[..., :n], x[..., n:]
    laid_s = _dot(xs[..., 1:], mig.fecundities)
    laid_r = _dot(xr[..., 1:], res.fecundities)
    egg_s = spec.phi_s * laid_s + (1.0 - spec.phi_r) * laid_r
    egg_r = (1.0 - spec.phi_s) * laid_s + spec.phi_r * laid_r
    out_s = _chain(flows(mig.transitions[:1], xs[..., :1])[..., 0],
                   flows(mig.transitions[1:], xs[..., 1:]))
    out_r = _chain(flows(res.transitions[:1], xr[..., :1])[..., 0],
                   flows(res.transitions[1:], xr[..., 1:]))
    return np.concatenate([egg_s[..., None], out_s, egg_r[..., None], out_r], axis=-1)


def _map_for(spec):
    if isinstance(spec, IsolatedSpec):
        return _isolated_map
    if isinstance(spec, SingleEggSpec):
        return _single_egg_map
    if isinstance(spec, TwoEggSpec):
        return _two_egg_map
    raise TypeError(f"unsupported spec type {type(spec).__name__}")


def _apply(spec, X):
    return _map_for(spec)(spec, X)


def _check_input(spec, x):
    x = np.asarray(x, dtype=float)
    if x.shape[-1:] != (spec.dim,):
        raise ValueError(f"state must have trailing dimension {spec.dim}, got {x.shape}")
    if np.any(np.isnan(x)):
        raise ValueError("state contains NaN")
    if np.any(x < 0.0):
        raise ValueError("state has negative entries")
    return x


def step(spec: Spec, x, check: bool = False):
    """One iteration ``x -> A(x) x`` evaluated through the coordinate maps.

    ``x`` may carry leading batch axes.  With ``check=True`` the result is
    compared against the assembled-matrix product.
    """
    x = _check_input(spec, x)
    y = _apply(spec, x)
    if check:
        ref = np.apply_along_axis(lambda v: step_matrix(spec, v), -1, x)
        scale = np.maximum(np.abs(ref), np.finfo(float).tiny)
        if np.any(np.abs(y - ref) > 1e-14 * scale + 1e-300):
            raise AssertionError("coordinate map and matrix product disagree")
    return y


def step_matrix(spec: Spec, x):
    """``assemble(spec, x) @ x`` for a single state."""
    x = np.asarray(x, dtype=float)
    return assemble(spec, x) @ x


def iterate(spec: Spec, x, r: int):
    """``step`` composed ``r`` times."""
    y = _check_input(spec, x)
    for _ in range(r):
        y = _apply(spec, y)
    return y


# ---------------------------------------------------------------------------
# trajectories
# ---------------------------------------------------------------------------


@dataclass
class Trajectory:
    states: np.ndarray  # (recorded, dim)
    steps: np.ndarray  # step index of each recorded state
    converged: bool
    limit: np.ndarray | None
    steps_taken: int
    stop_reason: str  # converged | extinct | max_steps | overflow

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        dim = self.states.shape[1] if self.states.ndim == 2 else 0
        w.writerow(["step"] + [f"x{i + 1}" for i in range(dim)])
        for k, row in zip(self.steps, self.states):
            w.writerow([int(k)] + [repr(float(v)) for v in row])
        return buf.getvalue()


def _rel_change(x_new, x_old):
    diff = np.max(np.abs(x_new - x_old), axis=-1)
    size = np.max(np.abs(x_new), axis=-1)
    return diff, size


def simulate(spec: Spec, x0, max_steps: int = MAX_STEPS, tol: float = CONVERGENCE_TOL,
             stride: int = 1, extinction_tol: float = 0.0) -> Trajectory:
    """Iterate from ``x0`` until the sup-norm relative change is at most ``tol``.

    Args:
        stride: record every ``stride``-th state (the final state is always
            recorded); ``0`` records only the endpoints.
        extinction_tol: stop early once ``||x||_inf`` drops to this level.
    """
    x = _check_input(spec, x0).copy()
    states, idx = [x.copy()], [0]
    reason = "max_steps"
    k = 0
    with np.errstate(over="ignore", invalid="ignore"):
        for k in range(1, max_steps + 1):
            y = _apply(spec, x)
            diff, size = _rel_change(y, x)
            x = y
            if stride and k % stride == 0:
                states.append(x.copy())
                idx.append(k)
            if not np.all(np.isfinite(x)) or size > OVERFLOW:
                reason = "overflow"
                break
            if diff <= tol * size:
                reason = "converged"
                break
            if size <= extinction_tol:
                reason = "extinct"
                break
    if idx[-1] != k:
        states.append(x.copy())
        idx.append(k)
    converged = reason == "converged"
    return Trajectory(
        np.array(states), np.array(idx), converged,
        x.copy() if converged else None, k, reason,
    )


def _iterate_batch(spec, X0, max_steps, tol, extinction_tol):
    """Iterate many orbits at once; each stops independently."""
    X = np.array(X0, dtype=float)
    k_orbits = X.shape[0]
    final = X.copy()
    steps = np.full(k_orbits, max_steps)
    reasons = ["max_steps"] * k_orbits
    active = np.arange(k_orbits)
    with np.errstate(over="ignore", invalid="ignore"):
        for k in range(1, max_steps + 1):
            Y = _apply(spec, X)
            diff, size = _rel_change(Y, X)
            X = Y
            done = np.zeros(len(active), dtype=bool)
            for cond, why in (
                (~np.isfinite(size) | (size > OVERFLOW), "overflow"),
                (diff <= tol * size, "converged"),
                (size <= extinction_tol, "extinct"),
            ):
                new = cond & ~done
                for i in np.flatnonzero(new):
                    reasons[active[i]] = why
                done |= new
            if done.any():
                final[active[done]] = X[done]
                steps[active[done]] = k
                active, X = active[~done], X[~done]
            if active.size == 0:
                break
    if active.size:
        final[active] = X
    return final, steps, reasons


# ---------------------------------------------------------------------------
# fixed points and the trichotomy
# ---------------------------------------------------------------------------


@dataclass
class TrichotomyReport:
    outcome: str  # extinction | positive_fixed_point | unbounded | threshold_inconclusive | inconclusive
    q: np.ndarray | None
    residual: float | None
    r0_at_origin: float
    evidence: list = field(default_factory=list)
    consistent: bool = True
    issues: list = field(default_factory=list)
    escape: dict | None = None

    def to_dict(self) -> dict:
        def vec(v):
            return None if v is None else [float(a) for a in v]
        return {
            "outcome": self.outcome,
            "r0_at_origin": float(self.r0_at_origin),
            "q": vec(self.q),
            "residual": None if self.residual is None else float(self.residual),
            "consistent": self.consistent,
            "issues": list(self.issues),
            "escape": self.escape,
            "evidence": self.evidence,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def _sup(v):
    return float(np.max(np.abs(v)))


def find_fixed_point(spec: Spec, initial_set, tol: float = CONVERGENCE_TOL,
                     max_steps: int = MAX_STEPS, threads: int = 1) -> TrichotomyReport:
    """Run every initial condition to its limit and classify by consensus.

    Orbits reaching ``||x||_inf <= 1e-8`` count as extinct.  Converged limits
    must be strictly positive, agree pairwise to ``1e-6`` relative and leave
    a fixed-point residual of at most ``1e-9 (1 + ||q||_inf)``.  The outcome
    is cross-checked against R0 at the origin; a mismatch or disagreeing
    limits set ``consistent=False`` rather than raising.

    Raises:
        ConvergenceError: some orbit neither converged, died out nor
            overflowed within ``max_steps``.
    """
    X0 = _check_input(spec, np.atleast_2d(np.asarray(initial_set, dtype=float)))
    if np.any(X0.sum(axis=1) <= 0.0):
        raise ValueError("initial conditions must be nonzero")
    if threads > 1 and len(X0) > 1:
        chunks = np.array_split(np.arange(len(X0)), min(threads, len(X0)))
        with ThreadPoolExecutor(max_workers=threads) as ex:
            parts = list(ex.map(
                lambda ix: _iterate_batch(spec, X0[ix], max_steps, tol, EXTINCTION_TOL),
                chunks,
            ))
        final = np.concatenate([p[0] for p in parts])
        steps = np.concatenate([p[1] for p in parts])
        reasons = [r for p in parts for r in p[2]]
    else:
        final, steps, reasons = _iterate_batch(spec, X0, max_steps, tol, EXTINCTION_TOL)

    value = r0(spec)
    evidence = [
        {
            "index": i,
            "x0": [float(v) for v in X0[i]],
            "final": [float(v) for v in final[i]],
            "steps": int(steps[i]),
            "stop_reason": reasons[i],
        }
        for i in range(len(X0))
    ]
    stuck = [i for i, r in enumerate(reasons) if r == "max_steps"]
    if stuck and abs(value - 1.0) < NEAR_THRESHOLD:
        # convergence is arbitrarily slow next to the threshold
        return TrichotomyReport(
            outcome="threshold_inconclusive", q=None, residual=None,
            r0_at_origin=value, evidence=evidence,
            issues=[f"{len(stuck)} orbit(s) still moving after {max_steps} steps"],
        )
    if stuck:
        raise ConvergenceError(
            f"{len(stuck)} orbit(s) did not settle within {max_steps} steps",
            steps=max_steps,
        )

    issues = []
    q = None
    residual = None
    if any(r == "overflow" for r in reasons):
        outcome = "unbounded" if all(r == "overflow" for r in reasons) else "inconclusive"
        if outcome == "inconclusive":
            issues.append("some orbits overflowed while others settled")
    elif all(r == "extinct" for r in reasons):
        outcome = "extinction"
    elif all(r == "converged" for r in reasons):
        limits = final
        q = limits[0]
        q_scale = _sup(q)
        spread = max(
            _sup(a - b) / max(_sup(a), _sup(b)) for a in limits for b in limits
        )
        residual = max(_sup(_apply(spec, L) - L) for L in limits)
        outcome = "positive_fixed_point"
        if spread > AGREEMENT_TOL:
            issues.append(f"limits disagree (relative spread {spread:.3e})")
        if np.any(limits <= STRICT_MARGIN * q_scale):
            issues.append("limit is not strictly positive")
        if residual > RESIDUAL_TOL * (1.0 + q_scale):
            issues.append(f"fixed-point residual {residual:.3e} too large")
        if issues:
            outcome = "inconclusive"
    else:
        outcome = "inconclusive"
        issues.append("orbits split between extinction and a positive limit")

    if abs(value - 1.0) < NEAR_THRESHOLD:
        outcome = "threshold_inconclusive"
    elif value < 1.0 and outcome != "extinction":
        issues.append(f"R0={value:.12g} < 1 but outcome is {outcome}")
    elif value > 1.0 and outcome != "positive_fixed_point":
        issues.append(f"R0={value:.12g} > 1 but outcome is {outcome}")

    return TrichotomyReport(
        outcome=outcome, q=q, residual=residual, r0_at_origin=value,
        evidence=evidence, consistent=not issues, issues=issues,
    )


def default_initial_set(spec: Spec, seed: int = 0, minimum: int = 12) -> np.ndarray:
    """Unit vectors scaled by 1e-3, 1 and 1e3, topped up with log-uniform
    random positive states to at least ``minimum`` (and at least 3) rows."""
    d = spec.dim
    units = [scale * np.eye(d)[i] for scale in (1e-3, 1.0, 1e3) for i in range(d)]
    rng = np.random.default_rng(seed)
    extra = max(3, minimum - len(units))
    return np.vstack([np.array(units), log_uniform(rng, (extra, d))])


def eigenvector_escape(spec: Spec, steps: int = 200) -> dict:
    """Check that a small multiple of the Perron vector of ``A(0)`` moves away
    from the origin and that its orbit is nondecreasing."""
    lam, v = dominant_eigenpair(linearization(spec))
    try:
        scale = _sup(upper_bound_vector(spec))
    except ValueError:
        scale = 1.0
    eps = 1e-6 * scale / _sup(v)
    x0 = eps * v
    x1 = _apply(spec, x0)
    gap = x1 - x0
    escapes = bool(np.all(gap > STRICT_MARGIN * _sup(x1)))
    x = x1
    monotone = True
    worst = 0.0
    for _ in range(steps):
        y = _apply(spec, x)
        drop = float(np.max(x - y))
        worst = max(worst, drop)
        if drop > 1e-12 * _sup(y):
            monotone = False
        x = y
    return {
        "eigenvalue": float(lam),
        "epsilon": float(eps),
        "min_gap": float(gap.min()),
        "escapes": escapes,
        "monotone_orbit": monotone,
        "max_decrease": worst,
    }


def classify_trichotomy(spec: Spec, seed: int = 0, tol: float = CONVERGENCE_TOL,
                        max_steps: int = MAX_STEPS, initial_set=None,
                        threads: int = 1) -> TrichotomyReport:
    """Outcome of the density-dependent model from a default spread of starts.

    When R0 > 1 the Perron-vector escape is also verified and recorded under
    ``report.escape``.
    """
    if not is_density_dependent(spec):
        raise ValueError("trichotomy classification needs density-dependent rules throughout")
    X0 = default_initial_set(spec, seed) if initial_set is None else initial_set
    report = find_fixed_point(spec, X0, tol=tol, max_steps=max_steps, threads=threads)
    if report.r0_at_origin > 1.0 + NEAR_THRESHOLD:
        report.escape = eigenvector_escape(spec)
        if not (report.escape["escapes"] and report.escape["monotone_orbit"]):
            report.consistent = False
            report.issues.append("Perron-vector escape check failed")
    return report


# ---------------------------------------------------------------------------
# order-interval bound
# ---------------------------------------------------------------------------


def upper_bound_vector(spec: Spec) -> np.ndarray:
    """Componentwise bound on ``step(step(x))`` over the whole cone.

    Each survivor flow is replaced by its supremum ``m_i = b_i / c_i``; that
    bounds every non-egg coordinate after one step, and the egg coordinates
    after two steps are bounded by the fecundity-weighted sums of those.

    Raises:
        ValueError: a Constant rule is present (its flow is unbounded).
    """
    for _, pop in populations(spec):
        for rule in pop.transitions:
            if not isinstance(rule, BevertonHolt):
                raise ValueError("upper bound requires Beverton-Holt rules throughout")

    def saturated(rules, x):
        return np.broadcast_to(np.array([r.bound for r in rules]), x.shape).copy()

    # evaluate the map with every flow at its bound; egg entries are then
    # recomputed from the bounded non-egg entries
    probe = np.ones(spec.dim)
    first = _map_for(spec)(spec, probe, flows=saturated)
    eggs = egg_rows(spec)
    non_egg = first.copy()
    non_egg[eggs] = 0.0
    second = _map_for(spec)(spec, non_egg, flows=saturated)
    bound = first.copy()
    bound[eggs] = second[eggs]
    return bound


# ---------------------------------------------------------------------------
# property checks
# ---------------------------------------------------------------------------


@dataclass
class PropertyReport:
    name: str
    samples: int
    violation_count: int
    violations: list  # first few offending samples with margins
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.violation_count == 0

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "samples": self.samples,
            "violation_count": self.violation_count,
            "violations": self.violations,
            "details": self.details,
            "verdict": self.verdict,
        }


_KEEP = 10


def _collect(bad_rows, margins, payload):
    out = []
    for i in bad_rows[:_KEEP]:
        item = {"sample": int(i), "margin": float(margins[i])}
        item.update({k: [float(a) for a in v[i]] for k, v in payload.items()})
        out.append(item)
    return out


def check_monotone(spec: Spec, sample_count: int = 10_000, seed: int = 0,
                   rtol: float = 1e-13) -> PropertyReport:
    """Sample ordered pairs ``x <= y`` and test ``step(x) <= step(y)``.

    ``y`` adds a log-uniform perturbation to a random subset of coordinates;
    the first sample is the pair ``(0, y)``.
    """
    rng = np.random.default_rng(seed)
    d = spec.dim
    X = log_uniform(rng, (sample_count, d))
    mask = rng.random((sample_count, d)) < 0.5
    Y = X + log_uniform(rng, (sample_count, d)) * mask
    X[0] = 0.0
    FX, FY = _apply(spec, X), _apply(spec, Y)
    # violation when F(x) exceeds F(y) beyond rounding
    excess = FX - FY - rtol * np.abs(FY)
    margins = excess.max(axis=1)
    bad = np.flatnonzero(margins > 0.0)
    return PropertyReport(
        "monotone", sample_count, len(bad),
        _collect(bad, margins, {"x": X, "y": Y}),
    )


def check_strong_sublinear(spec: Spec, r: int, sample_count: int = 1_000,
                           seed: int = 0) -> PropertyReport:
    """Test ``lam * step^r(x) << step^r(lam * x)`` for ``x >> 0``, ``0 < lam < 1``.

    Strictness means a gap above ``1e-12`` times the coordinate's size.  For
    ``r = 1`` the egg coordinates are linear, so equality is expected there;
    ``details["egg_max_rel_dev"]`` records how exact it is.
    """
    if r < 1:
        raise ValueError("r must be >= 1")
    rng = np.random.default_rng(seed)
    d = spec.dim
    X = log_uniform(rng, (sample_count, d))
    lam = rng.uniform(0.01, 0.99, size=(sample_count, 1))
    lhs = lam * iterate(spec, X, r)
    rhs = iterate(spec, lam * X, r)
    gap = rhs - lhs
    need = STRICT_MARGIN * np.abs(rhs)
    margins = (need - gap).max(axis=1)
    bad = np.flatnonzero(margins >= 0.0)
    details = {"r": r}
    if r == 1:
        e = egg_rows(spec)
        dev = np.abs(gap[:, e]) / np.maximum(np.abs(rhs[:, e]), 1e-300)
        details["egg_max_rel_dev"] = float(dev.max())
    report = PropertyReport(
        f"strong_sublinear_r{r}", sample_count, len(bad),
        _collect(bad, margins, {"x": X, "lambda": lam}), details,
    )
    return report


def check_eventual_positivity(spec: Spec, r: int | None = None, sample_count: int = 100,
                              seed: int = 0) -> PropertyReport:
    """Test ``step^r(x) >> 0`` for nonzero ``x >= 0``.

    Samples are every unit basis vector (scaled log-uniformly) followed by
    random sparse nonnegative vectors.  ``r`` defaults to the state dimension.
    """
    d = spec.dim
    r = d if r is None else r
    rng = np.random.default_rng(seed)
    units = np.eye(d) * log_uniform(rng, (d, 1))
    sparse = log_uniform(rng, (sample_count, d)) * (rng.random((sample_count, d)) < 0.3)
    sparse[np.arange(sample_count), rng.integers(0, d, sample_count)] = log_uniform(rng, sample_count)
    X = np.vstack([units, sparse])
    Y = iterate(spec, X, r)
    floor = STRICT_MARGIN * np.max(np.abs(Y), axis=1, keepdims=True)
    margins = (floor - Y).max(axis=1)
    bad = np.flatnonzero(margins >= 0.0)
    return PropertyReport(
        f"eventual_positivity_r{r}", len(X), len(bad),
        _collect(bad, margins, {"x": X}), {"r": r},
    )


def check_bound(spec: Spec, sample_count: int = 10_000, seed: int = 0) -> PropertyReport:
    """Test ``step(step(x)) <= upper_bound_vector(spec)`` on sampled states."""
    a = upper_bound_vector(spec)
    rng = np.random.default_rng(seed)
    X = log_uniform(rng, (sample_count, spec.dim))
    Y = iterate(spec, X, 2)
    margins = (Y - a * (1.0 + 1e-12)).max(axis=1)
    bad = np.flatnonzero(margins > 0.0)
    return PropertyReport(
        "order_interval_bound", sample_count, len(bad),
        _collect(bad, margins, {"x": X}), {"bound": [float(v) for v in a]},
    )


def check_nonnegative(spec: Spec, sample_count: int = 10_000, seed: int = 0) -> PropertyReport:
    rng = np.random.default_rng(seed)
    X = log_uniform(rng, (sample_count, spec.dim)) * (rng.random((sample_count, spec.dim)) < 0.7)
    Y = _apply(spec, X)
    margins = (-Y).max(axis=1)
    bad = np.flatnonzero(margins > 0.0)
    return PropertyReport("nonnegative", sample_count, len(bad), _collect(bad, margins, {"x": X}))


def check_linear_dominance(spec: Spec, sample_count: int = 10_000, seed: int = 0) -> PropertyReport:
    """Test ``step(x) <= A(0) x`` on sampled states."""
    A0 = linearization(spec)
    rng = np.random.default_rng(seed)
    X = log_uniform(rng, (sample_count, spec.dim))
    Y = _apply(spec, X)
    Z = X @ A0.T
    margins = (Y - Z - 1e-13 * np.abs(Z)).max(axis=1)
    bad = np.flatnonzero(margins > 0.0)
    return PropertyReport("linear_dominance", sample_count, len(bad), _collect(bad, margins, {"x": X}))
