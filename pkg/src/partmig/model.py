"""Model specifications and projection-matrix assembly.

Four topologies are supported:

* :class:`IsolatedSpec` -- an ``n``-stage Leslie model of a single population
  (stage 1 holds eggs, the last stage survives in place).
* :class:`SingleEggSpec` -- migrants and residents sharing one egg pool; a
  fraction ``phi`` of surviving eggs becomes migrants.
* :class:`TwoEggSpec` -- separate migrant and resident egg pools; ``phi_s`` of
  migrant-laid eggs and ``phi_r`` of resident-laid eggs stay in the parent's
  pool.

Transition probabilities are either constants (linear models) or
Beverton--Holt laws ``t(x) = b / (1 + c x)`` that depend on the density of the
source stage.  With density-dependent rules the model is ``x' = A(x) x`` and
``A(0)`` is its linearization at the origin.

State layouts (0-based):

* isolated: ``[egg, stage 2, ..., stage n]``
* single egg: ``[egg, migrant 2..n, resident 2..m]`` (length ``n + m - 1``)
* two egg: ``[migrant egg, migrant 2..n, resident egg, resident 2..m]``
  (length ``n + m``)
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Union

import numpy as np

from .errors import InvalidSpecError, SpecFormatError

# ---------------------------------------------------------------------------
# transition rules
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Constant:
    """Density-independent transition probability."""

    t: float

    density_dependent = False

    def rate(self, x):
        return self.t + 0.0 * np.asarray(x, dtype=float)

    def flow(self, x):
        return self.t * np.asarray(x, dtype=float)

    @property
    def at_zero(self) -> float:
        return float(self.t)

    @property
    def bound(self) -> float:
        return math.inf

    def coefficients(self) -> tuple[float, float]:
        return float(self.t), 0.0


@dataclass(frozen=True)
class BevertonHolt:
    """Transition probability ``b / (1 + c x)``.

    The survivor flow ``x t(x)`` is the Beverton--Holt function, strictly
    increasing and bounded by ``b / c``.
    """

    b: float
    c: float

    density_dependent = True

    def rate(self, x):
        return self.b / (1.0 + self.c * np.asarray(x, dtype=float))

    def flow(self, x):
        x = np.asarray(x, dtype=float)
        return self.b * x / (1.0 + self.c * x)

    @property
    def at_zero(self) -> float:
        return float(self.b)

    @property
    def bound(self) -> float:
        return self.b / self.c

    def coefficients(self) -> tuple[float, float]:
        return float(self.b), float(self.c)


TransitionRule = Union[Constant, BevertonHolt]


# ---------------------------------------------------------------------------
# specs
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IsolatedSpec:
    """Single-population stage model.

    Args:
        transitions: one rule per stage; rule ``i`` moves stage ``i`` into
            stage ``i + 1`` and the last rule is survival in the final stage.
        fecundities: ``f_2, ..., f_n``.
    """

    transitions: tuple
    fecundities: tuple

    def __post_init__(self):
        object.__setattr__(self, "transitions", tuple(self.transitions))
        object.__setattr__(
            self, "fecundities", tuple(float(f) for f in self.fecundities)
        )

    @property
    def n(self) -> int:
        return len(self.transitions)

    @property
    def dim(self) -> int:
        return self.n


@dataclass(frozen=True)
class SingleEggSpec:
    migrant: IsolatedSpec
    resident: IsolatedSpec
    phi: float

    @property
    def dim(self) -> int:
        return self.migrant.n + self.resident.n - 1


@dataclass(frozen=True)
class TwoEggSpec:
    migrant: IsolatedSpec
    resident: IsolatedSpec
    phi_s: float
    phi_r: float

    @property
    def dim(self) -> int:
        return self.migrant.n + self.resident.n


CoupledSpec = Union[SingleEggSpec, TwoEggSpec]
Spec = Union[IsolatedSpec, SingleEggSpec, TwoEggSpec]


def populations(spec: Spec) -> list[tuple[str, IsolatedSpec]]:
    """Named member populations of a spec."""
    if isinstance(spec, IsolatedSpec):
        return [("population", spec)]
    return [("migrant", spec.migrant), ("resident", spec.resident)]


def egg_rows(spec: Spec) -> list[int]:
    """Indices of the state coordinates that receive offspring."""
    if isinstance(spec, TwoEggSpec):
        return [0, spec.migrant.n]
    return [0]


def is_density_dependent(spec: Spec) -> bool:
    """True when every transition rule depends on density."""
    return all(
        rule.density_dependent
        for _, pop in populations(spec)
        for rule in pop.transitions
    )


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    where: str
    index: int | None
    message: str

    def __str__(self):
        loc = self.where if self.index is None else f"{self.where}[{self.index}]"
        return f"{loc}: {self.message}"


@dataclass
class ValidationReport:
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, where, index, message):
        self.violations.append(Violation(where, index, message))


_PROBE = np.concatenate([[0.0], np.logspace(-4, 4, 81)])


def _check_rule(report, where, i, rule, terminal):
    # 1-based stage index in messages
    stage = i + 1
    if isinstance(rule, Constant):
        t = rule.t
        if not (math.isfinite(t) and 0.0 <= t <= 1.0):
            report.add(where, stage, f"transition t={t} outside [0, 1]")
        elif not terminal and t <= 0.0:
            report.add(where, stage, "t must be > 0 for irreducibility")
    elif isinstance(rule, BevertonHolt):
        if not (math.isfinite(rule.b) and 0.0 < rule.b <= 1.0):
            report.add(where, stage, f"Beverton-Holt b={rule.b} outside (0, 1]")
        if not (math.isfinite(rule.c) and rule.c > 0.0):
            report.add(where, stage, f"Beverton-Holt c={rule.c} must be > 0")
    else:
        # other rule families: sample the A1-A2 conditions on a log grid
        t = np.asarray(rule.rate(_PROBE), dtype=float)
        s = _PROBE * t
        if not np.all(np.isfinite(t)) or np.any(t <= 0.0) or np.any(t > 1.0):
            report.add(where, stage, "sampled t(x) leaves (0, 1]")
        if np.any(np.diff(t) >= 0.0):
            report.add(where, stage, "sampled t(x) is not strictly decreasing")
        if np.any(np.diff(s) <= 0.0):
            report.add(where, stage, "sampled flow x*t(x) is not strictly increasing")
    if terminal and rule.at_zero >= 1.0:
        report.add(where, stage, "terminal survival t_n(0) must be < 1 (I - T singular)")


def _validate_population(report, where, pop: IsolatedSpec):
    n = pop.n
    if n < 2:
        report.add(where, None, f"stage count n={n} must be at least 2")
        return
    if len(pop.fecundities) != n - 1:
        report.add(
            where, None,
            f"expected {n - 1} fecundities (f_2..f_n), got {len(pop.fecundities)}",
        )
        return
    for i, rule in enumerate(pop.transitions):
        _check_rule(report, where + ".transitions", i, rule, terminal=(i == n - 1))
    for j, f in enumerate(pop.fecundities):
        if not (math.isfinite(f) and f >= 0.0):
            report.add(where + ".fecundities", j + 2, f"fecundity {f} must be >= 0")
    if pop.fecundities[-1] <= 0.0:
        report.add(where + ".fecundities", n, "last-stage fecundity f_n must be > 0")


def validate(spec: Spec) -> ValidationReport:
    """Check admissibility; never raises, lists every violation found."""
    report = ValidationReport()
    for where, pop in populations(spec):
        _validate_population(report, where, pop)
    if isinstance(spec, SingleEggSpec):
        if not (math.isfinite(spec.phi) and 0.0 < spec.phi < 1.0):
            report.add("phi", None, f"phi={spec.phi} must lie in (0, 1)")
    elif isinstance(spec, TwoEggSpec):
        for name in ("phi_s", "phi_r"):
            v = getattr(spec, name)
            if not (math.isfinite(v) and 0.0 <= v <= 1.0):
                report.add(name, None, f"{name}={v} must lie in [0, 1]")
    return report


def require_valid(spec: Spec) -> None:
    report = validate(spec)
    if not report.ok:
        raise InvalidSpecError(report)


# ---------------------------------------------------------------------------
# assembly
# ---------------------------------------------------------------------------


def _state(x, dim):
    x = np.asarray(x, dtype=float)
    if x.shape != (dim,):
        raise ValueError(f"state must have shape ({dim},), got {x.shape}")
    return x


def _leslie(pop: IsolatedSpec, x) -> np.ndarray:
    n = pop.n
    A = np.zeros((n, n))
    A[0, 1:] = pop.fecundities
    for i in range(n - 1):
        A[i + 1, i] = pop.transitions[i].rate(x[i])
    A[n - 1, n - 1] += pop.transitions[n - 1].rate(x[n - 1])
    return A


def assemble_isolated(spec: IsolatedSpec, x) -> np.ndarray:
    """Projection matrix ``A(x)`` of an isolated population."""
    return _leslie(spec, _state(x, spec.n))


def assemble_single_egg(spec: SingleEggSpec, x) -> np.ndarray:
    """Projection matrix of the shared-egg-pool model at state ``x``."""
    mig, res = spec.migrant, spec.resident
    n, m = mig.n, res.n
    x = _state(x, n + m - 1)
    N = n + m - 1
    A = np.zeros((N, N))
    A[0, 1:n] = mig.fecundities
    A[0, n:] = res.fecundities

    A[1, 0] = spec.phi * mig.transitions[0].rate(x[0])
    for i in range(1, n - 1):
        A[i + 1, i] = mig.transitions[i].rate(x[i])
    A[n - 1, n - 1] += mig.transitions[n - 1].rate(x[n - 1])

    # resident stage j sits at index n + j - 2
    A[n, 0] = (1.0 - spec.phi) * res.transitions[0].rate(x[0])
    for j in range(1, m - 1):
        A[n + j, n + j - 1] = res.transitions[j].rate(x[n + j - 1])
    A[N - 1, N - 1] += res.transitions[m - 1].rate(x[N - 1])
    return A


def assemble_two_egg(spec: TwoEggSpec, x) -> np.ndarray:
    """Block projection matrix of the two-egg-pool model at state ``x``.

    Only the first (egg) row of each block carries the allocation weights.
    """
    mig, res = spec.migrant, spec.resident
    n, m = mig.n, res.n
    x = _state(x, n + m)
    A = np.zeros((n + m, n + m))
    A[:n, :n] = _leslie(mig, x[:n])
    A[n:, n:] = _leslie(res, x[n:])
    A[0, :n] *= spec.phi_s
    A[n, n:] *= spec.phi_r
    A[0, n + 1:] = (1.0 - spec.phi_r) * np.asarray(res.fecundities)
    A[n, 1:n] = (1.0 - spec.phi_s) * np.asarray(mig.fecundities)
    return A


def assemble(spec: Spec, x=None) -> np.ndarray:
    """Dispatch to the topology's assembler; ``x=None`` means the origin."""
    if x is None:
        x = np.zeros(spec.dim)
    if isinstance(spec, IsolatedSpec):
        return assemble_isolated(spec, x)
    if isinstance(spec, SingleEggSpec):
        return assemble_single_egg(spec, x)
    if isinstance(spec, TwoEggSpec):
        return assemble_two_egg(spec, x)
    raise TypeError(f"unsupported spec type {type(spec).__name__}")


def linearization(spec: Spec) -> np.ndarray:
    """Jacobian of ``x -> A(x) x`` at the origin, i.e. ``A(0)``."""
    return assemble(spec, np.zeros(spec.dim))


# ---------------------------------------------------------------------------
# JSON documents
# ---------------------------------------------------------------------------

_KINDS = ("isolated", "single_egg", "two_egg")


def _strict_keys(obj, allowed, where):
    if not isinstance(obj, dict):
        raise SpecFormatError(f"{where}: expected an object")
    extra = set(obj) - set(allowed)
    if extra:
        raise SpecFormatError(f"{where}: unknown keys {sorted(extra)}")


def _number(v, where):
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise SpecFormatError(f"{where}: expected a number, got {v!r}")
    return float(v)


def _rule_from_dict(d, where):
    if not isinstance(d, dict) or len(d) != 1:
        raise SpecFormatError(f"{where}: expected exactly one of 'const', 'beverton_holt'")
    (key, val), = d.items()
    if key == "const":
        return Constant(_number(val, where + ".const"))
    if key == "beverton_holt":
        _strict_keys(val, ("b", "c"), where + ".beverton_holt")
        for k in ("b", "c"):
            if k not in val:
                raise SpecFormatError(f"{where}.beverton_holt: missing '{k}'")
        return BevertonHolt(
            _number(val["b"], where + ".b"), _number(val["c"], where + ".c")
        )
    raise SpecFormatError(f"{where}: unknown rule kind {key!r}")


def _population_from_dict(d, where):
    _strict_keys(d, ("transitions", "fecundities"), where)
    for k in ("transitions", "fecundities"):
        if not isinstance(d.get(k), list):
            raise SpecFormatError(f"{where}: '{k}' must be a list")
    rules = [
        _rule_from_dict(r, f"{where}.transitions[{i}]")
        for i, r in enumerate(d["transitions"])
    ]
    fec = [_number(f, f"{where}.fecundities[{i}]") for i, f in enumerate(d["fecundities"])]
    return IsolatedSpec(tuple(rules), tuple(fec))


def spec_from_dict(doc: dict[str, Any]) -> Spec:
    """Parse a spec document; unknown or missing keys raise SpecFormatError."""
    if not isinstance(doc, dict):
        raise SpecFormatError("spec: expected an object")
    kind = doc.get("kind")
    if kind not in _KINDS:
        raise SpecFormatError(f"spec: 'kind' must be one of {_KINDS}, got {kind!r}")
    if kind == "isolated":
        _strict_keys(doc, ("kind", "migrant", "resident"), "spec")
        present = [k for k in ("migrant", "resident") if k in doc]
        if len(present) != 1:
            raise SpecFormatError(
                "spec: isolated kind needs exactly one of 'migrant' or 'resident'"
            )
        return _population_from_dict(doc[present[0]], present[0])
    keys = ("kind", "migrant", "resident") + (
        ("phi",) if kind == "single_egg" else ("phi_s", "phi_r")
    )
    _strict_keys(doc, keys, "spec")
    for k in keys:
        if k not in doc:
            raise SpecFormatError(f"spec: missing '{k}'")
    mig = _population_from_dict(doc["migrant"], "migrant")
    res = _population_from_dict(doc["resident"], "resident")
    if kind == "single_egg":
        return SingleEggSpec(mig, res, _number(doc["phi"], "phi"))
    return TwoEggSpec(
        mig, res, _number(doc["phi_s"], "phi_s"), _number(doc["phi_r"], "phi_r")
    )


def _rule_to_dict(rule):
    if isinstance(rule, Constant):
        return {"const": rule.t}
    if isinstance(rule, BevertonHolt):
        return {"beverton_holt": {"b": rule.b, "c": rule.c}}
    raise TypeError(f"rule {rule!r} has no JSON form")


def _population_to_dict(pop):
    return {
        "transitions": [_rule_to_dict(r) for r in pop.transitions],
        "fecundities": list(pop.fecundities),
    }


def spec_to_dict(spec: Spec) -> dict[str, Any]:
    if isinstance(spec, IsolatedSpec):
        return {"kind": "isolated", "migrant": _population_to_dict(spec)}
    doc = {
        "kind": "single_egg" if isinstance(spec, SingleEggSpec) else "two_egg",
        "migrant": _population_to_dict(spec.migrant),
        "resident": _population_to_dict(spec.resident),
    }
    if isinstance(spec, SingleEggSpec):
        doc["phi"] = spec.phi
    else:
        doc["phi_s"] = spec.phi_s
        doc["phi_r"] = spec.phi_r
    return doc


def canonical_json(spec: Spec) -> str:
    return json.dumps(spec_to_dict(spec), sort_keys=True, separators=(",", ":"))


def load_spec(path) -> Spec:
    """Read a spec JSON file.  I/O and JSON syntax errors propagate."""
    with open(Path(path), encoding="utf-8") as fh:
        doc = json.load(fh)
    return spec_from_dict(doc)
