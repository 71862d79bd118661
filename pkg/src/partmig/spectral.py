"""Dominant eigenvalues, basic reproduction numbers and allocation analysis.

All reproduction numbers are taken at the linearization ``A(0)``.  The
next-generation split puts egg (offspring-receiving) rows into the fecundity
matrix ``F`` and every other row into the transition matrix ``T``; the basic
reproduction number is ``rho(F (I - T)^-1)``.
"""

from __future__ import annotations

import dataclasses
import enum
import math
import re
from dataclasses import dataclass

import numpy as np

from .errors import ConsistencyError, ConvergenceError
from .model import (
    BevertonHolt,
    Constant,
    IsolatedSpec,
    SingleEggSpec,
    Spec,
    TwoEggSpec,
    egg_rows,
    linearization,
    validate,
)

EIG_RTOL = 1e-12
EIG_MAX_ITER = 100_000
THRESHOLD_TOL = 1e-9


# ---------------------------------------------------------------------------
# Perron root
# ---------------------------------------------------------------------------


def _check_nonnegative_square(M):
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise ValueError("matrix has non-finite entries")
    if np.any(M < 0.0):
        raise ValueError("matrix has negative entries")
    return M


def dominant_eigenpair(M, rtol: float = EIG_RTOL, max_iter: int = EIG_MAX_ITER):
    """Perron root and eigenvector of a nonnegative matrix.

    Power iteration runs on ``M + I``, which is primitive whenever ``M`` is
    irreducible.  Convergence is certified by the Collatz--Wielandt bounds
    ``min_i (Mx)_i / x_i <= rho(M) <= max_i (Mx)_i / x_i`` for positive ``x``.

    Returns:
        ``(rho, v)`` with ``v`` positive and normalized to unit max-norm.

    Raises:
        ValueError: ``M`` is not square, not finite, or has negative entries.
        ConvergenceError: the bound gap did not close within ``max_iter``.
    """
    M = _check_nonnegative_square(M)
    n = M.shape[0]
    S = M + np.eye(n)
    x = np.ones(n)
    gap = math.inf
    for k in range(1, max_iter + 1):
        y = S @ x
        mask = x > 1e-290
        ratios = y[mask] / x[mask]
        lo, hi = ratios.min(), ratios.max()
        gap = hi - lo
        rho = 0.5 * (lo + hi) - 1.0
        if gap <= rtol * max(rho, 1e-300):
            return max(rho, 0.0), y / y.max()
        y /= y.max()
        # reducible matrices: the vector settles but the bounds need not meet
        if np.max(np.abs(y - x)) <= 1e-15:
            Sy = S @ y
            return max(float(Sy.max() / y.max()) - 1.0, 0.0), y
        x = y
    raise ConvergenceError(
        f"power iteration did not converge in {max_iter} iterations "
        f"(Collatz-Wielandt gap {gap:.3e})",
        residual=gap,
        steps=max_iter,
    )


def dominant_eigenvalue(M, rtol: float = EIG_RTOL, max_iter: int = EIG_MAX_ITER) -> float:
    """Spectral radius of a nonnegative matrix (see :func:`dominant_eigenpair`)."""
    return float(dominant_eigenpair(M, rtol, max_iter)[0])


# ---------------------------------------------------------------------------
# next-generation operator
# ---------------------------------------------------------------------------


def _gauss_solve(A, B):
    """Solve ``A X = B`` by Gaussian elimination with partial pivoting."""
    A = np.array(A, dtype=float)
    B = np.array(B, dtype=float)
    vector = B.ndim == 1
    if vector:
        B = B[:, None]
    n = A.shape[0]
    scale = max(np.abs(A).max(), 1.0)
    for k in range(n):
        p = k + int(np.argmax(np.abs(A[k:, k])))
        if abs(A[p, k]) <= 1e-14 * scale:
            raise ValueError("I - T is singular")
        if p != k:
            A[[k, p]] = A[[p, k]]
            B[[k, p]] = B[[p, k]]
        factors = A[k + 1:, k] / A[k, k]
        A[k + 1:, k:] -= np.outer(factors, A[k, k:])
        B[k + 1:] -= np.outer(factors, B[k])
    X = np.zeros_like(B)
    for k in range(n - 1, -1, -1):
        X[k] = (B[k] - A[k, k + 1:] @ X[k + 1:]) / A[k, k]
    return X[:, 0] if vector else X


def split_next_generation(A, eggs):
    """``(F, T)`` with ``F`` holding the egg rows of ``A`` and ``T`` the rest."""
    A = np.asarray(A, dtype=float)
    F = np.zeros_like(A)
    F[eggs] = A[eggs]
    return F, A - F


def _matrix_and_eggs(spec_or_matrix, eggs):
    if isinstance(spec_or_matrix, (IsolatedSpec, SingleEggSpec, TwoEggSpec)):
        return linearization(spec_or_matrix), egg_rows(spec_or_matrix)
    A = _check_nonnegative_square(spec_or_matrix)
    return A, list(eggs) if eggs is not None else [0]


def _small_radius(K):
    k = K.shape[0]
    if k == 1:
        return abs(float(K[0, 0]))
    if k == 2:
        a, b, c, d = (float(v) for v in K.ravel())
        return 0.5 * (a + d + math.sqrt((a - d) ** 2 + 4.0 * b * c))
    return dominant_eigenvalue(K)


def r0_next_generation(spec_or_matrix, eggs=None) -> float:
    """``rho(F (I - T)^-1)`` read from the egg-row principal block.

    ``F (I - T)^-1`` is nonzero only on egg rows, so its spectrum is that of
    the small egg-by-egg block plus zeros.

    Args:
        spec_or_matrix: a spec (its linearization is used) or a projection
            matrix.
        eggs: egg-row indices when a matrix is given; defaults to ``[0]``.
    """
    A, eggs = _matrix_and_eggs(spec_or_matrix, eggs)
    F, T = split_next_generation(A, eggs)
    I_T = np.eye(A.shape[0]) - T
    # rows of F (I-T)^-1 on eggs: solve (I-T)^T Y = F[eggs]^T
    Y = _gauss_solve(I_T.T, F[eggs].T)
    K = Y.T[:, eggs]
    return _small_radius(K)


def next_generation_matrix(spec_or_matrix, eggs=None) -> np.ndarray:
    """Dense ``F (I - T)^-1`` computed with a general inverse."""
    A, eggs = _matrix_and_eggs(spec_or_matrix, eggs)
    F, T = split_next_generation(A, eggs)
    return F @ np.linalg.inv(np.eye(A.shape[0]) - T)


def r0_dense(spec_or_matrix, eggs=None) -> float:
    """Reference value: largest eigenvalue modulus of the dense operator."""
    K = next_generation_matrix(spec_or_matrix, eggs)
    return float(np.max(np.abs(np.linalg.eigvals(K))))


# ---------------------------------------------------------------------------
# closed forms
# ---------------------------------------------------------------------------


def r0_isolated_closed_form(spec: IsolatedSpec) -> float:
    """Expected lifetime egg output of one egg, at zero density."""
    t = [rule.at_zero for rule in spec.transitions]
    f = spec.fecundities
    n = spec.n
    total = 0.0
    survival = 1.0
    for i in range(n - 1):
        survival *= t[i]
        if i < n - 2:
            total += survival * f[i]
        else:
            total += survival / (1.0 - t[n - 1]) * f[i]
    return total


def r0_single_egg(spec: SingleEggSpec) -> float:
    """``phi R0^s + (1 - phi) R0^r``."""
    r_s = r0_isolated_closed_form(spec.migrant)
    r_r = r0_isolated_closed_form(spec.resident)
    return spec.phi * r_s + (1.0 - spec.phi) * r_r


def _check_domain(phi_s, phi_r):
    if not (0.0 <= phi_s <= 1.0 and 0.0 <= phi_r <= 1.0):
        raise ValueError(f"allocation ({phi_s}, {phi_r}) outside [0, 1]^2")


def _two_pool_discriminant(r_s, r_r, phi_s, phi_r):
    # (tr)^2 - 4 det rewritten without cancellation
    return (phi_s * r_s - phi_r * r_r) ** 2 + 4.0 * (1.0 - phi_s) * (1.0 - phi_r) * r_s * r_r


def two_pool_r0(r_s, r_r, phi_s, phi_r):
    """Perron root of ``[[phi_s R^s, (1-phi_r) R^r], [(1-phi_s) R^s, phi_r R^r]]``.

    Vectorizes over array-valued ``phi_s`` / ``phi_r``.
    """
    phi_s = np.asarray(phi_s, dtype=float)
    phi_r = np.asarray(phi_r, dtype=float)
    disc = _two_pool_discriminant(r_s, r_r, phi_s, phi_r)
    assert np.all(disc >= 0.0), "negative discriminant inside the allocation square"
    out = 0.5 * (phi_s * r_s + phi_r * r_r + np.sqrt(disc))
    return float(out) if out.ndim == 0 else out


def r0_two_egg(spec: TwoEggSpec) -> float:
    _check_domain(spec.phi_s, spec.phi_r)
    return two_pool_r0(
        r0_isolated_closed_form(spec.migrant),
        r0_isolated_closed_form(spec.resident),
        spec.phi_s,
        spec.phi_r,
    )


def two_pool_gradient(r_s, r_r, phi_s, phi_r) -> tuple[float, float]:
    """Partial derivatives of :func:`two_pool_r0` in ``phi_s`` and ``phi_r``."""
    if not (0.0 < phi_s < 1.0 and 0.0 < phi_r < 1.0):
        raise ValueError("gradient is defined on the open square (0, 1)^2 only")
    root = math.sqrt(_two_pool_discriminant(r_s, r_r, phi_s, phi_r))
    if root == 0.0:
        raise ValueError("square root vanishes; gradient undefined")
    trace = phi_s * r_s + phi_r * r_r
    d_s = 0.5 * (r_s + (trace * r_s - 2.0 * r_s * r_r) / root)
    d_r = 0.5 * (r_r + (trace * r_r - 2.0 * r_s * r_r) / root)
    return d_s, d_r


def r0_two_egg_gradient(spec: TwoEggSpec, phi_s: float, phi_r: float) -> tuple[float, float]:
    r_s = r0_isolated_closed_form(spec.migrant)
    r_r = r0_isolated_closed_form(spec.resident)
    if r_s == 0.0 or r_r == 0.0:
        raise ValueError("gradient requires nonzero R0^s and R0^r")
    return two_pool_gradient(r_s, r_r, phi_s, phi_r)


def r0(spec: Spec) -> float:
    """Closed-form reproduction number appropriate to the topology."""
    if isinstance(spec, IsolatedSpec):
        return r0_isolated_closed_form(spec)
    if isinstance(spec, SingleEggSpec):
        return r0_single_egg(spec)
    if isinstance(spec, TwoEggSpec):
        return r0_two_egg(spec)
    raise TypeError(f"unsupported spec type {type(spec).__name__}")


# ---------------------------------------------------------------------------
# growth classification
# ---------------------------------------------------------------------------


class Regime(str, enum.Enum):
    DECLINE = "Decline"
    THRESHOLD = "Threshold"
    GROWTH = "Growth"


@dataclass(frozen=True)
class GrowthClassification:
    lam: float
    r0: float
    regime: Regime


def regime_of(r0_value: float, tol: float = THRESHOLD_TOL) -> Regime:
    if abs(r0_value - 1.0) <= tol:
        return Regime.THRESHOLD
    return Regime.DECLINE if r0_value < 1.0 else Regime.GROWTH


def relation_holds(lam: float, r0_value: float, tol: float = THRESHOLD_TOL) -> bool:
    """``R0 <= lam < 1``, ``lam = R0 = 1`` or ``1 < lam <= R0``, within ``tol``.

    All three cases say that ``lam`` lies between ``R0`` and 1.
    """
    lo, hi = min(r0_value, 1.0), max(r0_value, 1.0)
    return lo * (1.0 - tol) - tol <= lam <= hi * (1.0 + tol) + tol


def classify(spec: Spec, tol: float = THRESHOLD_TOL) -> GrowthClassification:
    """Perron root and R0 of the linearization plus the growth regime.

    Raises:
        ConsistencyError: ``lam`` does not lie between ``R0`` and 1.
    """
    lam = dominant_eigenvalue(linearization(spec))
    value = r0(spec)
    if not relation_holds(lam, value, tol):
        raise ConsistencyError(
            f"Perron root {lam!r} does not lie between R0={value!r} and 1"
        )
    return GrowthClassification(lam, value, regime_of(value, tol))


# ---------------------------------------------------------------------------
# allocation surface
# ---------------------------------------------------------------------------


@dataclass
class AllocationSurface:
    phi_s: np.ndarray
    phi_r: np.ndarray
    values: np.ndarray  # values[i, j] at (phi_s[i], phi_r[j])
    r0_s: float
    r0_r: float
    argmax: list
    corners: dict
    predicted_edge: str  # "phi_s=1", "phi_r=1" or "constant"
    max_on_predicted_edge: bool

    @property
    def max_value(self) -> float:
        return float(self.values.max())


def allocation_surface(spec: TwoEggSpec, grid_resolution: int = 101,
                       atol: float = 1e-9) -> AllocationSurface:
    """Evaluate R0 over a uniform grid on the allocation square.

    The maximum is expected on the ``phi_s = 1`` edge when ``R0^r < R0^s``,
    on the ``phi_r = 1`` edge when ``R0^s < R0^r``, and the surface is flat
    when the two numbers coincide.
    """
    if grid_resolution < 2:
        raise ValueError("grid_resolution must be >= 2")
    r_s = r0_isolated_closed_form(spec.migrant)
    r_r = r0_isolated_closed_form(spec.resident)
    grid = np.linspace(0.0, 1.0, grid_resolution)
    PS, PR = np.meshgrid(grid, grid, indexing="ij")
    values = two_pool_r0(r_s, r_r, PS, PR)

    vmax = values.max()
    tol = atol * max(1.0, abs(vmax))
    idx = np.argwhere(values >= vmax - tol)
    argmax = [(float(grid[i]), float(grid[j])) for i, j in idx]
    corners = {
        (0.0, 0.0): float(values[0, 0]),
        (0.0, 1.0): float(values[0, -1]),
        (1.0, 0.0): float(values[-1, 0]),
        (1.0, 1.0): float(values[-1, -1]),
    }

    if abs(r_s - r_r) <= 1e-12 * max(abs(r_s), abs(r_r), 1e-300):
        edge = "constant"
        ok = bool(np.ptp(values) <= 1e-10 * max(1.0, abs(r_s)))
    elif r_r < r_s:
        edge = "phi_s=1"
        ok = all(ps == 1.0 for ps, _ in argmax) and abs(vmax - r_s) <= tol
    else:
        edge = "phi_r=1"
        ok = all(pr == 1.0 for _, pr in argmax) and abs(vmax - r_r) <= tol
    return AllocationSurface(grid, grid.copy(), values, r_s, r_r, argmax,
                             corners, edge, ok)


# ---------------------------------------------------------------------------
# sensitivity
# ---------------------------------------------------------------------------

_HANDLE = re.compile(r"^(?:(migrant|resident)\.)?([tf])(\d+)$")


def parameter_handles(spec: Spec) -> list[str]:
    """All ``t_i(0)`` and ``f_i`` handles, e.g. ``"t1"`` or ``"migrant.f3"``."""
    out = []
    for name, pop in _named(spec):
        prefix = "" if name is None else name + "."
        out += [f"{prefix}t{i}" for i in range(1, pop.n + 1)]
        out += [f"{prefix}f{i}" for i in range(2, pop.n + 1)]
    return out


def _named(spec):
    if isinstance(spec, IsolatedSpec):
        return [(None, spec)]
    return [("migrant", spec.migrant), ("resident", spec.resident)]


def _parse_handle(spec, handle):
    m = _HANDLE.match(handle)
    if not m:
        raise ValueError(f"malformed parameter handle {handle!r}")
    pop_name, kind, idx = m.group(1), m.group(2), int(m.group(3))
    if isinstance(spec, IsolatedSpec):
        if pop_name is not None:
            raise ValueError(f"isolated specs take unprefixed handles, got {handle!r}")
    elif pop_name is None:
        raise ValueError(f"coupled specs need a 'migrant.' or 'resident.' prefix: {handle!r}")
    pop = spec if pop_name is None else getattr(spec, pop_name)
    lo = 1 if kind == "t" else 2
    if not lo <= idx <= pop.n:
        raise ValueError(f"{handle!r}: index out of range {lo}..{pop.n}")
    return pop_name, kind, idx


def get_parameter(spec: Spec, handle: str) -> float:
    pop_name, kind, idx = _parse_handle(spec, handle)
    pop = spec if pop_name is None else getattr(spec, pop_name)
    if kind == "f":
        return pop.fecundities[idx - 2]
    return pop.transitions[idx - 1].at_zero


def set_parameter(spec: Spec, handle: str, value: float) -> Spec:
    """Copy of ``spec`` with one ``t_i(0)`` scale or ``f_i`` replaced."""
    pop_name, kind, idx = _parse_handle(spec, handle)
    pop = spec if pop_name is None else getattr(spec, pop_name)
    if kind == "f":
        fec = list(pop.fecundities)
        fec[idx - 2] = value
        new_pop = dataclasses.replace(pop, fecundities=tuple(fec))
    else:
        rules = list(pop.transitions)
        rule = rules[idx - 1]
        if isinstance(rule, Constant):
            rules[idx - 1] = Constant(value)
        elif isinstance(rule, BevertonHolt):
            rules[idx - 1] = BevertonHolt(value, rule.c)
        else:
            raise TypeError(f"cannot perturb rule of type {type(rule).__name__}")
        new_pop = dataclasses.replace(pop, transitions=tuple(rules))
    if pop_name is None:
        return new_pop
    return dataclasses.replace(spec, **{pop_name: new_pop})


def default_step(value: float) -> float:
    return max(1e-6 * abs(value), 1e-9)


def sensitivity(spec: Spec, parameter_handle: str, step: float | None = None) -> float:
    """Central finite difference of R0 with respect to one parameter.

    Raises:
        ValueError: the perturbed spec leaves the admissible region.
    """
    theta = get_parameter(spec, parameter_handle)
    h = default_step(theta) if step is None else step
    lo = set_parameter(spec, parameter_handle, theta - h)
    hi = set_parameter(spec, parameter_handle, theta + h)
    for s in (lo, hi):
        report = validate(s)
        if not report.ok:
            raise ValueError(
                f"perturbing {parameter_handle} by {h:g} leaves the valid region: "
                + "; ".join(map(str, report.violations))
            )
    return (r0(hi) - r0(lo)) / (2.0 * h)
