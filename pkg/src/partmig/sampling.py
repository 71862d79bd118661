"""Seeded random specs used by the verification suite and tests.

Parameter ranges keep every spec admissible and away from degenerate corners:

* constant transitions ``t_i ~ U(0.05, 1)`` for ``i < n``, ``t_n ~ U(0, 0.9)``
* Beverton--Holt ``b_i ~ U(0.2, 1)`` for ``i < n``, ``b_n ~ U(0.2, 0.9)``,
  ``c_i ~ U(0.1, 2)``
* fecundities ``f_i ~ U(0, 5)`` for ``i < n``, ``f_n ~ U(0.1, 5)``
* single-egg ``phi ~ U(0.05, 0.95)``; two-egg ``phi_s, phi_r ~ U(0.05, 0.95)``
"""

from __future__ import annotations

import dataclasses

import numpy as np

from .model import BevertonHolt, Constant, IsolatedSpec, SingleEggSpec, TwoEggSpec
from .spectral import r0


def log_uniform(rng, size, low=1e-3, high=1e3):
    return np.exp(rng.uniform(np.log(low), np.log(high), size=size))


def random_isolated(rng, n: int, density: bool = False) -> IsolatedSpec:
    rules = []
    for i in range(n):
        terminal = i == n - 1
        if density:
            b = rng.uniform(0.2, 0.9 if terminal else 1.0)
            rules.append(BevertonHolt(float(b), float(rng.uniform(0.1, 2.0))))
        else:
            t = rng.uniform(0.0, 0.9) if terminal else rng.uniform(0.05, 1.0)
            rules.append(Constant(float(t)))
    fec = [float(rng.uniform(0.0, 5.0)) for _ in range(n - 2)]
    fec.append(float(rng.uniform(0.1, 5.0)))
    return IsolatedSpec(tuple(rules), tuple(fec))


def random_single_egg(rng, n: int, m: int, density: bool = False) -> SingleEggSpec:
    return SingleEggSpec(
        random_isolated(rng, n, density),
        random_isolated(rng, m, density),
        float(rng.uniform(0.05, 0.95)),
    )


def random_two_egg(rng, n: int, m: int, density: bool = False) -> TwoEggSpec:
    return TwoEggSpec(
        random_isolated(rng, n, density),
        random_isolated(rng, m, density),
        float(rng.uniform(0.05, 0.95)),
        float(rng.uniform(0.05, 0.95)),
    )


def _scale_fecundities(pop: IsolatedSpec, k: float) -> IsolatedSpec:
    return dataclasses.replace(pop, fecundities=tuple(k * f for f in pop.fecundities))


def with_r0(spec, target: float):
    """Rescale all fecundities so the spec's R0 equals ``target``.

    R0 is homogeneous of degree one in the fecundities for every topology.
    """
    k = target / r0(spec)
    if isinstance(spec, IsolatedSpec):
        return _scale_fecundities(spec, k)
    return dataclasses.replace(
        spec,
        migrant=_scale_fecundities(spec.migrant, k),
        resident=_scale_fecundities(spec.resident, k),
    )
