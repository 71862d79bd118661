from __future__ import annotations

import math

import numpy as np
import pytest

from partmig import sampling
from partmig.dynamics import (
    check_bound,
    check_eventual_positivity,
    check_linear_dominance,
    check_monotone,
    check_nonnegative,
    check_strong_sublinear,
    classify_trichotomy,
    default_initial_set,
    eigenvector_escape,
    find_fixed_point,
    iterate,
    simulate,
    step,
    step_matrix,
    upper_bound_vector,
)
from partmig.errors import ConvergenceError
from partmig.model import BevertonHolt, SingleEggSpec, TwoEggSpec, linearization
from partmig.spectral import r0

from conftest import BH, isolated


def bh_pair(f):
    return isolated((BH(0.5, 1.0), BH(0.5, 1.0)), (f,))


def fixed_point_bh_pair(f):
    """Positive root of 1 = 0.5 f/(1 + f y) + 0.5/(1 + y), returned as (f y, y)."""
    # (1 + f y)(1 + y) = 0.5 f (1 + y) + 0.5 (1 + f y)
    a, b, c = f, 1.0 + f - 0.5 * f - 0.5 * f, 1.0 - 0.5 * f - 0.5
    y = (-b + math.sqrt(b * b - 4 * a * c)) / (2 * a)
    return np.array([f * y, y])


# --- step -------------------------------------------------------------------


def test_step_zero(bh_growth, bh_single, bh_two, migrant):
    for spec in (bh_growth, bh_single, bh_two, migrant):
        np.testing.assert_array_equal(step(spec, np.zeros(spec.dim)), 0.0)


def test_step_hand_example(bh_growth):
    np.testing.assert_allclose(step(bh_growth, [1.0, 1.0]), [8.0, 0.5], rtol=1e-15)


def test_step_linear_spec_is_matrix(migrant, small_pair, rng):
    s, r = small_pair
    for spec in (migrant, SingleEggSpec(s, r, 0.3), TwoEggSpec(s, r, 0.2, 0.9)):
        A = linearization(spec)
        for x in sampling.log_uniform(rng, (20, spec.dim)):
            np.testing.assert_allclose(step(spec, x), A @ x, rtol=1e-15)


def test_step_paths_agree(bh_single, bh_two, rng):
    for spec in (bh_single, bh_two):
        for x in sampling.log_uniform(rng, (50, spec.dim)):
            np.testing.assert_allclose(step(spec, x), step_matrix(spec, x), rtol=1e-14)
            step(spec, x, check=True)


def test_step_input_errors(bh_growth):
    with pytest.raises(ValueError):
        step(bh_growth, [1.0])
    with pytest.raises(ValueError):
        step(bh_growth, [1.0, -1.0])
    with pytest.raises(ValueError):
        step(bh_growth, [1.0, float("nan")])


def test_iterate_composes(bh_two, rng):
    x = sampling.log_uniform(rng, bh_two.dim)
    np.testing.assert_allclose(iterate(bh_two, x, 3), step(bh_two, step(bh_two, step(bh_two, x))))


# --- simulate ---------------------------------------------------------------


def test_simulate_from_zero(bh_growth):
    traj = simulate(bh_growth, [0.0, 0.0])
    assert traj.converged and traj.steps_taken == 1
    np.testing.assert_array_equal(traj.limit, 0.0)


def test_simulate_growth_limit():
    spec = bh_pair(1.6)
    traj = simulate(spec, [1.0, 1.0])
    assert traj.converged and np.all(traj.limit > 0)
    np.testing.assert_allclose(traj.limit, fixed_point_bh_pair(1.6), rtol=1e-9)


def test_simulate_decline():
    traj = simulate(bh_pair(0.8), [1.0, 1.0], max_steps=2000, extinction_tol=1e-8)
    assert traj.stop_reason == "extinct"
    assert traj.steps_taken <= 2000
    assert np.max(traj.states[-1]) <= 1e-8


def test_simulate_linear_overflow(migrant):
    traj = simulate(migrant, np.ones(3))
    assert traj.stop_reason == "overflow"


def test_trajectory_csv(bh_growth):
    traj = simulate(bh_growth, [1.0, 1.0], max_steps=3)
    lines = traj.to_csv().splitlines()
    assert lines[0] == "step,x1,x2"
    assert len(lines) == 5
    assert lines[2].split(",")[1:] == ["8.0", "0.5"]


def test_trajectory_stride(bh_growth):
    traj = simulate(bh_growth, [1.0, 1.0], max_steps=10, stride=4)
    assert list(traj.steps) == [0, 4, 8, 10]
    assert np.all(traj.states >= 0)


# --- fixed points and trichotomy ----------------------------------------------


def test_fixed_point_extinction(bh_decline):
    rep = classify_trichotomy(bh_decline)
    assert rep.outcome == "extinction" and rep.consistent
    assert len(rep.evidence) >= 12
    assert all(max(e["final"]) <= 1e-8 for e in rep.evidence)


def test_fixed_point_positive_from_random_starts(bh_growth):
    rng = np.random.default_rng(11)
    starts = sampling.log_uniform(rng, (10, 2), 1e-2, 1e2)
    rep = find_fixed_point(bh_growth, starts)
    assert rep.outcome == "positive_fixed_point" and rep.consistent
    np.testing.assert_allclose(rep.q, fixed_point_bh_pair(8.0), rtol=1e-9)
    for e in rep.evidence:
        np.testing.assert_allclose(e["final"], rep.q, rtol=1e-6)
    assert rep.residual <= 1e-9 * (1 + np.max(rep.q))


def test_escape_check_on_growth(bh_growth):
    rep = classify_trichotomy(bh_growth)
    assert rep.escape["escapes"] and rep.escape["monotone_orbit"]
    esc = eigenvector_escape(bh_growth)
    assert esc["min_gap"] > 0


def test_coupled_extinction_when_both_decline():
    mig = isolated((BH(0.5, 1.0), BH(0.4, 1.0)), (0.9,))
    res = isolated((BH(0.3, 2.0), BH(0.5, 1.0)), (1.5,))
    spec = SingleEggSpec(mig, res, 0.6)
    assert r0(spec) < 1
    rep = classify_trichotomy(spec)
    assert rep.outcome == "extinction" and rep.consistent


def test_coupled_positive(bh_single, bh_two):
    for spec in (bh_single, bh_two):
        assert r0(spec) > 1
        rep = classify_trichotomy(spec, seed=5)
        assert rep.outcome == "positive_fixed_point" and rep.consistent
        assert np.all(rep.q > 0)


def test_never_unbounded_for_bh(rng):
    for _ in range(5):
        spec = sampling.with_r0(sampling.random_two_egg(rng, 3, 4, density=True), 3.0)
        assert classify_trichotomy(spec).outcome != "unbounded"


def test_near_threshold_inconclusive():
    spec = sampling.with_r0(bh_pair(1.0), 1.0 + 1e-8)
    rep = find_fixed_point(spec, default_initial_set(spec), max_steps=5000)
    assert rep.outcome == "threshold_inconclusive"


def test_nonconvergence_raises(bh_growth):
    with pytest.raises(ConvergenceError):
        find_fixed_point(bh_growth, [[1.0, 1.0]], max_steps=3)


def test_trichotomy_needs_density(migrant):
    with pytest.raises(ValueError):
        classify_trichotomy(migrant)


def test_threads_do_not_change_result(bh_two):
    a = classify_trichotomy(bh_two, seed=3, threads=1)
    b = classify_trichotomy(bh_two, seed=3, threads=4)
    assert a.to_json() == b.to_json()


def test_initial_set_shape(bh_two):
    X = default_initial_set(bh_two)
    assert X.shape == (3 * bh_two.dim + 3, bh_two.dim)
    assert np.all(X.sum(axis=1) > 0)


# --- bound vector -------------------------------------------------------------


def test_bound_example(bh_growth):
    np.testing.assert_allclose(upper_bound_vector(bh_growth), [8.0, 1.0], rtol=1e-15)
    assert check_bound(bh_growth, 2000).passed


def test_bound_scales_with_c(bh_two):
    def doubled(pop):
        rules = tuple(BevertonHolt(r.b, 2 * r.c) for r in pop.transitions)
        return isolated(rules, pop.fecundities)

    halved = TwoEggSpec(doubled(bh_two.migrant), doubled(bh_two.resident), bh_two.phi_s, bh_two.phi_r)
    np.testing.assert_allclose(upper_bound_vector(halved), upper_bound_vector(bh_two) / 2, rtol=1e-14)
    assert np.all(upper_bound_vector(bh_two) > 0)


def test_bound_requires_bh(migrant):
    with pytest.raises(ValueError):
        upper_bound_vector(migrant)


# --- property checks ------------------------------------------------------------


def test_bh_scalar_sublinearity():
    s = BH(0.5, 1.0).flow
    assert 0.5 * s(1.0) == pytest.approx(0.125)
    assert s(0.5) == pytest.approx(0.5 * 0.5 / 1.5)
    assert 0.5 * s(1.0) < s(0.5)


def test_property_suite_passes(bh_growth, bh_single, bh_two):
    for spec in (bh_growth, bh_single, bh_two):
        assert check_monotone(spec, 1000).passed
        assert check_strong_sublinear(spec, spec.dim, 500).passed
        assert check_eventual_positivity(spec).passed
        assert check_bound(spec, 1000).passed
        assert check_nonnegative(spec, 1000).passed
        assert check_linear_dominance(spec, 1000).passed


def test_sublinear_r1_egg_equality(bh_growth):
    rep = check_strong_sublinear(bh_growth, 1, 500)
    # the egg coordinate is linear so step itself is not strongly sublinear
    assert not rep.passed
    assert rep.details["egg_max_rel_dev"] <= 1e-14


def test_eventual_positivity_last_stage_unit(bh_single):
    e = np.zeros(bh_single.dim)
    e[-1] = 1.0
    assert np.all(iterate(bh_single, e, bh_single.dim) > 0)
    iso = isolated((BH(0.5, 1), BH(0.6, 1), BH(0.4, 2), BH(0.3, 1)), (1, 1, 2))
    e = np.zeros(4)
    e[-1] = 1.0
    assert np.all(iterate(iso, e, 4) > 0)


class Ricker:
    density_dependent = True

    def __init__(self, b, c):
        self.b, self.c = b, c

    def rate(self, x):
        return self.b * np.exp(-self.c * np.asarray(x, dtype=float))

    def flow(self, x):
        x = np.asarray(x, dtype=float)
        return x * self.rate(x)

    @property
    def at_zero(self):
        return self.b


def test_monotone_detects_overcompensation():
    spec = isolated((Ricker(0.9, 1.0), BH(0.5, 1.0)), (2,))
    rep = check_monotone(spec, 2000)
    assert not rep.passed and rep.violation_count > 0
    assert rep.violations[0]["margin"] > 0
    assert rep.verdict == "fail"
