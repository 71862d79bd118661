from __future__ import annotations

import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from partmig import sampling
from partmig.errors import InvalidSpecError, SpecFormatError
from partmig.model import (
    Constant,
    SingleEggSpec,
    TwoEggSpec,
    assemble,
    assemble_isolated,
    assemble_single_egg,
    assemble_two_egg,
    canonical_json,
    egg_rows,
    is_density_dependent,
    linearization,
    load_spec,
    require_valid,
    spec_from_dict,
    spec_to_dict,
    validate,
)

from conftest import BH, isolated


# --- validation -------------------------------------------------------------


def test_valid_two_stage():
    assert validate(isolated((0.5, 0.5), (2,))).ok


def test_zero_transition_breaks_irreducibility():
    report = validate(isolated((0.0, 0.5), (2,)))
    assert not report.ok
    assert any(v.index == 1 and "irreducib" in v.message for v in report.violations)


def test_terminal_survival_one_rejected():
    report = validate(isolated((0.5, 1.0), (2,)))
    assert not report.ok
    assert any(v.index == 2 and "singular" in v.message for v in report.violations)


def test_terminal_survival_zero_allowed():
    assert validate(isolated((0.5, 0.0), (2,))).ok


@pytest.mark.parametrize(
    "spec, fragment",
    [
        (isolated((0.5,), ()), "at least 2"),
        (isolated((0.5, 0.5), (1, 2)), "fecundities"),
        (isolated((0.5, 0.5, 0.5), (-1, 2)), ">= 0"),
        (isolated((0.5, 0.5), (0,)), "f_n"),
        (isolated((1.5, 0.5), (2,)), "outside"),
        (isolated((BH(0.0, 1.0), BH(0.5, 1.0)), (2,)), "b="),
        (isolated((BH(0.5, 0.0), BH(0.5, 1.0)), (2,)), "c="),
    ],
)
def test_violations_reported(spec, fragment):
    report = validate(spec)
    assert not report.ok
    assert any(fragment in v.message for v in report.violations)


def test_validation_collects_all_problems():
    report = validate(isolated((0.0, 1.0), (0,)))
    assert len(report.violations) == 3


def test_phi_domains(small_pair):
    s, r = small_pair
    assert validate(SingleEggSpec(s, r, 0.3)).ok
    for phi in (0.0, 1.0, -0.1):
        assert not validate(SingleEggSpec(s, r, phi)).ok
    assert validate(TwoEggSpec(s, r, 0.0, 1.0)).ok
    assert not validate(TwoEggSpec(s, r, 1.2, 0.5)).ok


def test_require_valid_raises():
    with pytest.raises(InvalidSpecError):
        require_valid(isolated((0.0, 0.5), (2,)))


class Ricker:
    """``t(x) = b exp(-c x)``: the flow falls for ``x > 1/c``."""

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


def test_nonmonotone_rule_family_flagged():
    report = validate(isolated((Ricker(0.5, 1.0), BH(0.5, 1.0)), (2,)))
    assert any("flow" in v.message for v in report.violations)


# --- assembly ---------------------------------------------------------------


def test_isolated_assembly_constant():
    spec = isolated((0.5, 0.5), (2,))
    A = assemble_isolated(spec, np.array([3.0, 7.0]))
    np.testing.assert_array_equal(A, [[0, 2], [0.5, 0.5]])


def test_isolated_assembly_bh_entry():
    spec = isolated((BH(0.5, 1.0), Constant(0.0)), (2,))
    A = assemble_isolated(spec, np.array([1.0, 0.0]))
    assert A[1, 0] == 0.25


def test_assembly_at_zero_is_linearization(bh_single, bh_two, bh_growth):
    for spec in (bh_single, bh_two, bh_growth):
        np.testing.assert_array_equal(assemble(spec, np.zeros(spec.dim)), linearization(spec))
    A0 = linearization(bh_growth)
    np.testing.assert_array_equal(A0, [[0, 8], [0.5, 0.5]])


def test_single_egg_example(small_pair):
    s, r = small_pair
    A = assemble_single_egg(SingleEggSpec(s, r, 0.5), np.zeros(3))
    np.testing.assert_allclose(A, [[0, 2, 2], [0.25, 0.5, 0], [0.125, 0, 0.2]], rtol=0, atol=0)


def test_single_egg_column_sum_with_equal_first_transition():
    s = isolated((0.6, 0.3, 0.1), (1, 2))
    r = isolated((0.6, 0.2), (4,))
    for phi in (0.1, 0.5, 0.9):
        A = assemble(SingleEggSpec(s, r, phi))
        assert A[1, 0] + A[3, 0] == pytest.approx(0.6, abs=1e-15)


def test_two_egg_example(small_pair):
    s, r = small_pair
    A = assemble_two_egg(TwoEggSpec(s, r, 0.5, 0.5), np.zeros(4))
    expected = np.array([
        [0, 1, 0, 1],
        [0.5, 0.5, 0, 0],
        [0, 1, 0, 1],
        [0, 0, 0.25, 0.2],
    ])
    np.testing.assert_array_equal(A, expected)


def test_two_egg_block_diagonal_at_full_retention(small_pair):
    s, r = small_pair
    A = assemble(TwoEggSpec(s, r, 1.0, 1.0))
    np.testing.assert_array_equal(A[:2, 2:], 0)
    np.testing.assert_array_equal(A[2:, :2], 0)
    np.testing.assert_array_equal(A[:2, :2], assemble(s))
    np.testing.assert_array_equal(A[2:, 2:], assemble(r))


def test_two_egg_resident_chain_uses_source_coordinate(bh_two):
    # transition into resident row n+j+1 is evaluated at x_{n+j}
    x = np.arange(1.0, bh_two.dim + 1)
    A = assemble(bh_two, x)
    n = bh_two.migrant.n
    for j, rule in enumerate(bh_two.resident.transitions[:-1]):
        assert A[n + j + 1, n + j] == pytest.approx(rule.rate(x[n + j]), rel=1e-15)


def test_dimension_mismatch(small_pair):
    s, r = small_pair
    with pytest.raises(ValueError):
        assemble(SingleEggSpec(s, r, 0.5), np.zeros(4))


def test_egg_rows(small_pair, migrant):
    s, r = small_pair
    assert egg_rows(migrant) == [0]
    assert egg_rows(SingleEggSpec(s, r, 0.5)) == [0]
    assert egg_rows(TwoEggSpec(s, r, 0.5, 0.5)) == [0, 2]


def test_single_egg_column_structure(bh_single):
    n = bh_single.migrant.n
    x = np.full(bh_single.dim, 0.7)
    A = assemble(bh_single, x)
    assert set(np.flatnonzero(A[:, 0])) == {1, n}
    assert A[1, 0] == pytest.approx(bh_single.phi * bh_single.migrant.transitions[0].rate(0.7))
    assert A[n, 0] == pytest.approx((1 - bh_single.phi) * bh_single.resident.transitions[0].rate(0.7))


_kind = st.sampled_from(["isolated", "single", "two"])


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), kind=_kind, density=st.booleans())
def test_assembly_invariants(seed, kind, density):
    rng = np.random.default_rng(seed)
    n, m = rng.integers(2, 8, size=2)
    spec = {
        "isolated": lambda: sampling.random_isolated(rng, n, density),
        "single": lambda: sampling.random_single_egg(rng, n, m, density),
        "two": lambda: sampling.random_two_egg(rng, n, m, density),
    }[kind]()
    assert validate(spec).ok
    A0 = linearization(spec)
    for x in sampling.log_uniform(rng, (5, spec.dim)):
        A = assemble(spec, x)
        assert np.all(A >= 0)
        assert np.all(A <= A0)
        if not density:
            np.testing.assert_array_equal(A, A0)


# --- JSON -------------------------------------------------------------------


def test_json_round_trip(bh_two, migrant, small_pair):
    for spec in (bh_two, migrant, SingleEggSpec(*small_pair, 0.25)):
        again = spec_from_dict(json.loads(canonical_json(spec)))
        assert again == spec


def test_resident_key_for_isolated():
    spec = spec_from_dict({
        "kind": "isolated",
        "resident": {"transitions": [{"const": 0.25}, {"const": 0.2}], "fecundities": [2]},
    })
    assert spec == isolated((0.25, 0.2), (2,))


@pytest.mark.parametrize(
    "doc",
    [
        {"kind": "isolated", "migrant": {"transitions": [], "fecundities": []}, "extra": 1},
        {"kind": "bogus"},
        {"kind": "isolated"},
        {"kind": "isolated", "migrant": {"transitions": [{"const": 0.5}], "fecundities": [], "x": 0}},
        {"kind": "isolated", "migrant": {"transitions": [{"ricker": 1}], "fecundities": []}},
        {"kind": "isolated", "migrant": {"transitions": [{"const": "a"}], "fecundities": []}},
        {"kind": "isolated", "migrant": {"transitions": [{"beverton_holt": {"b": 1}}], "fecundities": []}},
        {"kind": "single_egg", "migrant": {"transitions": [], "fecundities": []},
         "resident": {"transitions": [], "fecundities": []}},
    ],
)
def test_strict_parsing(doc):
    with pytest.raises(SpecFormatError):
        spec_from_dict(doc)


def test_load_spec(tmp_path, migrant):
    p = tmp_path / "m.json"
    p.write_text(json.dumps(spec_to_dict(migrant)))
    assert load_spec(p) == migrant


def test_density_flag(migrant, bh_single):
    assert not is_density_dependent(migrant)
    assert is_density_dependent(bh_single)
