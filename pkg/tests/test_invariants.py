"""
Derivation, consistency checking and homeomorphism typing of invariant vectors.
"""
import pytest
from hypothesis import given, strategies as st

from core.domain import NON_INTEGRAL, Spin
from core.errors import PreconditionViolated
from core.invariants import HomeomorphismType, consistency_check, derive, homeomorphism_type


def test_derive_z3_vector():
    v = derive(52, 0, 0)
    assert v.chi_h == 13
    assert v.c1_sq == 104
    assert (v.b2_plus, v.b2_minus) == (25, 25)


def test_derive_quadrangle_surface():
    v = derive(15, 5, 4)
    assert v.chi_h == 5
    assert v.c1_sq == 45


def test_derive_marks_non_integral_chi():
    v = derive(2, 0, 0)
    assert v.b2 == 0
    assert v.chi_h is NON_INTEGRAL
    assert not v.chi_h


def test_derive_accepts_degenerate_inputs():
    v = derive(0, 0, 0)
    assert v.b2 == -2
    assert not v.realizable


def test_consistency_pass_and_fail():
    assert consistency_check(derive(52, 0), 104).passed
    assert consistency_check(derive(0, 0), 0).passed

    report = consistency_check(derive(12, -4), 16)
    assert not report.passed
    (violation,) = report.violations
    assert (violation.claimed, violation.derived) == (16, 12)
    assert str(report).startswith("FAIL")


def test_consistency_checks_chi():
    assert consistency_check(derive(52, 0), 104, 13).passed
    report = consistency_check(derive(50, 2), 106, 14)
    assert not report.passed


@pytest.mark.parametrize(
    "e, sigma, expected",
    [(55, 1, (27, 26)), (4, 0, (1, 1)), (58, 2, (29, 27)), (52, 0, (25, 25))],
)
def test_homeomorphism_type(e, sigma, expected):
    v = derive(e, sigma, 0, Spin.NON_SPIN, simply_connected=True)
    t = homeomorphism_type(v)
    assert (t.a, t.b) == expected


def test_homeomorphism_type_preconditions():
    with pytest.raises(PreconditionViolated):
        homeomorphism_type(derive(52, 0, 0, Spin.NON_SPIN, simply_connected=False))
    with pytest.raises(PreconditionViolated):
        homeomorphism_type(derive(52, 0, 0, Spin.SPIN, simply_connected=True))
    with pytest.raises(PreconditionViolated):
        homeomorphism_type(derive(52, 0, 0, Spin.UNKNOWN, simply_connected=True))
    with pytest.raises(PreconditionViolated):
        homeomorphism_type(derive(2, 1, 0, Spin.NON_SPIN, simply_connected=True))


def test_homeomorphism_type_str():
    assert str(HomeomorphismType(25, 25)) == "25CP2 # 25(-CP2)"


@given(st.integers(-10**6, 10**6), st.integers(-10**6, 10**6), st.integers(0, 50))
def test_c1_sq_and_noether(e, sigma, b1):
    v = derive(e, sigma, b1)
    assert v.c1_sq == 2 * e + 3 * sigma
    if v.chi_h is not NON_INTEGRAL:
        assert 12 * v.chi_h - v.c1_sq == e


@given(st.integers(1, 100), st.integers(1, 100))
def test_homeomorphism_type_round_trip(a, b):
    v = derive(2 + a + b, a - b, 0, Spin.NON_SPIN, simply_connected=True)
    assert homeomorphism_type(v) == HomeomorphismType(a, b)


@given(st.integers(), st.integers())
def test_derive_is_deterministic(e, sigma):
    assert derive(e, sigma) == derive(e, sigma)
