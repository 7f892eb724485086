"""
Branched-cover invariants of the complete quadrangle and its relatives.
"""
import math

import pytest
import sympy

from core.covers import (
    CoverSpec,
    Stratum,
    blown_up_plane,
    hirzebruch_tower,
    pairing,
    pardini_K_squared,
    quadrangle_cover_surface,
    quadrangle_spec,
    ramification_curves,
    riemann_hurwitz_genus,
    singular_fiber_budget,
    stratified_euler,
)
from core.domain import Spin, SurfaceTag
from core.errors import BadParameter, BasisMismatch, NonIntegralGenus


@pytest.fixture
def plane():
    return blown_up_plane(4)


def sum_E(form):
    total = form.zero()
    for i in range(4):
        total = total + form.generator(f"E{i}")
    return total


def test_pairing_on_the_blown_up_plane(plane):
    H, E0 = plane.generator("H"), plane.generator("E0")
    assert pairing(H, H, plane) == 1
    assert pairing(H, E0, plane) == 0
    assert pairing(E0, E0, plane) == -1
    assert pairing(plane.zero(), H, plane) == 0


def test_pairing_is_exact(plane):
    D = sympy.Rational(9, 5) * plane.generator("H") - sympy.Rational(3, 5) * sum_E(plane)
    assert pairing(D, D, plane) == sympy.Rational(9, 5)


def test_pairing_rejects_foreign_classes(plane):
    other = blown_up_plane(3)
    with pytest.raises(BasisMismatch):
        pairing(other.generator("H"), other.generator("H"), plane)
    with pytest.raises(BasisMismatch):
        plane.generator("H") + other.generator("H")


def test_divisor_text(plane):
    assert str(plane.generator("H") - plane.generator("E2")) == "1*H + -1*E2"
    assert str(plane.zero()) == "0"


def test_pardini_quadrangle():
    assert pardini_K_squared(quadrangle_spec(5)) == 45
    assert pardini_K_squared(quadrangle_spec(7)) == 125


def test_pardini_trivial_cover_is_K_squared(plane):
    K = -3 * plane.generator("H") + sum_E(plane)
    assert pardini_K_squared(CoverSpec(1, plane, K)) == 5


def test_stratified_euler():
    assert stratified_euler(quadrangle_spec(5)) == 15
    assert stratified_euler(quadrangle_spec(7)) == 43


def test_quadrangle_strata():
    strata = {s.label: (s.euler, s.fiber_cardinality) for s in quadrangle_spec(5).strata}
    assert strata == {"complement": (2, 25), "branch curves": (-10, 5), "nodes": (15, 1)}


def test_stratified_euler_trivial_cover(plane):
    K = -3 * plane.generator("H") + sum_E(plane)
    assert stratified_euler(CoverSpec(1, plane, K, strata=[Stratum("Y", 7, 1)])) == 7


def test_cover_spec_validation(plane):
    K = -3 * plane.generator("H") + sum_E(plane)
    with pytest.raises(BadParameter):
        CoverSpec(0, plane, K)
    with pytest.raises(BadParameter):
        CoverSpec(4, plane, K, strata=[Stratum("Y", 7, 3)])


@pytest.mark.parametrize(
    "degree, base_genus, points, genus",
    [(5, 0, [5, 5, 5, 5], 4), (1, 3, [], 3), (5, 1, [], 1), (7, 0, [7] * 4, 6)],
)
def test_riemann_hurwitz(degree, base_genus, points, genus):
    assert riemann_hurwitz_genus(degree, base_genus, points) == genus


def test_riemann_hurwitz_rejects_odd_values():
    with pytest.raises(NonIntegralGenus):
        riemann_hurwitz_genus(2, 0, [2])
    with pytest.raises(NonIntegralGenus):
        riemann_hurwitz_genus(2, 0, [])


def test_singular_fiber_budget():
    assert singular_fiber_budget(15, -6, -2) == 3
    assert singular_fiber_budget(43, -10, -4) == 3
    assert singular_fiber_budget(12, -6, -2) == 0


def test_quadrangle_surface_n5():
    S = quadrangle_cover_surface(5)
    v = S.invariants
    assert (v.c1_sq, v.e, v.sigma, v.chi_h, S.q) == (45, 15, 5, 5, 2)
    assert (S.fibration.fiber_genus, S.fibration.base_genus, S.fibration.singular_fibers) == (4, 2, 3)
    assert v.b1 == 4
    assert v.spin is Spin.NON_SPIN
    assert v.symplectic and not v.minimal


def test_quadrangle_surface_n7():
    S = quadrangle_cover_surface(7)
    assert (S.c1_sq, S.e, S.invariants.sigma, S.q) == (125, 43, 13, 3)
    assert not S.invariants.minimal


@pytest.mark.parametrize("n", [n for n in range(5, 36) if math.gcd(n, 6) == 1])
def test_quadrangle_closed_forms(n):
    S = quadrangle_cover_surface(n)
    assert S.c1_sq == 5 * (n - 2) ** 2
    assert S.e == 2 * n * n - 10 * n + 15
    assert S.invariants.sigma * 3 == n * n - 10
    assert S.fibration.singular_fibers == 3
    assert (S.q, S.fibration.fiber_genus) == ((n - 1) // 2, n - 1)


@pytest.mark.parametrize("n", [1, 3, 6, 9])
def test_quadrangle_surface_needs_n_coprime_to_six(n):
    with pytest.raises(BadParameter):
        quadrangle_cover_surface(n)


def test_ramification_curves_n5():
    curves = ramification_curves(quadrangle_spec(5))
    assert [c.name for c in curves] == [f"R{i}" for i in range(1, 11)]
    assert all((c.genus, c.self_intersection) == (2, -1) for c in curves)
    assert all(c.tags == {SurfaceTag.COMPLEX, SurfaceTag.SYMPLECTIC} for c in curves)
    by_name = {c.name: c for c in curves}
    # L'3 meets E0 and E3; E0 and E3 are disjoint
    assert by_name["R3"].meets("R7") == 1
    assert by_name["R3"].meets("R10") == 1
    assert by_name["R7"].meets("R10") == 0


@pytest.mark.parametrize("n", [5, 7, 11])
def test_ramification_curve_genus(n):
    curves = ramification_curves(quadrangle_spec(n))
    assert {c.genus for c in curves} == {(n - 1) // 2}


def test_ramification_curves_need_one_name_each():
    with pytest.raises(BadParameter):
        ramification_curves(quadrangle_spec(5), ["R"])


@pytest.mark.parametrize("m, expected", [(2, (45, 15)), (3, (225, 75)), (4, (1125, 375))])
def test_hirzebruch_tower(m, expected):
    assert hirzebruch_tower(m) == expected


def test_hirzebruch_tower_starts_at_two():
    with pytest.raises(BadParameter):
        hirzebruch_tower(1)
