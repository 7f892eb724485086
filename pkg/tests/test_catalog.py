import pytest

from core.catalog import block_names, catalog_block, resolve_block_name
from core.domain import Spin
from core.errors import BadParameter, UnknownBlock
from core.groups import ExplicitPresentation, FactKind, abelianize


def invariants(s):
    return s.e, s.sigma, s.c1sq, s.chi_h


@pytest.mark.parametrize(
    "name, expected",
    [
        ("X(3,1)", (16, -4, 20, 3)),
        ("X_{4,6}", (18, -2, 30, 4)),
        ("X_{5,6}", (21, -1, 39, 5)),
        ("X_{5,7}", (22, -2, 38, 5)),
        ("S", (15, 5, 45, 5)),
        ("S_hat", (16, 4, 44, 5)),
    ],
)
def test_block_invariants(name, expected):
    assert invariants(catalog_block(name)) == expected


def test_X31_surfaces_and_facts():
    x = catalog_block("X(3,1)")
    sigma = x.surface("Sigma6")
    assert (sigma.genus, sigma.self_intersection) == (6, 0)
    assert {f.kind for f in x.facts_for("Sigma6")} == {FactKind.GENERATORS_DIE, FactKind.MERIDIAN_DIES}
    for i in range(1, 5):
        assert x.surface(f"T{i}").self_intersection == -1
        assert x.surface(f"Rbar{i}").is_torus
        assert x.surface(f"V{i}").self_intersection == -2
        assert x.surface(f"Rbar{i}").meets(f"V{i}") == 1
    assert x.surface("Sigma7").genus == 7
    assert x.simply_connected and x.invariants.spin is Spin.NON_SPIN
    assert x.intersections_symmetric()


def test_X_km_with_torus_surgery_is_not_symplectic():
    x = catalog_block("X(k,m)", 3, 2)
    assert not x.invariants.symplectic
    assert invariants(x) == (16, -4, 20, 3)


def test_S_hat_carries_the_square_zero_curve():
    s_hat = catalog_block("S_hat")
    rtilde = s_hat.surface("Rtilde")
    assert (rtilde.genus, rtilde.self_intersection) == (6, 0)
    assert s_hat.surface("Exc1").genus == 0
    assert [f.kind for f in s_hat.facts_for("Rtilde")] == [FactKind.SURJECTIVE_FROM_SURFACE]
    assert s_hat.b1 == 4


def test_parametrized_spellings_agree():
    assert catalog_block("X(k,m)", 3, 1) == catalog_block("X(3,1)")
    assert catalog_block("X_{g,g+2}", 4) == catalog_block("X_{4,6}")
    assert catalog_block("S(n)", 5) == catalog_block("S(5)")


def test_inline_torus_surgery_parameters():
    assert resolve_block_name("Y_2(1/1,1/1)") == ("Y_n(1/p,m/q)", (2, 1, 1, 1))
    y = catalog_block("Y_2(1/1,1/1)")
    assert isinstance(y.pi1, ExplicitPresentation)
    assert (y.e, y.sigma) == (0, 0)
    assert y.invariants.symplectic


def test_Y_n_block():
    y = catalog_block("Y_n", 3)
    assert (y.e, y.sigma, y.b1) == (8, 0, 0)
    assert abelianize(y.pi1.presentation).is_trivial


def test_product_and_torus():
    p = catalog_block("product(g,h)", 2, 3)
    assert (p.e, p.sigma, p.b1) == (8, 0, 10)
    t4 = catalog_block("T4")
    assert (t4.e, t4.b1) == (0, 4)
    assert set(t4.surface_names) == {"T2xpt", "ptxT2"}


def test_unknown_block():
    with pytest.raises(UnknownBlock):
        catalog_block("K3")
    with pytest.raises(UnknownBlock):
        catalog_block("X_{4,9}")


@pytest.mark.parametrize(
    "name, params",
    [("X(k,m)", (0, 1)), ("X(k,m)", (3, 0)), ("X(k,m)", (3,)), ("X(3,1)", (3, 1)), ("Y_n_from_product", (1,))],
)
def test_bad_parameters(name, params):
    with pytest.raises(BadParameter):
        catalog_block(name, *params)


def test_block_names_are_listed():
    names = block_names()
    assert {"S", "S_hat", "X(k,m)", "T4", "Y_n"} <= set(names)


def test_minimality_of_S_is_declared_with_a_citation():
    s = catalog_block("S")
    assert s.invariants.minimal
    entry = s.provenance[-1]
    assert entry.operation == "declare flags minimal=True"
    assert "Bogomolov-Miyaoka-Yau" in entry.citation


@pytest.mark.parametrize("n", [7, 11, 13])
def test_minimality_of_larger_S_n_is_left_undeclared(n):
    s = catalog_block("S(n)", n)
    assert not s.invariants.minimal
    assert s.provenance[-1].operation == "minimal flag not declared"
