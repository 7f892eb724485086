"""
Blow-ups, resolutions, symplectic sums and torus surgeries on tracked states.
"""
from dataclasses import replace

import pytest

from core.catalog import catalog_block
from core.constructions import (
    blow_up,
    complement_facts,
    declare_fact,
    declare_flags,
    internal_sum,
    knot_label,
    knot_surgery,
    luttinger,
    rename_surface,
    resolve,
    symplectic_sum,
)
from core.domain import BOUNDARY_TOUCHING, LuttingerSpec, Spin
from core.errors import (
    BadParameter,
    DisconnectedConfiguration,
    GenusMismatch,
    MissingComplementFact,
    NormalBundleMismatch,
    NotATorus,
    UnknownSurface,
)
from core.groups import TRIVIAL_GROUP, DeclaredFacts, FactKind, Pi1Fact


@pytest.fixture(scope="module")
def S():
    return catalog_block("S")


@pytest.fixture(scope="module")
def S_hat():
    return catalog_block("S_hat")


@pytest.fixture(scope="module")
def Z3(S_hat):
    return symplectic_sum(S_hat, "Rtilde", catalog_block("X(3,1)"), "Sigma6")


# --- blow-up ---

def test_blow_up_point(S):
    blown = blow_up(S)
    assert (blown.e, blown.sigma, blown.c1sq) == (16, 4, 44)
    assert blown.invariants.spin is Spin.NON_SPIN
    assert not blown.invariants.minimal
    exc = blown.surface("Exc1")
    assert (exc.genus, exc.self_intersection, exc.intersections) == (0, -1, ())


def test_blow_up_on_surface_lowers_its_square(S):
    blown = blow_up(S, on_surface="R1")
    assert blown.surface("R1").self_intersection == -2
    assert blown.surface("R1").meets("Exc1") == 1
    assert blown.surface("Exc1").meets("R1") == 1
    assert blown.intersections_symmetric()


def test_blow_up_names_are_fresh(S):
    twice = blow_up(blow_up(S))
    assert {"Exc1", "Exc2"} <= set(twice.surface_names)


def test_blow_up_rename(S):
    blown = blow_up(S, on_surface="R1", rename="R1~")
    assert blown.has_surface("R1~") and not blown.has_surface("R1")
    assert blown.surface("Exc1").meets("R1~") == 1


def test_blow_up_unknown_surface(S):
    with pytest.raises(UnknownSurface):
        blow_up(S, on_surface="nope")


# --- resolve ---

def test_resolve_first_configuration(S):
    r = resolve(S, ["R3", "R7", "R10"], into="R")
    R = r.surface("R")
    assert (R.genus, R.self_intersection) == (6, 1)
    assert not any(r.has_surface(n) for n in ("R3", "R7", "R10"))
    assert r.intersections_symmetric()


def test_resolve_second_configuration(S):
    R = resolve(S, ["R10", "R4", "R9"]).surface("R10+R4+R9")
    assert (R.genus, R.self_intersection) == (6, 1)


def test_resolve_blown_up_to_square_zero(S_hat):
    Rtilde = S_hat.surface("Rtilde")
    assert (Rtilde.genus, Rtilde.self_intersection) == (6, 0)
    assert S_hat.surface("Exc1").meets("Rtilde") == 1
    assert (S_hat.e, S_hat.sigma, S_hat.c1sq, S_hat.chi_h) == (16, 4, 44, 5)


def test_resolve_genus_two_and_genus_four():
    x = resolve(catalog_block("X_{4,6}"), ["Sigma2", "S1"], into="Sigma6'")
    s = x.surface("Sigma6'")
    assert (s.genus, s.self_intersection) == (6, 1)
    assert x.surface("S2").meets("Sigma6'") == 1


def test_resolve_two_tori():
    s = resolve(catalog_block("T4"), ["T2xpt", "ptxT2"]).surface("T2xpt+ptxT2")
    assert (s.genus, s.self_intersection) == (2, 2)


def test_resolve_needs_a_connected_configuration(S):
    with pytest.raises(DisconnectedConfiguration):
        resolve(S, ["R7", "R10"])


def test_resolve_rejects_bad_input(S):
    with pytest.raises(BadParameter):
        resolve(S, [])
    with pytest.raises(BadParameter):
        resolve(S, ["R3", "R3"])
    with pytest.raises(UnknownSurface):
        resolve(S, ["R3", "R99"])


def test_twice_blown_up_square_two_curve():
    x = resolve(catalog_block("X_{2,4}"), ["Sigma2", "S1", "S2"], into="Sigma6'")
    assert x.surface("Sigma6'").self_intersection == 2
    x = blow_up(blow_up(x, on_surface="Sigma6'"), on_surface="Sigma6'")
    assert x.surface("Sigma6'").self_intersection == 0


# --- ledger operations ---

def test_rename_surface_moves_facts_and_partners(S_hat):
    renamed = rename_surface(S_hat, "Rtilde", "F")
    assert renamed.surface("Exc1").meets("F") == 1
    assert {f.surface for f in renamed.facts} == {"F"}
    with pytest.raises(BadParameter):
        rename_surface(S_hat, "Rtilde", "Exc1")
    with pytest.raises(UnknownSurface):
        rename_surface(S_hat, "nope", "F")


def test_internal_sum_records_the_surface():
    x = internal_sum(catalog_block("X_{5,7}"), "Sigma6", 6, 0, "glued from punctured pieces", meets={"S1": 1})
    s = x.surface("Sigma6")
    assert (s.genus, s.self_intersection, s.notes) == (6, 0, ("internal sum",))
    assert x.surface("S1").meets("Sigma6") == 1
    assert x.provenance[-1].citation == "glued from punctured pieces"
    assert (x.e, x.sigma) == (22, -2)


def test_declare_fact_and_flags(S):
    fact = Pi1Fact(FactKind.MERIDIAN_DIES, "cited", "R1")
    assert declare_fact(S, fact).facts_for("R1") == (fact,)
    with pytest.raises(UnknownSurface):
        declare_fact(S, Pi1Fact(FactKind.MERIDIAN_DIES, "cited", "nope"))
    flagged = declare_flags(S, "minimal by a cited theorem", minimal=False)
    assert not flagged.invariants.minimal
    with pytest.raises(BadParameter):
        declare_flags(S, "")


def test_sphere_section_gives_complement_facts(S_hat):
    kinds = {f.kind for f in complement_facts(S_hat, "Rtilde")}
    assert kinds == {FactKind.SURJECTIVE_FROM_SURFACE, FactKind.MERIDIAN_DIES}

    x = blow_up(catalog_block("X_{4,6}"), on_surface="Sigma2")
    kinds = {f.kind for f in complement_facts(x, "Sigma2")}
    assert kinds == set(FactKind)


# --- symplectic sum ---

def test_Z3_sum(Z3):
    assert (Z3.e, Z3.sigma, Z3.c1sq, Z3.chi_h) == (52, 0, 104, 13)
    assert Z3.pi1 == TRIVIAL_GROUP
    assert Z3.simply_connected and Z3.b1 == 0
    assert Z3.invariants.spin is Spin.NON_SPIN
    assert Z3.invariants.symplectic and not Z3.invariants.minimal
    assert Z3.intersections_symmetric()


def test_sum_marks_surfaces_touching_the_boundary(Z3):
    assert BOUNDARY_TOUCHING in Z3.surface("Exc1").notes
    assert BOUNDARY_TOUCHING in Z3.surface("T1").notes
    assert BOUNDARY_TOUCHING not in Z3.surface("R8").notes


def test_sum_keeps_rim_tori_and_their_facts(Z3):
    assert Z3.surface("Rbar1").is_torus
    assert FactKind.MERIDIAN_DIES in {f.kind for f in Z3.facts_for("Rbar1")}


def test_M35_sum(S_hat):
    m35 = symplectic_sum(S_hat, "Rtilde", catalog_block("X_{5,6}"), "Sigma6")
    assert (m35.e, m35.sigma, m35.c1sq, m35.chi_h) == (57, 3, 123, 15)


def test_sum_is_symmetric(S_hat):
    x = catalog_block("X(3,1)")
    ab = symplectic_sum(S_hat, "Rtilde", x, "Sigma6")
    ba = symplectic_sum(x, "Sigma6", S_hat, "Rtilde")
    assert ab.invariants == ba.invariants
    assert set(ab.surface_names) == set(ba.surface_names)


def test_genus_one_sum_is_additive():
    t4 = catalog_block("T4")
    summed = symplectic_sum(t4, "T2xpt", t4, "T2xpt")
    assert (summed.e, summed.sigma) == (t4.e + t4.e, 0)
    assert summed.has_surface("ptxT2'")


def test_sum_renames_clashes_on_the_second_side(S_hat):
    s = symplectic_sum(S_hat, "Rtilde", S_hat, "Rtilde")
    assert s.has_surface("R1") and s.has_surface("R1'")
    assert s.surface("R1'").meets("R2'") == s.surface("R1").meets("R2")


def test_sum_without_facts_leaves_pi1_undetermined():
    t4 = catalog_block("T4")
    s = symplectic_sum(t4, "T2xpt", t4, "T2xpt")
    assert isinstance(s.pi1, DeclaredFacts) and s.pi1.undetermined
    assert s.b1 == 8
    assert not s.simply_connected
    assert any("recorded without a group computation" in str(p) for p in s.provenance)


def test_sum_mismatches(S_hat):
    with pytest.raises(GenusMismatch):
        symplectic_sum(S_hat, "Rtilde", catalog_block("X_{5,6}"), "Sigma2")
    with pytest.raises(NormalBundleMismatch):
        symplectic_sum(S_hat, "R1", S_hat, "R2")


# --- torus surgeries ---

def test_luttinger_keeps_e_and_sigma():
    t4 = catalog_block("T4")
    out = luttinger(t4, LuttingerSpec("T2xpt", "a1", (1, 1)))
    assert (out.e, out.sigma) == (t4.e, t4.sigma)
    assert isinstance(out.pi1, DeclaredFacts) and out.pi1.undetermined


def test_luttinger_zero_coefficient_kills_the_meridian():
    t4 = catalog_block("T4")
    p = t4.pi1.presentation
    spec = LuttingerSpec("T2xpt", "a1", (0, 1), meridian=p.gen("c1"), push_off=p.gen("a1"))
    out = luttinger(t4, spec)
    assert out.pi1.presentation.relators[-1] == p.gen("c1")
    assert out.pi1.presentation.generators == p.generators
    assert out.b1 == 3


def test_luttinger_one_over_m():
    t4 = catalog_block("T4")
    p = t4.pi1.presentation
    spec = LuttingerSpec("T2xpt", "a1", (2, 1), -1, meridian=p.gen("c1"), push_off=p.gen("a1"))
    out = luttinger(t4, spec)
    assert out.pi1.presentation.relators[-1] == p.gen("c1") * p.gen("a1", -2)


def test_luttinger_needs_a_torus(S):
    with pytest.raises(NotATorus):
        luttinger(S, LuttingerSpec("R1", "a", (1, 1)))


def test_Y_n_from_product_keeps_euler_characteristic():
    for n in (2, 3):
        y = catalog_block("Y_n_from_product", n)
        assert (y.e, y.sigma) == (4 * n - 4, 0)
        assert y.b1 == 0


def test_knot_surgery_changes_only_provenance(Z3):
    out = knot_surgery(Z3, "Rbar1", 3)
    assert out.invariants == Z3.invariants
    assert out.provenance != Z3.provenance
    assert replace(knot_surgery(Z3, "Rbar1", 0), provenance=Z3.provenance) == Z3


def test_knot_surgery_labels_differ(Z3):
    a, b = knot_surgery(Z3, "Rbar1", 1), knot_surgery(Z3, "Rbar1", 2)
    assert a.invariants == b.invariants
    assert a.provenance != b.provenance


def test_knot_surgery_with_a_non_fibered_knot(Z3):
    out = knot_surgery(Z3, "Rbar1", -3)
    assert out.invariants == Z3.invariants
    entry = out.provenance[-1]
    assert "twist knot K3" in entry.operation
    assert "non-fibered" in entry.citation


@pytest.mark.parametrize("family_index", [-5, -3, -2, -1, 0, 1, 3, 7])
def test_knot_surgery_keeps_the_invariant_vector(Z3, family_index):
    out = knot_surgery(Z3, "Rbar1", family_index)
    assert out.invariants == Z3.invariants
    assert out.pi1 == Z3.pi1
    assert out.surfaces == Z3.surfaces
    retained = "symplectic flag retained" in out.provenance[-1].citation
    assert retained is (family_index == 0)


def test_knot_labels():
    assert knot_label(0) == ("unknot", True)
    assert knot_label(1) == ("T(2,3)", True)
    assert knot_label(-2) == ("twist knot K2", True)
    assert knot_label(-3)[1] is False


def test_knot_surgery_needs_complement_facts():
    t4 = catalog_block("T4")
    with pytest.raises(MissingComplementFact):
        knot_surgery(t4, "T2xpt", 1)
