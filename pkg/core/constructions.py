"""
Manifold-building operations on ManifoldState.

Every operation returns a new state; inputs are never mutated. Surfaces are
tracked in a ledger of genus, square and pairwise counts only.
"""
import logging
from dataclasses import replace
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import networkx as nx

from core.domain import (
    BOUNDARY_TOUCHING,
    LuttingerSpec,
    ManifoldState,
    ProvenanceEntry,
    Spin,
    SurfaceTag,
    TrackedSurface,
)
from core.errors import (
    BadParameter,
    DisconnectedConfiguration,
    GenusMismatch,
    MissingComplementFact,
    NormalBundleMismatch,
    NotATorus,
)
from core.groups import (
    TRIVIAL_GROUP,
    DeclaredFacts,
    ExplicitPresentation,
    FactKind,
    Pi1Datum,
    Pi1Fact,
    abelianize,
    is_certified_trivial,
    luttinger_quotient,
    van_kampen_sum,
)

logger = logging.getLogger(__name__)

SUM_CITATION = "e(X1)+e(X2)+4(g-1), c1^2(X1)+c1^2(X2)+8(g-1)"


def _fresh_exceptional_name(s: ManifoldState) -> str:
    k = 1
    while s.has_surface(f"Exc{k}"):
        k += 1
    return f"Exc{k}"


def _retarget(surface: TrackedSurface, mapping: Mapping[str, str]) -> TrackedSurface:
    """Renames intersection partners according to mapping."""
    counts: Dict[str, int] = {}
    for other, count in surface.intersections:
        key = mapping.get(other, other)
        counts[key] = counts.get(key, 0) + count
    return surface.evolve(name=mapping.get(surface.name, surface.name), intersections=counts)


def _drop_partners(surface: TrackedSurface, names: Iterable[str]) -> TrackedSurface:
    names = set(names)
    return surface.evolve(intersections={k: v for k, v in surface.intersections if k not in names})


def _rename_facts(facts: Iterable[Pi1Fact], mapping: Mapping[str, str]) -> Tuple[Pi1Fact, ...]:
    return tuple(
        replace(f, surface=mapping.get(f.surface, f.surface)) if f.surface is not None else f
        for f in facts
    )


# === LEDGER OPERATIONS ===

def rename_surface(s: ManifoldState, old: str, new: str) -> ManifoldState:
    s.surface(old)
    if old == new:
        return s
    if s.has_surface(new):
        raise BadParameter(f"a surface named {new!r} already exists")
    mapping = {old: new}
    return s.evolve(
        ProvenanceEntry(f"rename {old} -> {new}"),
        surfaces=tuple(_retarget(x, mapping) for x in s.surfaces),
        facts=_rename_facts(s.facts, mapping),
    )


def internal_sum(
    s: ManifoldState,
    name: str,
    genus: int,
    square: int,
    citation: str,
    meets: Union[Mapping[str, int], Sequence[Tuple[str, int]]] = (),
    tags: Iterable[SurfaceTag] = (SurfaceTag.SYMPLECTIC,),
) -> ManifoldState:
    """Records a surface glued from punctured pieces inside one manifold."""
    if s.has_surface(name):
        raise BadParameter(f"a surface named {name!r} already exists")
    meets = dict(meets)
    for other in meets:
        s.surface(other)
    new = TrackedSurface(name, genus, square, frozenset(tags), meets, notes=("internal sum",))
    others = tuple(
        x.evolve(intersections={**x.intersection_map, name: meets[x.name]}) if x.name in meets else x
        for x in s.surfaces
    )
    return s.evolve(
        ProvenanceEntry(f"internal sum {name} (genus {genus}, square {square})", citation),
        surfaces=others + (new,),
    )


def declare_fact(s: ManifoldState, fact: Pi1Fact) -> ManifoldState:
    if fact.surface is not None:
        s.surface(fact.surface)
    target = fact.surface or "manifold"
    return s.evolve(
        ProvenanceEntry(f"declare {fact.kind.value} for {target}", fact.citation),
        facts=s.facts + (fact,),
    )


def declare_flags(
    s: ManifoldState,
    citation: str,
    minimal: Optional[bool] = None,
    symplectic: Optional[bool] = None,
) -> ManifoldState:
    if not citation or not citation.strip():
        raise BadParameter("declared flags require a citation")
    changes = {}
    if minimal is not None:
        changes["minimal"] = minimal
    if symplectic is not None:
        changes["symplectic"] = symplectic
    label = ", ".join(f"{k}={v}" for k, v in changes.items()) or "no change"
    return s.evolve(
        ProvenanceEntry(f"declare flags {label}", citation),
        invariants=replace(s.invariants, **changes),
    )


# === BLOW-UP AND RESOLUTION ===

def blow_up(s: ManifoldState, on_surface: Optional[str] = None, rename: Optional[str] = None) -> ManifoldState:
    """Blows up a point, on the named surface if one is given."""
    if on_surface is not None:
        s.surface(on_surface)
    exc = _fresh_exceptional_name(s)
    inv = s.invariants
    invariants = replace(inv, e=inv.e + 1, sigma=inv.sigma - 1, spin=Spin.NON_SPIN, minimal=False)
    tags = frozenset({SurfaceTag.SYMPLECTIC}) if inv.symplectic else frozenset()

    surfaces: List[TrackedSurface] = []
    for x in s.surfaces:
        if x.name == on_surface:
            x = x.evolve(
                self_intersection=x.self_intersection - 1,
                intersections={**x.intersection_map, exc: 1},
            )
        surfaces.append(x)
    surfaces.append(TrackedSurface(exc, 0, -1, tags, {on_surface: 1} if on_surface else {}))

    where = f" on {on_surface}" if on_surface else ""
    logger.debug("blow up%s, exceptional sphere %s", where, exc)
    out = s.evolve(ProvenanceEntry(f"blow up{where}"), invariants=invariants, surfaces=tuple(surfaces))
    if on_surface is not None and rename:
        out = rename_surface(out, on_surface, rename)
    return out


def resolve(s: ManifoldState, names: Sequence[str], into: Optional[str] = None) -> ManifoldState:
    """Replaces a connected configuration of transverse surfaces by their smoothing."""
    names = list(names)
    if not names:
        raise BadParameter("resolve needs at least one surface")
    if len(set(names)) != len(names):
        raise BadParameter(f"duplicate surfaces in {names}")
    parts = [s.surface(n) for n in names]

    graph = nx.Graph()
    graph.add_nodes_from(names)
    for i, a in enumerate(parts):
        for b in parts[i + 1:]:
            if a.meets(b.name):
                graph.add_edge(a.name, b.name)
    if not nx.is_connected(graph):
        raise DisconnectedConfiguration(f"surfaces {names} do not form a connected configuration")

    nodes = sum(a.meets(b.name) for i, a in enumerate(parts) for b in parts[i + 1:])
    genus = sum(p.genus for p in parts) + nodes - len(parts) + 1
    square = sum(p.self_intersection for p in parts) + 2 * nodes
    name = into or "+".join(names)
    if name not in names and s.has_surface(name):
        raise BadParameter(f"a surface named {name!r} already exists")

    outside: Dict[str, int] = {}
    for p in parts:
        for other, count in p.intersections:
            if other not in names:
                outside[other] = outside.get(other, 0) + count
    tags = frozenset.intersection(*(p.tags for p in parts))
    merged = TrackedSurface(name, genus, square, tags, outside)

    surfaces = []
    for x in s.surfaces:
        if x.name in names:
            continue
        x = _drop_partners(x, names)
        if x.name in outside:
            x = x.evolve(intersections={**x.intersection_map, name: outside[x.name]})
        surfaces.append(x)
    surfaces.append(merged)

    logger.debug("resolve %s -> %s (genus %d, square %d)", names, name, genus, square)
    return s.evolve(
        ProvenanceEntry(f"resolve {' + '.join(names)} -> {name} (genus {genus}, square {square})"),
        surfaces=tuple(surfaces),
        facts=tuple(f for f in s.facts if f.surface not in names),
    )


# === COMPLEMENT DATA ===

def complement_facts(s: ManifoldState, name: str) -> Tuple[Pi1Fact, ...]:
    """
    Scoped facts for the complement of a surface, plus what a sphere section
    gives: a sphere meeting the surface once kills its meridian, and in a
    simply connected manifold makes the complement simply connected.
    """
    s.surface(name)
    facts = list(s.facts_for(name))
    for sphere in s.surfaces:
        if sphere.genus == 0 and sphere.meets(name) == 1:
            citation = f"sphere {sphere.name} meets {name} once"
            facts.append(Pi1Fact(FactKind.MERIDIAN_DIES, citation, name))
            if s.simply_connected:
                facts.append(Pi1Fact(FactKind.SURJECTIVE_FROM_SURFACE, citation, name))
                facts.append(Pi1Fact(FactKind.GENERATORS_DIE, citation, name))
            break
    return tuple(facts)


def complement_datum(s: ManifoldState, name: str) -> Pi1Datum:
    facts = complement_facts(s, name)
    kinds = {f.kind for f in facts}
    if (
        isinstance(s.pi1, ExplicitPresentation)
        and FactKind.MERIDIAN_DIES in kinds
        and is_certified_trivial(s.pi1.presentation)
    ):
        return TRIVIAL_GROUP
    return DeclaredFacts(facts)


# === SYMPLECTIC SUM ===

def _spin_witness(side: ManifoldState, glued: str) -> Optional[TrackedSurface]:
    for x in side.surfaces:
        if x.name != glued and x.is_odd and not x.meets(glued):
            return x
    return None


def symplectic_sum(sA: ManifoldState, surfA: str, sB: ManifoldState, surfB: str) -> ManifoldState:
    """Gluing along surfaces of equal genus and opposite square."""
    FA, FB = sA.surface(surfA), sB.surface(surfB)
    if FA.genus != FB.genus:
        raise GenusMismatch(f"{surfA} has genus {FA.genus}, {surfB} has genus {FB.genus}")
    if FA.self_intersection + FB.self_intersection != 0:
        raise NormalBundleMismatch(
            f"squares {FA.self_intersection} and {FB.self_intersection} do not cancel"
        )
    g = FA.genus
    A, B = sA.invariants, sB.invariants
    provenance = list(sA.provenance) + list(sB.provenance)

    def survivors(side: ManifoldState, glued: str) -> List[TrackedSurface]:
        out = []
        for x in side.surfaces:
            if x.name == glued:
                continue
            if x.meets(glued):
                x = _drop_partners(x, [glued]).evolve(notes=x.notes + (BOUNDARY_TOUCHING,))
            out.append(x)
        return out

    left = survivors(sA, surfA)
    taken = {x.name for x in left}
    mapping: Dict[str, str] = {}
    for x in sB.surfaces:
        if x.name == surfB:
            continue
        fresh = x.name
        while fresh in taken:
            fresh += "'"
        taken.add(fresh)
        if fresh != x.name:
            mapping[x.name] = fresh
    right = [_retarget(x, mapping) for x in survivors(sB, surfB)]

    witness = None
    for side, glued in ((sA, surfA), (sB, surfB)):
        witness = witness or _spin_witness(side, glued)
    if witness is not None:
        spin = Spin.NON_SPIN
        provenance.append(
            ProvenanceEntry(f"nonspin: odd surface {witness.name} (square {witness.self_intersection}) misses the gluing locus")
        )
    else:
        spin = Spin.UNKNOWN

    pi1 = van_kampen_sum(complement_datum(sA, surfA), complement_datum(sB, surfB), kill_meridians=True)
    trivial = isinstance(pi1, ExplicitPresentation) and is_certified_trivial(pi1.presentation)
    if trivial:
        b1 = 0
    elif isinstance(pi1, ExplicitPresentation):
        b1 = abelianize(pi1.presentation).free_rank
    else:
        b1 = A.b1 + B.b1
        provenance.append(ProvenanceEntry(f"b1 = {A.b1} + {B.b1} recorded without a group computation"))

    symplectic = (
        A.symplectic
        and B.symplectic
        and SurfaceTag.SYMPLECTIC in FA.tags
        and SurfaceTag.SYMPLECTIC in FB.tags
    )
    invariants = replace(
        A,
        e=A.e + B.e + 4 * (g - 1),
        sigma=A.sigma + B.sigma,
        b1=b1,
        spin=spin,
        simply_connected=trivial,
        symplectic=symplectic,
        minimal=False,
    )
    facts = tuple(f for f in sA.facts if f.surface not in (surfA, None)) + _rename_facts(
        (f for f in sB.facts if f.surface not in (surfB, None)), mapping
    )
    provenance.append(ProvenanceEntry(f"symplectic sum along {surfA} = {surfB} (genus {g})", SUM_CITATION))
    logger.debug("symplectic sum along %s = %s: e=%d sigma=%d", surfA, surfB, invariants.e, invariants.sigma)
    return ManifoldState(
        invariants=invariants,
        surfaces=tuple(left + right),
        pi1=pi1,
        provenance=tuple(provenance),
        facts=facts,
    )


# === TORUS SURGERIES ===

def _require_torus(s: ManifoldState, name: str) -> TrackedSurface:
    torus = s.surface(name)
    if not torus.is_torus:
        raise NotATorus(
            f"{name} has genus {torus.genus} and square {torus.self_intersection}, not a square-zero torus"
        )
    return torus


def luttinger(s: ManifoldState, spec: LuttingerSpec) -> ManifoldState:
    """Torus surgery; e and σ are unchanged, an explicit π1 gains the surgery relator."""
    _require_torus(s, spec.torus_name)
    pi1 = s.pi1
    invariants = s.invariants
    entries = [ProvenanceEntry(f"luttinger {spec.label()}")]
    if isinstance(pi1, ExplicitPresentation):
        if spec.meridian is not None and spec.push_off is not None:
            _, q = spec.coefficient
            p = luttinger_quotient(pi1.presentation, spec.meridian ** q, spec.push_off, spec.m)
            pi1 = ExplicitPresentation(p)
            invariants = replace(
                invariants,
                b1=abelianize(p).free_rank,
                simply_connected=is_certified_trivial(p),
            )
        else:
            pi1 = DeclaredFacts(undetermined=True)
            entries.append(ProvenanceEntry("pi1 undetermined: no meridian or push-off words supplied"))
    return replace(s, invariants=invariants, pi1=pi1, provenance=s.provenance + tuple(entries))


def knot_label(family_index: int) -> Tuple[str, bool]:
    """
    Knot used by a family index, and whether it is fibered. Index k >= 0 is
    the (2, 2k+1) torus knot (k = 0 the unknot); k < 0 is the |k|-th twist
    knot, fibered only for the trefoil and the figure eight.
    """
    if family_index >= 0:
        return ("unknot" if family_index == 0 else f"T(2,{2 * family_index + 1})"), True
    twists = -family_index
    return f"twist knot K{twists}", twists <= 2


def knot_surgery(s: ManifoldState, torus: str, family_index: int) -> ManifoldState:
    """Fintushel-Stern surgery: same homeomorphism type, a new smooth-structure label."""
    _require_torus(s, torus)
    kinds = {f.kind for f in complement_facts(s, torus)}
    if not (s.simply_connected and FactKind.MERIDIAN_DIES in kinds):
        raise MissingComplementFact(
            f"knot surgery on {torus} needs a simply connected manifold and a nullhomotopic meridian"
        )
    knot, fibered = knot_label(family_index)
    if family_index == 0:
        status = "smooth structure unchanged; symplectic flag retained"
    else:
        status = (
            f"smooth structure family {family_index}; "
            f"{'fibered' if fibered else 'non-fibered'} knot, symplectic flag not retained"
        )
    return s.evolve(ProvenanceEntry(f"knot surgery on {torus} with {knot} (family {family_index})", status))
