"""
Named building blocks. Each builder returns a fully populated ManifoldState
whose invariants, surfaces and complement facts carry their citations.

Block names are stable strings; parameters are passed either as extra
arguments (``catalog_block("X(k,m)", 3, 1)``) or inline (``"X(3,1)"``,
``"X_{4,6}"``, ``"Y_2(1/1,1/1)"``).
"""
import logging
import re
from dataclasses import dataclass
from typing import Callable, Dict, List, Sequence, Tuple

from core.constructions import blow_up, declare_fact, declare_flags, luttinger, resolve
from core.covers import quadrangle_cover_surface
from core.domain import LuttingerSpec, ManifoldState, ProvenanceEntry, Spin, SurfaceTag, TrackedSurface
from core.errors import BadParameter, UnknownBlock
from core.groups import (
    DeclaredFacts,
    ExplicitPresentation,
    FactKind,
    Pi1Fact,
    abelianize,
    make_Y_n_presentation,
    make_Y_n_pq_presentation,
    product_presentation,
)
from core.invariants import derive
from core.utils import parse_call_name

logger = logging.getLogger(__name__)

SYMPLECTIC = frozenset({SurfaceTag.SYMPLECTIC})
LAGRANGIAN = frozenset({SurfaceTag.LAGRANGIAN})


@dataclass(frozen=True)
class BlockInfo:
    name: str
    head: str
    params: Tuple[str, ...]
    summary: str
    citation: str
    builder: Callable[..., ManifoldState]


def _parity_from_signature(sigma: int) -> Spin:
    # Rokhlin: a smooth spin 4-manifold has signature divisible by 16.
    return Spin.NON_SPIN if sigma % 16 else Spin.UNKNOWN


def _facts(surface: str, citation: str, *kinds: FactKind) -> Tuple[Pi1Fact, ...]:
    return tuple(Pi1Fact(kind, citation, surface) for kind in kinds)


def _second_name(first: str, second: str) -> str:
    return second + "'" if second == first else second


# === BUILDERS ===

def build_S(n: int = 5) -> ManifoldState:
    cover = quadrangle_cover_surface(n)
    s = ManifoldState(
        invariants=cover.invariants,
        surfaces=cover.curves,
        pi1=DeclaredFacts(),
        provenance=(
            ProvenanceEntry(
                f"S({n}): (Z/{n})^2 cover of the plane branched over the complete quadrangle",
                "K_S^2 = 9^2-4*3^2 = 45" if n == 5 else "c1^2 = 5(n-2)^2, e = 2n^2-10n+15",
            ),
        ),
    )
    if n == 5:
        return declare_flags(
            s,
            "complex surfaces of general type ... sit on Bogomolov-Miyaoka-Yau line c1^2 = 9chi_h",
            minimal=True,
        )
    return s.evolve(ProvenanceEntry("minimal flag not declared", "complex surfaces S(n) of general type"))


def build_S_hat(n: int = 5) -> ManifoldState:
    """S(n) blown up once on the smoothing of R3 + R7 + R10."""
    s = build_S(n)
    s = resolve(s, ["R3", "R7", "R10"], into="R")
    s = blow_up(s, on_surface="R", rename="Rtilde")
    return declare_fact(
        s,
        Pi1Fact(
            FactKind.SURJECTIVE_FROM_SURFACE,
            "the inclusion of Rtilde induces a surjection onto pi1 of its complement",
            "Rtilde",
        ),
    )


def build_X_km(k: int, m: int) -> ManifoldState:
    """Fiber sum of Σ_k×S²#4CP̄² and Y_2k(1,m) along genus 2k surfaces."""
    if k < 1:
        raise BadParameter(f"X(k,m) needs k >= 1, got {k}")
    if m == 0:
        raise BadParameter("X(k,m) needs m != 0")
    luttinger_only = abs(m) == 1
    sym = SYMPLECTIC if luttinger_only else frozenset()
    sigma_name = f"Sigma{2 * k}"
    tori = [f"T{i}" for i in range(1, 5)]
    rims = [f"Rbar{i}" for i in range(1, 2 * k - 1)]
    duals = [f"V{i}" for i in range(1, 2 * k - 1)]

    surfaces: List[TrackedSurface] = [TrackedSurface(sigma_name, 2 * k, 0, sym, {t: 1 for t in tori})]
    surfaces += [TrackedSurface(t, 1, -1, sym, {sigma_name: 1}) for t in tori]
    rim_tags = LAGRANGIAN if luttinger_only else frozenset()
    surfaces += [TrackedSurface(r, 1, 0, rim_tags, {v: 1}) for r, v in zip(rims, duals)]
    surfaces += [TrackedSurface(v, 1, -2, rim_tags, {r: 1}) for r, v in zip(rims, duals)]
    surfaces.append(TrackedSurface(f"Sigma{2 * k + 1}", 2 * k + 1, 0, sym))

    facts = _facts(
        sigma_name,
        "the surface loops and the meridian of Sigma are trivial in pi1 of the complement",
        FactKind.GENERATORS_DIE,
        FactKind.MERIDIAN_DIES,
    )
    for r in rims:
        facts += _facts(r, "rim tori have nullhomotopic meridians", FactKind.MERIDIAN_DIES)

    return ManifoldState(
        invariants=derive(
            4 * k + 4,
            -4,
            spin=Spin.NON_SPIN,
            simply_connected=True,
            symplectic=luttinger_only,
            minimal=luttinger_only,
        ),
        surfaces=tuple(surfaces),
        pi1=DeclaredFacts(),
        provenance=(ProvenanceEntry(f"X({k},{m})", "e(X(k,m))= 4k + 4, sigma = -4"),),
        facts=facts,
    )


def build_X_g_g2(g: int) -> ManifoldState:
    """X_{g,g+2}: Σ2 of square 0 crossed once by two genus-g surfaces of square -1."""
    if g < 1:
        raise BadParameter(f"X_{{g,g+2}} needs g >= 1, got {g}")
    surfaces = (
        TrackedSurface("Sigma2", 2, 0, SYMPLECTIC, {"S1": 1, "S2": 1}),
        TrackedSurface("S1", g, -1, SYMPLECTIC, {"Sigma2": 1}),
        TrackedSurface("S2", g, -1, SYMPLECTIC, {"Sigma2": 1}),
        TrackedSurface("T1", 1, 0, LAGRANGIAN),
        TrackedSurface("T2", 1, 0, LAGRANGIAN),
    )
    complement = "pi1 of the complement of T1 and T2 is trivial"
    facts = ()
    for torus in ("T1", "T2"):
        facts += _facts(
            torus,
            complement,
            FactKind.SURJECTIVE_FROM_SURFACE,
            FactKind.GENERATORS_DIE,
            FactKind.MERIDIAN_DIES,
        )
    return ManifoldState(
        invariants=derive(4 * g + 2, -2, spin=Spin.NON_SPIN, simply_connected=True, symplectic=True, minimal=True),
        surfaces=surfaces,
        provenance=(ProvenanceEntry(f"X_{{{g},{g + 2}}}", "e(X_{g,g+2})= 4g+2, sigma = -2"),),
        facts=facts,
    )


def build_X_g_g1(g: int) -> ManifoldState:
    """X_{g,g+1}: Σ2 of square 0 meeting a genus g+1 surface of square 0 once."""
    if g < 1:
        raise BadParameter(f"X_{{g,g+1}} needs g >= 1, got {g}")
    big = f"Sigma{g + 1}"
    if big == "Sigma2":
        big = "Sigma2'"
    surfaces = (
        TrackedSurface("Sigma2", 2, 0, SYMPLECTIC, {big: 1}),
        TrackedSurface(big, g + 1, 0, SYMPLECTIC, {"Sigma2": 1}),
    )
    facts = _facts(
        big,
        "the surface loops and the meridian are trivial in pi1 of the complement",
        FactKind.GENERATORS_DIE,
        FactKind.MERIDIAN_DIES,
    )
    return ManifoldState(
        invariants=derive(
            4 * g + 1, -1, spin=_parity_from_signature(-1), simply_connected=True, symplectic=True, minimal=True
        ),
        surfaces=surfaces,
        provenance=(ProvenanceEntry(f"X_{{{g},{g + 1}}}", "e(X_{g,g+1})= 4g+1, sigma = -1"),),
        facts=facts,
    )


def build_product(g: int, h: int) -> ManifoldState:
    if g < 0 or h < 0:
        raise BadParameter(f"genera must be non-negative, got ({g}, {h})")
    first = f"Sigma{g}"
    second = _second_name(first, f"Sigma{h}")
    return ManifoldState(
        invariants=derive(
            (2 - 2 * g) * (2 - 2 * h),
            0,
            b1=2 * g + 2 * h,
            spin=Spin.SPIN,
            simply_connected=g == 0 and h == 0,
            symplectic=True,
            minimal=g > 0 and h > 0,
        ),
        surfaces=(
            TrackedSurface(first, g, 0, SYMPLECTIC, {second: 1}),
            TrackedSurface(second, h, 0, SYMPLECTIC, {first: 1}),
        ),
        pi1=ExplicitPresentation(product_presentation(g, h)),
        provenance=(ProvenanceEntry(f"Sigma_{g} x Sigma_{h}"),),
    )


def build_T4() -> ManifoldState:
    s = build_product(1, 1)
    surfaces = (
        TrackedSurface("T2xpt", 1, 0, SYMPLECTIC, {"ptxT2": 1}),
        TrackedSurface("ptxT2", 1, 0, SYMPLECTIC, {"T2xpt": 1}),
    )
    return s.evolve(ProvenanceEntry("T4 = T2 x T2"), surfaces=surfaces)


def build_Y_n(n: int) -> ManifoldState:
    p = make_Y_n_presentation(n)
    second = _second_name("Sigma2", f"Sigma{n}")
    return ManifoldState(
        invariants=derive(
            4 * n - 4, 0, b1=abelianize(p).free_rank, symplectic=True, minimal=True
        ),
        surfaces=(
            TrackedSurface("Sigma2", 2, 0, SYMPLECTIC, {second: 1}),
            TrackedSurface(second, n, 0, SYMPLECTIC, {"Sigma2": 1}),
        ),
        pi1=ExplicitPresentation(p),
        provenance=(ProvenanceEntry(f"Y_{n}", "Euler characteristic of Y_n is 4n-4"),),
    )


def build_Y_n_pq(n: int, p: int, q: int, m: int) -> ManifoldState:
    """Σ_n×T² after 2n torus surgeries; symplectic when every surgery is Luttinger (m = 1)."""
    if m < 1:
        raise BadParameter(f"m must be >= 1, got {m}")
    presentation = make_Y_n_pq_presentation(n, p, q, m)
    genus_n = f"Sigma{n}'"
    return ManifoldState(
        invariants=derive(0, 0, b1=abelianize(presentation).free_rank, symplectic=m == 1, minimal=m == 1),
        surfaces=(
            TrackedSurface(genus_n, n, 0, SYMPLECTIC, {"Sigma1'": 1}),
            TrackedSurface("Sigma1'", 1, 0, SYMPLECTIC, {genus_n: 1}),
        ),
        pi1=ExplicitPresentation(presentation),
        provenance=(ProvenanceEntry(f"Y_{n}(1/{p},{m}/{q})", "2n torus surgeries on Sigma_n x T^2"),),
    )


def Y_n_surgeries(n: int) -> List[Tuple[str, str, int]]:
    """(torus, curve, sign) for the 2n+4 surgeries turning Σ2×Σn into Y_n."""
    out = [
        ("a1'xc1'", "a1'", -1), ("b1'xc1''", "b1'", -1),
        ("a2'xc2'", "a2'", -1), ("b2'xc2''", "b2'", -1),
        ("a2'xc1'", "c1'", 1), ("a2''xd1'", "d1'", 1),
        ("a1'xc2'", "c2'", 1), ("a1''xd2'", "d2'", 1),
    ]
    for j in range(3, n + 1):
        out.append((f"b1'xc{j}'", f"c{j}'", -1))
        out.append((f"b2'xd{j}'", f"d{j}'", -1))
    return out


def build_Y_n_from_product(n: int) -> ManifoldState:
    """Runs the surgery list on Σ2×Σn, then installs the relations it yields."""
    if n < 2:
        raise BadParameter(f"Y_n needs n >= 2, got {n}")
    s = build_product(2, n)
    surgeries = Y_n_surgeries(n)
    tori = tuple(TrackedSurface(name, 1, 0, LAGRANGIAN) for name, _, _ in surgeries)
    s = s.evolve(surfaces=s.surfaces + tori)
    for torus, curve, sign in surgeries:
        s = luttinger(s, LuttingerSpec(torus, curve, (1, 1), sign))
    p = make_Y_n_presentation(n)
    logger.debug("Y_%d from product: %d surgeries", n, len(surgeries))
    return s.evolve(
        ProvenanceEntry(f"pi1 of Y_{n}", "the following relations hold in pi1(Y_n)"),
        pi1=ExplicitPresentation(p),
        invariants=derive(
            s.e, s.sigma, b1=abelianize(p).free_rank, spin=Spin.UNKNOWN, symplectic=True, minimal=True
        ),
    )


# === REGISTRY ===

CATALOG: Dict[str, BlockInfo] = {
    info.name: info
    for info in (
        BlockInfo("S", "S", (), "quadrangle cover S(5), c1^2 = 9 chi_h = 45", "K_S^2 = 45, e(S) = 15",
                  lambda: build_S(5)),
        BlockInfo("S_hat", "S_hat", (), "S # CP2bar with the genus 6 curve Rtilde of square 0",
                  "e(S#CP2bar)=16", lambda: build_S_hat(5)),
        BlockInfo("S(n)", "S", ("n",), "quadrangle cover S(n), gcd(n, 6) = 1", "K^2 = 5(n-2)^2", build_S),
        BlockInfo("S_hat(n)", "S_hat", ("n",), "S(n) # CP2bar with Rtilde", "Rtilde of square 0", build_S_hat),
        BlockInfo("X(k,m)", "X", ("k", "m"), "exotic (2k-1)CP2 # (2k+3)CP2bar", "e(X(k,m))= 4k + 4",
                  build_X_km),
        BlockInfo("X_{g,g+2}", "X_{g,g+2}", ("g",), "exotic (2g-1)CP2 # (2g+1)CP2bar", "e(X_{g,g+2})= 4g+2",
                  build_X_g_g2),
        BlockInfo("X_{g,g+1}", "X_{g,g+1}", ("g",), "exotic (2g-1)CP2 # 2g CP2bar", "e(X_{g,g+1})= 4g+1",
                  build_X_g_g1),
        BlockInfo("product(g,h)", "product", ("g", "h"), "Sigma_g x Sigma_h", "product of surfaces",
                  build_product),
        BlockInfo("T4", "T4", (), "four-torus with two dual tori", "T2 x T2", build_T4),
        BlockInfo("Y_n", "Y_n", ("n",), "Luttinger-surgered Sigma_2 x Sigma_n, explicit pi1",
                  "Euler characteristic of Y_n is 4n-4", build_Y_n),
        BlockInfo("Y_n(1/p,m/q)", "Y_n(1/p,m/q)", ("n", "p", "q", "m"), "torus surgeries on Sigma_n x T2",
                  "2n torus surgeries on Sigma_n x T^2", build_Y_n_pq),
        BlockInfo("Y_n_from_product", "Y_n_from_product", ("n",), "Y_n built by the surgery list",
                  "2n + 4 Luttinger surgeries on Sigma_n x Sigma_2", build_Y_n_from_product),
    )
}

_BY_HEAD = {(info.head, len(info.params)): info.name for info in CATALOG.values()}
_X_SUBSCRIPT = re.compile(r"^X_\{(\d+),(\d+)\}$")
_Y_PQ = re.compile(r"^Y_(\d+)\(1/(\d+),(-?\d+)/(\d+)\)$")


def resolve_block_name(name: str, params: Sequence[int] = ()) -> Tuple[str, Tuple[int, ...]]:
    """Maps a block name (possibly with inline parameters) to a catalog key and parameters."""
    name = name.strip()
    params = tuple(int(p) for p in params)
    if name in CATALOG:
        return name, params

    inline: Tuple[int, ...] = ()
    key = None
    match = _X_SUBSCRIPT.match(name)
    if match:
        g, h = int(match.group(1)), int(match.group(2))
        if h == g + 2:
            key, inline = "X_{g,g+2}", (g,)
        elif h == g + 1:
            key, inline = "X_{g,g+1}", (g,)
    match = _Y_PQ.match(name)
    if match:
        n, p, m, q = (int(x) for x in match.groups())
        key, inline = "Y_n(1/p,m/q)", (n, p, q, m)
    if key is None:
        parsed = parse_call_name(name)
        if parsed is not None:
            head, inline = parsed
            key = _BY_HEAD.get((head, len(inline) or len(params)))
    if key is None:
        raise UnknownBlock(f"no catalog block named {name!r}")
    if inline and params:
        raise BadParameter(f"parameters for {name!r} given both inline and as arguments")
    return key, inline or params


def catalog_block(name: str, *params: int) -> ManifoldState:
    key, args = resolve_block_name(name, params)
    info = CATALOG[key]
    if len(args) != len(info.params):
        raise BadParameter(f"block {key} takes {len(info.params)} parameter(s) {info.params}, got {len(args)}")
    logger.debug("catalog block %s%s", key, args)
    return info.builder(*args)


def block_names() -> List[str]:
    return list(CATALOG)
