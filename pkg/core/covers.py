"""
Invariants of abelian covers branched over line arrangements.

Covers are described numerically: ramification indices of the branch
components and the fiber cardinality over each stratum of the base. The
character-level data of the cover never enters.
"""
import logging
from dataclasses import dataclass, field
from math import gcd
from typing import Callable, Dict, Mapping, Optional, Sequence, Tuple, Union

import sympy

from core.domain import InvariantVector, Spin, SurfaceTag, TrackedSurface
from core.errors import BadParameter, BasisMismatch, NonIntegralGenus
from core.invariants import derive
from core.utils import exact_int

logger = logging.getLogger(__name__)

RationalLike = Union[int, str, sympy.Rational]


@dataclass(frozen=True)
class IntersectionForm:
    basis_names: Tuple[str, ...]
    matrix: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        basis = tuple(self.basis_names)
        rows = tuple(tuple(int(x) for x in row) for row in self.matrix)
        if len(rows) != len(basis) or any(len(r) != len(basis) for r in rows):
            raise BadParameter("intersection matrix must be square and match the basis")
        if any(rows[i][j] != rows[j][i] for i in range(len(rows)) for j in range(len(rows))):
            raise BadParameter("intersection matrix must be symmetric")
        object.__setattr__(self, "basis_names", basis)
        object.__setattr__(self, "matrix", rows)

    @property
    def rank(self) -> int:
        return len(self.basis_names)

    @property
    def gram(self) -> sympy.Matrix:
        return sympy.Matrix(self.matrix)

    def divisor(self, coefficients: Mapping[str, RationalLike]) -> "DivisorClass":
        unknown = set(coefficients) - set(self.basis_names)
        if unknown:
            raise BasisMismatch(f"classes {sorted(unknown)} are not in the basis {self.basis_names}")
        return DivisorClass(
            self.basis_names,
            tuple(sympy.Rational(coefficients.get(name, 0)) for name in self.basis_names),
        )

    def generator(self, name: str) -> "DivisorClass":
        return self.divisor({name: 1})

    def zero(self) -> "DivisorClass":
        return self.divisor({})


def blown_up_plane(points: int) -> IntersectionForm:
    """The projective plane blown up at `points` points: basis H, E0, E1, ..."""
    names = ("H",) + tuple(f"E{i}" for i in range(points))
    diag = [1] + [-1] * points
    matrix = tuple(tuple(diag[i] if i == j else 0 for j in range(len(names))) for i in range(len(names)))
    return IntersectionForm(names, matrix)


@dataclass(frozen=True)
class DivisorClass:
    """Exact rational combination of basis classes."""
    basis: Tuple[str, ...]
    coefficients: Tuple[sympy.Rational, ...]

    def __post_init__(self):
        if len(self.basis) != len(self.coefficients):
            raise BasisMismatch("coefficient count does not match the basis")
        object.__setattr__(self, "basis", tuple(self.basis))
        object.__setattr__(self, "coefficients", tuple(sympy.Rational(c) for c in self.coefficients))

    def _check(self, other: "DivisorClass") -> None:
        if self.basis != other.basis:
            raise BasisMismatch(f"basis {self.basis} differs from {other.basis}")

    def __add__(self, other: "DivisorClass") -> "DivisorClass":
        self._check(other)
        return DivisorClass(self.basis, tuple(a + b for a, b in zip(self.coefficients, other.coefficients)))

    def __sub__(self, other: "DivisorClass") -> "DivisorClass":
        return self + (-other)

    def __neg__(self) -> "DivisorClass":
        return DivisorClass(self.basis, tuple(-c for c in self.coefficients))

    def __rmul__(self, scalar: RationalLike) -> "DivisorClass":
        k = sympy.Rational(scalar)
        return DivisorClass(self.basis, tuple(k * c for c in self.coefficients))

    __mul__ = __rmul__

    def coefficient(self, name: str) -> sympy.Rational:
        return self.coefficients[self.basis.index(name)]

    def __str__(self) -> str:
        terms = [f"{c}*{n}" for n, c in zip(self.basis, self.coefficients) if c != 0]
        return " + ".join(terms) if terms else "0"


def pairing(d1: DivisorClass, d2: DivisorClass, form: IntersectionForm) -> sympy.Rational:
    """Bilinear extension of the intersection form."""
    if d1.basis != form.basis_names or d2.basis != form.basis_names:
        raise BasisMismatch("divisor classes must be expressed in the form's basis")
    v1 = sympy.Matrix(d1.coefficients)
    v2 = sympy.Matrix(d2.coefficients)
    return sympy.Rational((v1.T * form.gram * v2)[0, 0])


@dataclass(frozen=True)
class BranchComponent:
    name: str
    divisor: DivisorClass
    ram_index: int
    genus: int = 0


@dataclass(frozen=True)
class Stratum:
    label: str
    euler: int
    fiber_cardinality: int


@dataclass(frozen=True)
class CoverSpec:
    """Numerical datum of an abelian cover with group of order group_order."""
    group_order: int
    base_form: IntersectionForm
    K_base: DivisorClass
    branch_components: Tuple[BranchComponent, ...] = ()
    strata: Tuple[Stratum, ...] = ()
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "branch_components", tuple(self.branch_components))
        object.__setattr__(self, "strata", tuple(self.strata))
        if self.group_order < 1:
            raise BadParameter(f"group order must be positive, got {self.group_order}")
        if self.K_base.basis != self.base_form.basis_names:
            raise BasisMismatch("canonical class is not in the base basis")
        for comp in self.branch_components:
            if comp.divisor.basis != self.base_form.basis_names:
                raise BasisMismatch(f"branch component {comp.name} is not in the base basis")
            if comp.ram_index < 2 or self.group_order % comp.ram_index:
                raise BadParameter(
                    f"ramification index {comp.ram_index} of {comp.name} must be >= 2 and divide {self.group_order}"
                )
        for stratum in self.strata:
            if stratum.fiber_cardinality < 1 or self.group_order % stratum.fiber_cardinality:
                raise BadParameter(
                    f"fiber cardinality {stratum.fiber_cardinality} over {stratum.label} must divide {self.group_order}"
                )

    def branch_divisor(self) -> DivisorClass:
        """Σ (m-1)/m · D over the branch components."""
        total = self.base_form.zero()
        for comp in self.branch_components:
            total = total + sympy.Rational(comp.ram_index - 1, comp.ram_index) * comp.divisor
        return total


def pardini_K_squared(spec: CoverSpec) -> sympy.Rational:
    """K_X² = |G| · (K_Y + Σ (m-1)/m · D)²."""
    K = spec.K_base + spec.branch_divisor()
    value = spec.group_order * pairing(K, K, spec.base_form)
    logger.debug("K^2 of cover %s = %s", spec.name or "<anonymous>", value)
    return value


def stratified_euler(spec: CoverSpec) -> int:
    """Σ over strata of fiber cardinality times Euler number. Strata must partition the base."""
    return sum(s.fiber_cardinality * s.euler for s in spec.strata)


def riemann_hurwitz_genus(degree: int, base_genus: int, branch_points: Sequence[int]) -> int:
    """Genus of a degree-d cover of a genus-g_b curve branched at points of the given indices."""
    if degree < 1:
        raise BadParameter(f"degree must be positive, got {degree}")
    for m in branch_points:
        if m < 1 or degree % m:
            raise BadParameter(f"ramification index {m} must divide the degree {degree}")
    rhs = degree * (2 * base_genus - 2) + sum(
        degree * (1 - sympy.Rational(1, m)) for m in branch_points
    )
    rhs = sympy.Rational(rhs)
    if rhs.q != 1 or rhs.p % 2:
        raise NonIntegralGenus(f"2g - 2 = {rhs} is not an even integer")
    genus = (int(rhs.p) + 2) // 2
    if genus < 0:
        raise NonIntegralGenus(f"negative genus {genus}")
    return genus


def singular_fiber_budget(e_total: int, e_fiber: int, e_base: int) -> int:
    """Σ (e(singular fiber) - e(generic fiber)) = e - e_F · e_B."""
    return e_total - e_fiber * e_base


# === THE COMPLETE QUADRANGLE ===

QUADRANGLE_COMPONENTS = ("L'1", "L'2", "L'3", "L1", "L2", "L3", "E0", "E1", "E2", "E3")


def quadrangle_spec(n: int, rank: int = 2) -> CoverSpec:
    """
    (ℤ/n)^rank cover of the plane blown up at the four base points of the
    complete quadrangle, branched over the six strict transforms and the
    four exceptional curves with index n.

    Strata are read off the arrangement: nodes are the pairwise
    intersections, each component is rational, and the fiber over a point
    has n^rank, n^(rank-1) or n^(rank-2) points according to whether it is
    off the branch locus, on one component, or a node.
    """
    if n < 2:
        raise BadParameter(f"n must be > 1, got {n}")
    if rank < 2:
        raise BadParameter(f"rank must be >= 2, got {rank}")
    form = blown_up_plane(4)
    H = form.generator("H")
    E = [form.generator(f"E{i}") for i in range(4)]
    K = -3 * H + E[0] + E[1] + E[2] + E[3]

    divisors: Dict[str, DivisorClass] = {}
    for j in (1, 2, 3):
        divisors[f"L'{j}"] = H - E[0] - E[j]
    for j in (1, 2, 3):
        i, k = (x for x in (1, 2, 3) if x != j)
        divisors[f"L{j}"] = H - E[i] - E[k]
    for i in range(4):
        divisors[f"E{i}"] = E[i]
    components = tuple(BranchComponent(name, divisors[name], n) for name in QUADRANGLE_COMPONENTS)

    meets = {
        (a.name, b.name): exact_int(pairing(a.divisor, b.divisor, form), f"{a.name}.{b.name}")
        for a in components
        for b in components
        if a.name != b.name
    }
    nodes = sum(meets.values()) // 2
    open_curves = sum(
        2 - 2 * c.genus - sum(meets[(c.name, o.name)] for o in components if o.name != c.name)
        for c in components
    )
    e_base = 2 + form.rank  # simply connected rational surface
    strata = (
        Stratum("complement", e_base - open_curves - nodes, n ** rank),
        Stratum("branch curves", open_curves, n ** (rank - 1)),
        Stratum("nodes", nodes, n ** (rank - 2)),
    )
    return CoverSpec(
        group_order=n ** rank,
        base_form=form,
        K_base=K,
        branch_components=components,
        strata=strata,
        name=f"quadrangle({n})" if rank == 2 else f"quadrangle({n})^{rank}",
    )


def ramification_curves(spec: CoverSpec, names: Optional[Sequence[str]] = None) -> Tuple[TrackedSurface, ...]:
    """
    Reduced preimages of the branch components, assuming each preimage is
    connected: R² = g/m²·D², K·R = g/m·(K_Y + B)·D, genus by adjunction.
    """
    comps = spec.branch_components
    names = list(names) if names is not None else [f"R{i + 1}" for i in range(len(comps))]
    if len(names) != len(comps):
        raise BadParameter("one name per branch component is required")
    g = spec.group_order
    form = spec.base_form
    KB = spec.K_base + spec.branch_divisor()

    curves = []
    for i, comp in enumerate(comps):
        m = comp.ram_index
        square = sympy.Rational(g, m * m) * pairing(comp.divisor, comp.divisor, form)
        canonical = sympy.Rational(g, m) * pairing(KB, comp.divisor, form)
        twice_genus = canonical + square + 2
        if sympy.Rational(twice_genus).q != 1 or int(twice_genus) % 2:
            raise NonIntegralGenus(f"adjunction gives non-integral genus for {comp.name}")
        meets = {}
        for j, other in enumerate(comps):
            if i == j:
                continue
            count = sympy.Rational(g, m * other.ram_index) * pairing(comp.divisor, other.divisor, form)
            meets[names[j]] = exact_int(count, f"{names[i]}.{names[j]}")
        curves.append(
            TrackedSurface(
                name=names[i],
                genus=int(twice_genus) // 2,
                self_intersection=exact_int(square, f"{names[i]}^2"),
                tags=frozenset({SurfaceTag.COMPLEX, SurfaceTag.SYMPLECTIC}),
                intersections=meets,
            )
        )
    return tuple(curves)


@dataclass(frozen=True)
class Fibration:
    fiber_genus: int
    base_genus: int
    singular_fibers: int


@dataclass(frozen=True)
class CoverSurface:
    n: int
    invariants: InvariantVector
    q: int
    fibration: Fibration
    curves: Tuple[TrackedSurface, ...] = field(default=(), repr=False)

    @property
    def c1_sq(self) -> int:
        return self.invariants.c1_sq

    @property
    def e(self) -> int:
        return self.invariants.e


def quadrangle_cover_surface(n: int) -> CoverSurface:
    """The surface S(n): invariants from the cover formulas, never from closed forms."""
    if n <= 1 or gcd(n, 6) != 1:
        raise BadParameter(f"S(n) needs n > 1 coprime to 6, got {n}")
    spec = quadrangle_spec(n)
    c1_sq = exact_int(pardini_K_squared(spec), "K^2")
    e = stratified_euler(spec)
    sigma = exact_int(sympy.Rational(c1_sq - 2 * e, 3), "signature")
    q = (n - 1) // 2

    fiber_genus = riemann_hurwitz_genus(n, 0, [n] * 4)
    base_genus = q
    e_fiber = 2 - 2 * fiber_genus
    budget = singular_fiber_budget(e, e_fiber, 2 - 2 * base_genus)
    # A singular fiber is two genus-q curves meeting once.
    deviation = (2 * (2 - 2 * q) - 1) - e_fiber
    singular = exact_int(sympy.Rational(budget, deviation), "singular fiber count")

    invariants = derive(
        e,
        sigma,
        b1=2 * q,
        spin=Spin.NON_SPIN,  # the ramification curves have odd square
        simply_connected=False,
        symplectic=True,
    )
    logger.info("S(%d): c1^2=%d e=%d sigma=%d q=%d", n, c1_sq, e, sigma, q)
    return CoverSurface(
        n=n,
        invariants=invariants,
        q=q,
        fibration=Fibration(fiber_genus, base_genus, singular),
        curves=ramification_curves(spec),
    )


def hirzebruch_tower(m: int) -> Tuple[int, int]:
    """(c1², e) of the (ℤ/5)^m quadrangle cover."""
    if m < 2:
        raise BadParameter(f"the tower starts at m = 2, got {m}")
    spec = quadrangle_spec(5, rank=m)
    return exact_int(pardini_K_squared(spec), "K^2"), stratified_euler(spec)


COVER_SPECS: Dict[str, Callable[[int], CoverSpec]] = {
    "quadrangle(n)": quadrangle_spec,
    "hirzebruch_tower(m)": lambda m: quadrangle_spec(5, rank=m),
}
