from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Dict, FrozenSet, Optional, Tuple, Union

import sympy

from core.errors import BadParameter, UnknownSurface
from core.groups import (
    DeclaredFacts,
    ExplicitPresentation,
    Pi1Datum,
    Pi1Fact,
    Word,
    abelianize,
    is_certified_trivial,
)


class Spin(Enum):
    SPIN = "spin"
    NON_SPIN = "nonspin"
    UNKNOWN = "unknown"


class _NonIntegral:
    """Marker for χ_h when 4 does not divide e + σ."""
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "NON_INTEGRAL"

    def __bool__(self) -> bool:
        return False


NON_INTEGRAL = _NonIntegral()
ChiH = Union[int, _NonIntegral]


@dataclass(frozen=True)
class InvariantVector:
    """Numerical state of a closed oriented 4-manifold. Derived quantities are properties."""
    e: int
    sigma: int
    b1: int = 0
    spin: Spin = Spin.UNKNOWN
    simply_connected: bool = False
    symplectic: bool = False  # declared
    minimal: bool = False  # declared

    @property
    def b2(self) -> int:
        return self.e - 2 + 2 * self.b1

    @property
    def c1_sq(self) -> int:
        return 2 * self.e + 3 * self.sigma

    @property
    def chi_h_exact(self) -> sympy.Rational:
        return sympy.Rational(self.e + self.sigma, 4)

    @property
    def chi_h(self) -> ChiH:
        if (self.e + self.sigma) % 4:
            return NON_INTEGRAL
        return (self.e + self.sigma) // 4

    @property
    def b2_plus(self) -> Optional[int]:
        if (self.b2 + self.sigma) % 2:
            return None
        return (self.b2 + self.sigma) // 2

    @property
    def b2_minus(self) -> Optional[int]:
        if (self.b2 - self.sigma) % 2:
            return None
        return (self.b2 - self.sigma) // 2

    @property
    def realizable(self) -> bool:
        return (
            self.b1 >= 0
            and self.b2 >= 0
            and self.b2_plus is not None
            and self.b2_plus >= 0
            and self.b2_minus >= 0
        )


class SurfaceTag(Enum):
    SYMPLECTIC = "Symplectic"
    LAGRANGIAN = "Lagrangian"
    COMPLEX = "Complex"


BOUNDARY_TOUCHING = "boundary-touching"


@dataclass(frozen=True)
class TrackedSurface:
    """An embedded surface in the ledger. Intersections are stored as sorted (name, count) pairs."""
    name: str
    genus: int
    self_intersection: int
    tags: FrozenSet[SurfaceTag] = frozenset()
    intersections: Tuple[Tuple[str, int], ...] = ()
    notes: Tuple[str, ...] = ()

    def __post_init__(self):
        if self.genus < 0:
            raise BadParameter(f"surface {self.name} has negative genus {self.genus}")
        pairs = dict(self.intersections)
        if self.name in pairs:
            raise BadParameter(f"surface {self.name} cannot intersect itself in the ledger")
        if any(v < 0 for v in pairs.values()):
            raise BadParameter(f"surface {self.name} has a negative intersection count")
        object.__setattr__(self, "tags", frozenset(self.tags))
        object.__setattr__(self, "intersections", tuple(sorted((k, v) for k, v in pairs.items() if v)))

    @property
    def intersection_map(self) -> Dict[str, int]:
        return dict(self.intersections)

    def meets(self, other: str) -> int:
        return self.intersection_map.get(other, 0)

    @property
    def is_odd(self) -> bool:
        return self.self_intersection % 2 == 1

    @property
    def is_torus(self) -> bool:
        return self.genus == 1 and self.self_intersection == 0

    def evolve(self, **changes) -> "TrackedSurface":
        return replace(self, **changes)


@dataclass(frozen=True)
class ProvenanceEntry:
    operation: str
    citation: str = ""

    def __str__(self) -> str:
        return f"{self.operation} [{self.citation}]" if self.citation else self.operation


@dataclass(frozen=True)
class ManifoldState:
    """Invariants, tracked surfaces, π1 datum and the ledger of applied operations."""
    invariants: InvariantVector
    surfaces: Tuple[TrackedSurface, ...] = ()
    pi1: Pi1Datum = field(default_factory=DeclaredFacts)
    provenance: Tuple[ProvenanceEntry, ...] = ()
    facts: Tuple[Pi1Fact, ...] = ()  # complement facts, scoped by surface name

    def surface(self, name: str) -> TrackedSurface:
        for s in self.surfaces:
            if s.name == name:
                return s
        raise UnknownSurface(f"no tracked surface named {name!r}")

    def has_surface(self, name: str) -> bool:
        return any(s.name == name for s in self.surfaces)

    @property
    def surface_names(self) -> Tuple[str, ...]:
        return tuple(s.name for s in self.surfaces)

    def facts_for(self, name: str) -> Tuple[Pi1Fact, ...]:
        return tuple(f for f in self.facts if f.surface == name)

    def intersections_symmetric(self) -> bool:
        for s in self.surfaces:
            for other, count in s.intersections:
                if not self.has_surface(other) or self.surface(other).meets(s.name) != count:
                    return False
        return True

    def evolve(self, operation: Optional[ProvenanceEntry] = None, **changes) -> "ManifoldState":
        if operation is not None:
            changes["provenance"] = self.provenance + (operation,)
        return replace(self, **changes)

    # Short names used by the script language and the JSON schema.
    @property
    def e(self) -> int:
        return self.invariants.e

    @property
    def sigma(self) -> int:
        return self.invariants.sigma

    @property
    def b1(self) -> int:
        return self.invariants.b1

    @property
    def c1sq(self) -> int:
        return self.invariants.c1_sq

    @property
    def chi_h(self) -> ChiH:
        return self.invariants.chi_h

    @property
    def b2plus(self) -> Optional[int]:
        return self.invariants.b2_plus

    @property
    def b2minus(self) -> Optional[int]:
        return self.invariants.b2_minus

    @property
    def spin(self) -> str:
        return self.invariants.spin.value

    @property
    def simply_connected(self) -> bool:
        return self.invariants.simply_connected


@dataclass(frozen=True)
class LuttingerSpec:
    """
    A torus surgery along a tracked torus.

    coefficient (m, q) adjoins the relator meridian^q * push_off^(sign*m);
    (m, 1) is the 1/m Luttinger surgery and (0, 1) kills the meridian.
    """
    torus_name: str
    curve_label: str
    coefficient: Tuple[int, int] = (1, 1)
    direction_sign: int = 1
    meridian: Optional[Word] = None
    push_off: Optional[Word] = None

    def __post_init__(self):
        m, q = self.coefficient
        if q == 0:
            raise BadParameter("torus surgery coefficient needs a nonzero denominator")
        if self.direction_sign not in (1, -1):
            raise BadParameter(f"direction sign must be +1 or -1, got {self.direction_sign}")

    @property
    def m(self) -> int:
        return self.direction_sign * self.coefficient[0]

    def label(self) -> str:
        m, q = self.coefficient
        sign = "+" if self.direction_sign > 0 else "-"
        return f"({self.torus_name}, {self.curve_label}, {sign}{m}/{q})"


class AuditStatus(Enum):
    MATCH = "MATCH"
    MISMATCH = "MISMATCH"


@dataclass(frozen=True)
class AuditRow:
    claim_id: str
    citation: str
    stated: int
    computed: int

    @property
    def status(self) -> AuditStatus:
        return AuditStatus.MATCH if self.stated == self.computed else AuditStatus.MISMATCH


class FormParity(Enum):
    ODD_FORM = "OddForm"
    PER_PAPER = "PerPaper"


@dataclass(frozen=True)
class LatticePoint:
    chi_h: int
    c1_sq: int
    realized_by: str = ""
    parity: FormParity = FormParity.PER_PAPER

    @property
    def coordinates(self) -> Tuple[int, int]:
        return self.chi_h, self.c1_sq


def pi1_summary(state: ManifoldState) -> str:
    """'trivial', the abelianization when it is nontrivial, or 'undetermined'."""
    pi1 = state.pi1
    if isinstance(pi1, ExplicitPresentation):
        if is_certified_trivial(pi1.presentation):
            return "trivial"
        h1 = abelianize(pi1.presentation)
        return "undetermined" if h1.is_trivial else str(h1)
    if not pi1.undetermined and state.simply_connected:
        return "trivial"
    return "undetermined"
