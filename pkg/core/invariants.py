import logging
from dataclasses import dataclass
from typing import Optional, Tuple

from core.domain import NON_INTEGRAL, InvariantVector, Spin
from core.errors import PreconditionViolated

logger = logging.getLogger(__name__)


def derive(
    e: int,
    sigma: int,
    b1: int = 0,
    spin: Spin = Spin.UNKNOWN,
    simply_connected: bool = False,
    symplectic: bool = False,
    minimal: bool = False,
) -> InvariantVector:
    """Builds an InvariantVector; every integer input is accepted."""
    return InvariantVector(
        e=int(e),
        sigma=int(sigma),
        b1=int(b1),
        spin=spin,
        simply_connected=simply_connected,
        symplectic=symplectic,
        minimal=minimal,
    )


@dataclass(frozen=True)
class Violation:
    identity: str
    claimed: int
    derived: int

    def __str__(self) -> str:
        return f"{self.identity}: claimed {self.claimed}, derived {self.derived}"


@dataclass(frozen=True)
class ConsistencyReport:
    violations: Tuple[Violation, ...] = ()

    @property
    def passed(self) -> bool:
        return not self.violations

    def __str__(self) -> str:
        if self.passed:
            return "PASS"
        return "FAIL: " + "; ".join(str(v) for v in self.violations)


def consistency_check(
    v: InvariantVector, claimed_c1_sq: int, claimed_chi_h: Optional[int] = None
) -> ConsistencyReport:
    """Compares claimed c1² (and optionally χ_h) against the values derived from (e, σ)."""
    violations = []
    if claimed_c1_sq != v.c1_sq:
        violations.append(Violation("c1^2 = 2e + 3sigma", claimed_c1_sq, v.c1_sq))
    if claimed_chi_h is not None:
        if v.chi_h is NON_INTEGRAL:
            violations.append(Violation("chi_h = (e + sigma)/4 is integral", claimed_chi_h, v.e + v.sigma))
        elif claimed_chi_h != v.chi_h:
            violations.append(Violation("chi_h = (e + sigma)/4", claimed_chi_h, v.chi_h))
        if 12 * claimed_chi_h - claimed_c1_sq != v.e:
            violations.append(
                Violation("12 chi_h - c1^2 = e", 12 * claimed_chi_h - claimed_c1_sq, v.e)
            )
    report = ConsistencyReport(tuple(violations))
    if not report.passed:
        logger.debug("consistency check failed for e=%d sigma=%d: %s", v.e, v.sigma, report)
    return report


@dataclass(frozen=True)
class HomeomorphismType:
    """a·CP² # b·(-CP²)."""
    a: int
    b: int

    def __str__(self) -> str:
        return f"{self.a}CP2 # {self.b}(-CP2)"


def homeomorphism_type(v: InvariantVector) -> HomeomorphismType:
    """Freedman classification of a simply connected, nonspin, indefinite-or-positive vector."""
    if not v.simply_connected:
        raise PreconditionViolated("homeomorphism type needs a simply connected manifold")
    if v.b1 != 0:
        raise PreconditionViolated(f"simply connected manifolds have b1 = 0, got {v.b1}")
    if v.spin is not Spin.NON_SPIN:
        raise PreconditionViolated(f"homeomorphism type needs a nonspin manifold, parity is {v.spin.value}")
    if not v.realizable:
        raise PreconditionViolated(f"(e={v.e}, sigma={v.sigma}) does not give a realizable b2±")
    if v.b2_plus < 1:
        raise PreconditionViolated("homeomorphism type needs b2+ >= 1")
    return HomeomorphismType(v.b2_plus, v.b2_minus)
