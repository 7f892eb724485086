"""
Lattice-level reasoning on (χ_h, c1²): the extension region above a realized
point, the exotic threshold, BMY positioning and window scans.
"""
import csv
import io
import logging
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, List, Optional, Sequence, Set, Tuple

from core.domain import FormParity, LatticePoint
from core.errors import BadParameter
from core.utils import ceil_div

logger = logging.getLogger(__name__)

EXTENSION_CITATION = "chi >= 1 and 0 <= c <= 8chi"
CSV_HEADER = ("chi_h", "c1_sq", "realized", "citation")


def extend(base: LatticePoint, chi_max: int) -> Set[LatticePoint]:
    """Every (χ_h + χ, c1² + c) with 1 <= χ <= chi_max and 0 <= c <= 8χ."""
    if chi_max < 1:
        raise BadParameter(f"chi_max must be >= 1, got {chi_max}")
    citation = f"{EXTENSION_CITATION} over {base.realized_by or base.coordinates}"
    points = set()
    for chi in range(1, chi_max + 1):
        for c in range(0, 8 * chi + 1):
            parity = FormParity.ODD_FORM if c < 8 * chi else FormParity.PER_PAPER
            points.add(LatticePoint(base.chi_h + chi, base.c1_sq + c, citation, parity))
    return points


def l_sigma(sigma_X: int, sigma: int) -> int:
    """⌈(σ(X) - σ)/8 - 1⌉ on exact integers."""
    if not 0 <= sigma <= sigma_X:
        raise BadParameter(f"sigma must lie in [0, {sigma_X}], got {sigma}")
    return ceil_div(sigma_X - sigma - 8, 8)


def exotic_threshold(b2_plus_X: int, sigma_X: int, sigma: int) -> int:
    """Least odd k with k >= b2+(X) + 2 l(σ) + 2."""
    bound = b2_plus_X + 2 * l_sigma(sigma_X, sigma) + 2
    return bound if bound % 2 else bound + 1


def threshold_n(k: int) -> int:
    """n with 2n - 1 = k."""
    if k < 1 or k % 2 == 0:
        raise BadParameter(f"threshold must be a positive odd integer, got {k}")
    return (k + 1) // 2


class BMYPosition(Enum):
    ON_LINE = "OnBMYLine"
    BELOW = "Below"
    VIOLATES = "Violates"


def bmy_position(chi_h: int, c1_sq: int) -> BMYPosition:
    if chi_h < 1:
        raise BadParameter(f"chi_h must be >= 1, got {chi_h}")
    bound = 9 * chi_h
    if c1_sq == bound:
        return BMYPosition.ON_LINE
    return BMYPosition.BELOW if c1_sq < bound else BMYPosition.VIOLATES


# === WINDOW SCANS ===

@dataclass(frozen=True)
class Window:
    chi_min: int
    chi_max: int
    c_min: int
    c_max: int

    @property
    def is_empty(self) -> bool:
        return self.chi_min > self.chi_max or self.c_min > self.c_max

    def points(self) -> Iterable[Tuple[int, int]]:
        for chi in range(self.chi_min, self.chi_max + 1):
            for c in range(self.c_min, self.c_max + 1):
                yield chi, c

    def split(self, parts: int) -> List["Window"]:
        """Partitions the χ range into at most `parts` contiguous windows."""
        if self.is_empty:
            return []
        span = self.chi_max - self.chi_min + 1
        parts = max(1, min(parts, span))
        size = ceil_div(span, parts)
        return [
            Window(lo, min(lo + size - 1, self.chi_max), self.c_min, self.c_max)
            for lo in range(self.chi_min, self.chi_max + 1, size)
        ]


@dataclass(frozen=True)
class ScanRow:
    chi_h: int
    c1_sq: int
    realized: bool
    citation: str = ""


def realizing_citation(base: LatticePoint, chi_h: int, c1_sq: int) -> Optional[str]:
    """Citation if the base or its extension region contains the point, else None."""
    label = base.realized_by or f"({base.chi_h}, {base.c1_sq})"
    if (chi_h, c1_sq) == base.coordinates:
        return label
    d_chi = chi_h - base.chi_h
    if d_chi >= 1 and 0 <= c1_sq - base.c1_sq <= 8 * d_chi:
        return f"{EXTENSION_CITATION} over {label}"
    return None


def scan_rows(window: Window, bases: Sequence[LatticePoint]) -> List[ScanRow]:
    rows = []
    for chi, c in window.points():
        citation = None
        for base in bases:
            citation = realizing_citation(base, chi, c)
            if citation is not None:
                break
        rows.append(ScanRow(chi, c, citation is not None, citation or ""))
    return rows


@dataclass(frozen=True)
class ScanResult:
    window: Window
    rows: Tuple[ScanRow, ...]

    @property
    def realized(self) -> Set[Tuple[int, int]]:
        return {(r.chi_h, r.c1_sq) for r in self.rows if r.realized}

    def to_csv(self) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for r in self.rows:
            writer.writerow((r.chi_h, r.c1_sq, "true" if r.realized else "false", r.citation))
        return buffer.getvalue()


def lattice_scan(window: Window, bases: Sequence[LatticePoint], driver=None) -> ScanResult:
    """
    Marks every window point realized or not, citing the first base that
    realizes it. Rows come out with χ ascending, then c ascending.
    """
    if window.is_empty:
        raise BadParameter(f"empty window {window}")
    unique: List[LatticePoint] = []
    seen = set()
    for base in bases:
        if base.coordinates not in seen:
            seen.add(base.coordinates)
            unique.append(base)
    rows = driver.scan(window, unique) if driver is not None else scan_rows(window, unique)
    logger.info("scanned %d points, %d realized", len(rows), sum(r.realized for r in rows))
    return ScanResult(window, tuple(rows))
