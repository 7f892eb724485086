"""
The named constructions, step by step, each emitting audit rows that set a
stated value (with its citation) against the computed one.
"""
import logging
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Tuple

from core.catalog import catalog_block
from core.constructions import blow_up, declare_fact, internal_sum, resolve, symplectic_sum
from core.covers import (
    hirzebruch_tower,
    quadrangle_cover_surface,
    riemann_hurwitz_genus,
    singular_fiber_budget,
)
from core.domain import AuditRow, AuditStatus, ManifoldState
from core.errors import UnknownPipeline
from core.geography import exotic_threshold, threshold_n
from core.groups import FactKind, Pi1Fact
from core.invariants import homeomorphism_type
from core.utils import parse_call_name

logger = logging.getLogger(__name__)

S_FAMILY = (5, 7, 11, 13, 17)


@dataclass(frozen=True)
class PipelineResult:
    name: str
    state: ManifoldState
    rows: Tuple[AuditRow, ...]


# A stated value and the quoted fragment it is read from.
Claim = Tuple[int, str]


def cite(where: str, fragment: str) -> str:
    """A section or lemma reference followed by the quoted source text."""
    return f'{where}, "{fragment}"'


def _invariant_rows(
    prefix: str, where: str, state: ManifoldState, stated: Tuple[Claim, Claim, Claim, Claim]
) -> List[AuditRow]:
    (e, e_text), (sigma, sigma_text), (c1sq, c1sq_text), (chi, chi_text) = stated
    return [
        AuditRow(f"{prefix}.e", cite(where, e_text), e, state.e),
        AuditRow(f"{prefix}.sigma", cite(where, sigma_text), sigma, state.sigma),
        AuditRow(f"{prefix}.c1sq", cite(where, c1sq_text), c1sq, state.c1sq),
        AuditRow(f"{prefix}.chi_h", cite(where, chi_text), chi, state.chi_h),
    ]


def _type_rows(prefix: str, state: ManifoldState, stated: Tuple[int, int], citation: str) -> List[AuditRow]:
    t = homeomorphism_type(state.invariants)
    return [
        AuditRow(f"{prefix}.type.a", citation, stated[0], t.a),
        AuditRow(f"{prefix}.type.b", citation, stated[1], t.b),
    ]


def _threshold_row(claim_id: str, citation: str, stated_n: int, b2_plus: int, sigma: int) -> AuditRow:
    k = exotic_threshold(b2_plus, sigma, sigma)
    return AuditRow(claim_id, citation, stated_n, threshold_n(k))


S_HAT_CLAIMS = (
    (16, r"$e(S\#\overline{\mathbb{CP}}^{2})=16$"),
    (4, r"$\sigma(S\#\overline{\mathbb{CP}}^{2}) = 4$"),
    (44, r"$c_1^{2}(S\#\overline{\mathbb{CP}}^{2}) = 44$"),
    (5, r"$\chi(S\#\overline{\mathbb{CP}}^{2}) = 5$"),
)


# === BUILDING BLOCKS ===

def S_rows() -> List[AuditRow]:
    cover = quadrangle_cover_surface(5)
    inv = cover.invariants
    fiber_genus = riemann_hurwitz_genus(5, 0, [5, 5, 5, 5])
    budget = "Prop. §2.3 (i)"
    return [
        AuditRow("S.c1sq", cite("§2.2", r"$K_S^2 = 9^2-4\cdot3^2 = 45$"), 45, inv.c1_sq),
        AuditRow("S.e", cite("§2.2", r"-20\cdot 10 e(\mathbb{CP}^1)+16 \cdot 15 = 15"), 15, inv.e),
        AuditRow("S.sigma", cite("§5.1", r"$\sigma(S) = 5$"), 5, inv.sigma),
        AuditRow("S.chi_h", cite("§2.2", r"we have $\chi_h(S) = 5$"), 5, inv.chi_h),
        AuditRow("S.q", cite("§2.2", r"the irregularity of $S_i$, $i \in \{1, 2, 4\}$, is $2$"), 2, cover.q),
        AuditRow("fibration.fiber_genus", cite("§2.3", r"\Rightarrow g=4"), 4, fiber_genus),
        AuditRow(
            "fibration.budget",
            cite(budget, r"$e(S)= 15$, $e(C) = -2$, $e(S_{gen}) = -6$"),
            3,
            singular_fiber_budget(15, -6, -2),
        ),
        AuditRow(
            "fibration.singular_fibers",
            cite(budget, r"the fibration $f: S \rightarrow C$ has three singular fibers"),
            3,
            cover.fibration.singular_fibers,
        ),
    ]


def tower_rows() -> List[AuditRow]:
    rows = []
    for m, (c1sq, e) in ((2, (45, 15)), (3, (225, 75))):
        computed = hirzebruch_tower(m)
        rows.append(
            AuditRow(f"tower({m}).c1sq", cite("§2.2 Remark", r"c_1^2(X(m))=45 \cdot 5^{m-2}"), c1sq, computed[0])
        )
        rows.append(AuditRow(f"tower({m}).e", cite("§2.2 Remark", r"e(X(m))=15 \cdot 5^{m-2}"), e, computed[1]))
    return rows


def pipeline_S_n_family(n: int) -> PipelineResult:
    """S(n) against the closed forms for its invariants."""
    state = catalog_block("S(n)", n)
    cover = quadrangle_cover_surface(n)
    prefix = f"S({n})"
    rows = (
        AuditRow(f"{prefix}.c1sq", cite("§5.4", r"${c_1}^2 (S(n))= 5(n-2)^{2}$"), 5 * (n - 2) ** 2, state.c1sq),
        AuditRow(f"{prefix}.e", cite("§5.4", r"$c_2(S(n))= 2n^{2} - 10n + 15$"), 2 * n * n - 10 * n + 15, state.e),
        AuditRow(f"{prefix}.sigma", cite("§5.4", r"$\sigma(S(n)) = 1/3(n^2 -10)$"), (n * n - 10) // 3, state.sigma),
        AuditRow(
            f"{prefix}.singular_fibers",
            cite("§5.4", "with three singular fibers"),
            3,
            cover.fibration.singular_fibers,
        ),
    )
    return PipelineResult(prefix, state, rows)


# === PIPELINES ===

def pipeline_Z3() -> PipelineResult:
    s_hat = catalog_block("S_hat")
    x31 = catalog_block("X(3,1)")
    z3 = symplectic_sum(s_hat, "Rtilde", x31, "Sigma6")
    where = "Lemma §4 (invariants of Z(3))"
    rows = _invariant_rows("S_hat", where, s_hat, S_HAT_CLAIMS)
    rows += _invariant_rows(
        "X31",
        where,
        x31,
        (
            (16, r"Since $e(X(3,1))=16$"),
            (-4, r"$\sigma(X(3,1))=-4$"),
            (20, r"$c_1^{2}(X(3,1)=20$"),
            (3, r"$\chi(X(3,1))=3$"),
        ),
    )
    rows += _invariant_rows(
        "Z3",
        where,
        z3,
        (
            (52, r"$e(Z(3))= 52$"),
            (0, r"$\sigma (Z(3)) = 0$"),
            (104, r"$c_1^{2}(Z(3)) = 104$"),
            (13, r"$\chi(Z(3)) = 13$"),
        ),
    )
    homeo = cite(
        "§4", r"is homeomorphic to $(2n-1)\CP\#(2n-1)\overline{\mathbb{CP}}^{2}$ for $n = 13$"
    )
    rows += _type_rows("Z3", z3, (25, 25), homeo)
    rows.append(_threshold_row("Z3.threshold_n", homeo, 13, z3.b2plus, z3.sigma))
    return PipelineResult("Z3", z3, tuple(rows))


def X24_blown() -> ManifoldState:
    x = catalog_block("X_{g,g+2}", 2)
    x = resolve(x, ["Sigma2", "S1", "S2"], into="Sigma6'")
    x = blow_up(x, on_surface="Sigma6'")
    x = blow_up(x, on_surface="Sigma6'", rename="Sigma6''")
    return declare_fact(
        x,
        Pi1Fact(
            FactKind.GENERATORS_DIE,
            "the loops a_i'', b_i'' are trivial in pi1 of the complement of Sigma6''",
            "Sigma6''",
        ),
    )


def pipeline_Z2() -> PipelineResult:
    s_hat = catalog_block("S_hat")
    x = X24_blown()
    z2 = symplectic_sum(s_hat, "Rtilde", x, "Sigma6''")
    where = "Lemma §4 (invariants of Z(2))"
    rows = _invariant_rows(
        "X24_blown",
        where,
        x,
        (
            (12, r"Since $e(X_{2,4} \# 2\overline{\mathbb{CP}}^{2})=12$"),
            (-4, r"$\sigma(X_{2,4} \# 2\overline{\mathbb{CP}}^{2})=-4$"),
            (16, r"$c_1^{2}(X_{2,4} \# 2\overline{\mathbb{CP}}^{2})=16$"),
            (2, r"$\chi(X_{2,4} \# 2\overline{\mathbb{CP}}^{2})=2$"),
        ),
    )
    rows += _invariant_rows(
        "Z2",
        where,
        z2,
        (
            (48, r"$e(Z(2))= 48$"),
            (0, r"$\sigma (Z(2)) = 0$"),
            (96, r"$c_1^{2}(Z(2)) = 96$"),
            (12, r"$\chi(Z(2)) = 12$"),
        ),
    )
    rows += _type_rows("Z2", z2, (23, 23), cite("§4", r"is homeomorphic to $23\CP\#23\overline{\mathbb{CP}}^{2}$"))
    rows.append(
        _threshold_row(
            "Z2.threshold_n",
            cite("§1", r"$(2n-1)\CP\#(2n-1)\overline{\mathbb{CP}}^{2}$ for any $n \geq 12$"),
            12,
            z2.b2plus,
            z2.sigma,
        )
    )
    return PipelineResult("Z2", z2, tuple(rows))


def pipeline_M14() -> PipelineResult:
    s_hat = catalog_block("S_hat")
    x46 = catalog_block("X_{4,6}")
    x = resolve(x46, ["Sigma2", "S1"], into="Sigma6'")
    x = blow_up(x, on_surface="Sigma6'", rename="Sigma6")
    m14 = symplectic_sum(s_hat, "Rtilde", x, "Sigma6")
    where = "Lemma §5.1"
    rows = _invariant_rows(
        "X46",
        where,
        x46,
        (
            (18, r"$e(X_{4,6}) = 18$"),
            (-2, r"$\sigma(X_{4,6}) = -2$"),
            (30, r"$c_1^2(X_{4,6}) = 30$"),
            (4, r"$\chi(X_{4,6}) = 4$"),
        ),
    )
    rows += _invariant_rows(
        "X46_blown",
        where,
        x,
        (
            (19, r"$e(X_{4,6} \# \overline{\mathbb{CP}}^{2}) = 19$"),
            (-3, r"$\sigma(X_{4,6} \# \overline{\mathbb{CP}}^{2}) = -3$"),
            (29, r"$c_1^2(X_{4,6} \# \overline{\mathbb{CP}}^{2}) = 29$"),
            (4, r"$\chi(X_{4,6} \# \overline{\mathbb{CP}}^{2}) = 4$"),
        ),
    )
    rows += _invariant_rows(
        "M14",
        where,
        m14,
        (
            (55, r"$e(M_{1,4}) = 55$"),
            (1, r"$\sigma(M_{1,4}) = 1$"),
            (113, r"$c_1^2(M_{1,4}) = 113$"),
            (14, r"$\chi(M_{1,4}) = 14$"),
        ),
    )
    rows += _type_rows(
        "M14", m14, (27, 26), cite("§5.1", r"is an exotic copy of $27\mathbb{CP}^{2} \# 26 \overline{\mathbb{CP}}^{2}$")
    )
    rows.append(
        _threshold_row(
            "M14.threshold_n",
            cite("§1 (i)", r"$(2n-1)\CP\#(2n-2)\overline{\mathbb{CP}}^{2}$ for any integer $n \geq 14$"),
            14,
            m14.b2plus,
            m14.sigma,
        )
    )
    return PipelineResult("M14", m14, tuple(rows))


def pipeline_M25() -> PipelineResult:
    """
    The stated values are kept verbatim; the computed ones come from the
    sum formulas, so the e, c1², χ_h, type and threshold rows mismatch.
    """
    s_hat = catalog_block("S_hat")
    x = catalog_block("X_{5,7}")
    x = internal_sum(
        x,
        "Sigma6",
        6,
        0,
        "internal sum of a punctured genus one surface and a punctured genus five surface",
    )
    x = declare_fact(
        x,
        Pi1Fact(
            FactKind.GENERATORS_DIE,
            cite("§5.2", r"a symplectic genus $6$ surface $\Sigma_6$ of square $0$ resulting from the internal sum"),
            "Sigma6",
        ),
    )
    x = declare_fact(
        x,
        Pi1Fact(
            FactKind.MERIDIAN_DIES,
            cite("Prop. §3.1", r"intersects $\Sigma$ transversally in exactly one point"),
            "Sigma6",
        ),
    )
    m25 = symplectic_sum(s_hat, "Rtilde", x, "Sigma6")

    rows = _invariant_rows(
        "X57",
        "Theorem §3.4 (ii), g = 5",
        x,
        (
            (22, r"$e(X_{g,g+2})= 4g+2$"),
            (-2, r"$\sigma (X_{g,g+2}) = - 2$"),
            (38, r"$c_1^{2}(X_{g,g+2}) = 8g-2$"),
            (5, r"$\chi(X_{g,g+2}) = g$"),
        ),
    )
    rows += _invariant_rows(
        "M25",
        "Lemma §5.2",
        m25,
        (
            (50, r"$e(M_{2,5}) = 50$"),
            (2, r"$\sigma(M_{2,5}) = 2$"),
            (106, r"$c_1^2(M_{2,5}) = 106$"),
            (13, r"$\chi(M_{2,5}) = 13$"),
        ),
    )
    rows += _type_rows(
        "M25", m25, (25, 23), cite("§5.2", r"an exotic copy of $25\mathbb{CP}^{2} \# 23 \overline{\mathbb{CP}}^{2}$")
    )
    threshold = cite("§1 (ii)", r"$(2n-1)\CP\#(2n-3)\overline{\mathbb{CP}}^{2}$ for any integer $n \geq 13$")
    rows.append(_threshold_row("M25.threshold_n.stated_type", threshold, 13, 25, 2))
    rows.append(_threshold_row("M25.threshold_n", threshold, 13, m25.b2plus, m25.sigma))
    return PipelineResult("M25", m25, tuple(rows))


def pipeline_M35() -> PipelineResult:
    s_hat = catalog_block("S_hat")
    x56 = catalog_block("X_{5,6}")
    m35 = symplectic_sum(s_hat, "Rtilde", x56, "Sigma6")
    where = "Lemma §5.3"
    rows = _invariant_rows(
        "X56",
        where,
        x56,
        (
            (21, r"$e(X_{5,6})= 21$"),
            (-1, r"$\sigma(X_{5,6})=-1$"),
            (39, r"$c_1^2(X_{5,6})=39$"),
            (5, r"$\chi(X_{5,6})=5$"),
        ),
    )
    rows += _invariant_rows(
        "M35",
        where,
        m35,
        (
            (57, r"$e(M_{3,5}) = 57$"),
            (3, r"$\sigma(M_{3,5}) = 3$"),
            (123, r"$c_1^2(M_{3,5}) = 123$"),
            (15, r"$\chi(M_{3,5}) = 15$"),
        ),
    )
    rows += _type_rows(
        "M35", m35, (29, 26), cite("§5.3", r"is an exotic copy of  $29\mathbb{CP}^{2} \# 26 \overline{\mathbb{CP}}^{2}$")
    )
    rows.append(
        _threshold_row(
            "M35.threshold_n",
            cite("§1 (iii)", r"$(2n-1)\CP\#(2n-4)\overline{\mathbb{CP}}^{2}$ for any integer $n \geq 15$"),
            15,
            m35.b2plus,
            m35.sigma,
        )
    )
    return PipelineResult("M35", m35, tuple(rows))


PIPELINES: Dict[str, Callable[[], PipelineResult]] = {
    "Z3": pipeline_Z3,
    "Z2": pipeline_Z2,
    "M14": pipeline_M14,
    "M25": pipeline_M25,
    "M35": pipeline_M35,
}


def pipeline_names() -> List[str]:
    return list(PIPELINES) + ["S_n_family(n)"]


def run_named_pipeline(name: str) -> PipelineResult:
    name = name.strip()
    if name in PIPELINES:
        result = PIPELINES[name]()
    else:
        parsed = parse_call_name(name)
        if parsed is None or parsed[0] != "S_n_family" or len(parsed[1]) != 1:
            raise UnknownPipeline(f"no pipeline named {name!r}")
        result = pipeline_S_n_family(parsed[1][0])
    mismatches = sum(r.status is AuditStatus.MISMATCH for r in result.rows)
    logger.info("pipeline %s: %d rows, %d mismatches", result.name, len(result.rows), mismatches)
    return result


def audit(only: Optional[str] = None) -> List[AuditRow]:
    """Every stated numeric claim, in a fixed order."""
    rows: List[AuditRow] = []
    rows += S_rows()
    rows += tower_rows()
    rows.append(
        AuditRow("S(7).budget", cite("§5.4", "with three singular fibers"), 3, singular_fiber_budget(43, -10, -4))
    )
    for n in S_FAMILY:
        rows += pipeline_S_n_family(n).rows
    for name in PIPELINES:
        rows += run_named_pipeline(name).rows
    if only is not None:
        rows = [r for r in rows if r.claim_id.startswith(only)]
    return rows
