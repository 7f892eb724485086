from core.catalog import catalog_block
from core.constructions import blow_up, knot_surgery, luttinger, resolve, symplectic_sum
from core.covers import hirzebruch_tower, quadrangle_cover_surface
from core.domain import InvariantVector, LuttingerSpec, ManifoldState, TrackedSurface
from core.dsl import parse, run
from core.geography import exotic_threshold, extend, lattice_scan
from core.groups import Presentation, Word, abelianize, tietze_simplify
from core.invariants import consistency_check, derive, homeomorphism_type
from core.pipelines import audit, run_named_pipeline
from core.services import CalculusService, get_calculus_service

__all__ = [
    "CalculusService",
    "InvariantVector",
    "LuttingerSpec",
    "ManifoldState",
    "Presentation",
    "TrackedSurface",
    "Word",
    "abelianize",
    "audit",
    "blow_up",
    "catalog_block",
    "consistency_check",
    "derive",
    "exotic_threshold",
    "extend",
    "get_calculus_service",
    "hirzebruch_tower",
    "homeomorphism_type",
    "knot_surgery",
    "lattice_scan",
    "luttinger",
    "parse",
    "quadrangle_cover_surface",
    "resolve",
    "run",
    "run_named_pipeline",
    "symplectic_sum",
    "tietze_simplify",
]
