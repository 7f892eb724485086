import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from core.catalog import CATALOG, catalog_block
from core.covers import COVER_SPECS
from core.domain import NON_INTEGRAL, AuditRow, LatticePoint, ManifoldState
from core.drivers import SCAN_DRIVERS, PoolScanDriver
from core.dsl import RunResult, parse, run
from core.errors import BadParameter, UnknownBlock, UnknownPipeline
from core.geography import ScanResult, Window, lattice_scan
from core.groups import AbelianGroupDescription, Presentation, TietzeStep, abelianize, tietze_simplify
from core.interfaces import IScanDriver, IStateRepository
from core.pipelines import PipelineResult, audit, pipeline_names, run_named_pipeline
from core.presentations import load_presentation
from core.repository import JsonStateRepository

logger = logging.getLogger(__name__)

PIPELINE_SUMMARIES = {
    "Z3": "S_hat summed with X(3,1) along Rtilde = Sigma6; exotic 25CP2#25CP2bar",
    "Z2": "S_hat summed with X_{2,4}#2CP2bar along Rtilde = Sigma6''; exotic 23CP2#23CP2bar",
    "M14": "S_hat summed with X_{4,6}#CP2bar along Rtilde = Sigma6; signature 1",
    "M25": "S_hat summed with X_{5,7} along Rtilde = Sigma6; signature 2, stated values audited",
    "M35": "S_hat summed with X_{5,6} along Rtilde = Sigma6; signature 3",
    "S_n_family(n)": "S(n) against the closed forms 5(n-2)^2, 2n^2-10n+15, (n^2-10)/3",
}
COVER_SUMMARIES = {
    "quadrangle(n)": "(Z/n)^2 cover branched over the complete quadrangle",
    "hirzebruch_tower(m)": "(Z/5)^m cover of the same arrangement",
}


class CalculusService:
    """
    Entry point shared by the command line and the dashboard: scripts,
    audits, scans and presentation tools, with persistence of bound states.
    """

    def __init__(self, repository: IStateRepository, scan_driver: IScanDriver, tietze_budget: int = 100_000):
        self.repository = repository
        self.scan_driver = scan_driver
        self.tietze_budget = tietze_budget

    # --- scripts ---

    def run_script(self, text: str) -> RunResult:
        return run(parse(text))

    def save_bindings(self, result: RunResult) -> List[str]:
        """Persists every bound manifold state; returns the names saved."""
        saved = []
        for name, value in result.bindings.items():
            if isinstance(value, ManifoldState):
                self.repository.save_state(name, value)
                saved.append(name)
        return saved

    # --- pipelines and audit ---

    def pipeline(self, name: str) -> PipelineResult:
        return run_named_pipeline(name)

    def audit(self, only: Optional[str] = None) -> List[AuditRow]:
        return audit(only)

    def catalog_listing(self) -> Dict[str, List[Tuple[str, str]]]:
        return {
            "blocks": [(info.name, info.summary) for info in CATALOG.values()],
            "pipelines": [(name, PIPELINE_SUMMARIES.get(name, "")) for name in pipeline_names()],
            "covers": [(name, COVER_SUMMARIES.get(name, "")) for name in COVER_SPECS],
        }

    # --- geography ---

    def base_point(self, name: str) -> LatticePoint:
        """Lattice point of a pipeline result or a catalog block."""
        try:
            state = run_named_pipeline(name).state
        except UnknownPipeline:
            try:
                state = catalog_block(name)
            except UnknownBlock:
                raise BadParameter(f"{name!r} is neither a pipeline nor a catalog block") from None
        if state.chi_h is NON_INTEGRAL:
            raise BadParameter(f"{name} has non-integral chi_h")
        return LatticePoint(state.chi_h, state.c1sq, realized_by=name)

    def scan(self, window: Window, base_names: Sequence[str]) -> ScanResult:
        bases = [self.base_point(n) for n in base_names]
        return lattice_scan(window, bases, self.scan_driver)

    # --- presentations ---

    def abelianize_file(self, path: Union[str, Path]) -> AbelianGroupDescription:
        return abelianize(load_presentation(path))

    def simplify_file(
        self, path: Union[str, Path], budget: Optional[int] = None
    ) -> Tuple[Presentation, Tuple[TietzeStep, ...]]:
        return tietze_simplify(load_presentation(path), budget or self.tietze_budget)

    # --- saved states ---

    def saved_states(self) -> Dict[str, dict]:
        return self.repository.load_all_states()

    def delete_state(self, name: str) -> None:
        self.repository.delete_state(name)


def make_scan_driver(settings: Dict[str, Any]) -> IScanDriver:
    kind = settings.get("scan_driver", "serial")
    if kind not in SCAN_DRIVERS:
        raise BadParameter(f"unknown scan driver {kind!r}; choose one of {sorted(SCAN_DRIVERS)}")
    if kind == "pool":
        return PoolScanDriver(int(settings.get("scan_workers", 4)))
    return SCAN_DRIVERS[kind]()


def get_calculus_service(settings: Dict[str, Any]) -> CalculusService:
    repository = JsonStateRepository(Path(settings["states_file"]).expanduser())
    return CalculusService(repository, make_scan_driver(settings), int(settings["tietze_budget"]))
