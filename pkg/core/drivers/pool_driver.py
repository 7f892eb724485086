import logging
from concurrent.futures import ProcessPoolExecutor
from typing import List, Sequence

from core.domain import LatticePoint
from core.errors import BadParameter
from core.geography import ScanRow, Window, scan_rows
from core.interfaces import IScanDriver

logger = logging.getLogger(__name__)


def _scan_chunk(args) -> List[ScanRow]:
    window, bases = args
    return scan_rows(window, bases)


class PoolScanDriver(IScanDriver):
    """
    Splits the window into χ bands and scans them in worker processes.
    Bands are merged in χ order, so rows match the serial driver exactly.
    """

    def __init__(self, workers: int = 4):
        if workers < 1:
            raise BadParameter(f"scan_workers must be >= 1, got {workers}")
        self.workers = workers

    def scan(self, window: Window, bases: Sequence[LatticePoint]) -> List[ScanRow]:
        bands = window.split(self.workers)
        if len(bands) <= 1:
            return scan_rows(window, bases)
        logger.debug("scanning %d bands on %d workers", len(bands), self.workers)
        rows: List[ScanRow] = []
        with ProcessPoolExecutor(max_workers=self.workers) as pool:
            for chunk in pool.map(_scan_chunk, [(band, tuple(bases)) for band in bands]):
                rows.extend(chunk)
        return rows
