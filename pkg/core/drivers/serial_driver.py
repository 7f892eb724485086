from typing import List, Sequence

from core.domain import LatticePoint
from core.geography import ScanRow, Window, scan_rows
from core.interfaces import IScanDriver


class SerialScanDriver(IScanDriver):
    """Scans the window in the calling process."""

    def scan(self, window: Window, bases: Sequence[LatticePoint]) -> List[ScanRow]:
        return scan_rows(window, bases)
