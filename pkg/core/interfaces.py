from abc import ABC, abstractmethod
from typing import Dict, List, Sequence

from core.domain import LatticePoint, ManifoldState
from core.geography import ScanRow, Window


class IScanDriver(ABC):
    """Abstract Base Class for lattice scan drivers."""

    @abstractmethod
    def scan(self, window: Window, bases: Sequence[LatticePoint]) -> List[ScanRow]:
        """
        Marks each point of the window as realized or not.

        Args:
            window (Window): A nonempty rectangle of (chi_h, c1_sq) points.
            bases (Sequence[LatticePoint]): Realized points whose extension regions count.

        Returns:
            List[ScanRow]: One row per window point, chi ascending then c ascending.
        """
        pass


class IStateRepository(ABC):
    """Abstract Base Class for persisted manifold states."""

    @abstractmethod
    def load_all_states(self) -> Dict[str, dict]:
        """
        Loads all stored states.

        Returns:
            Dict[str, dict]: Serialized states keyed by their binding name.
        """
        pass

    @abstractmethod
    def save_state(self, name: str, state: ManifoldState) -> None:
        """
        Saves a single state under a binding name.

        Args:
            name (str): The binding name.
            state (ManifoldState): The state to serialize.
        """
        pass

    @abstractmethod
    def delete_state(self, name: str) -> None:
        """
        Deletes the state stored under a binding name.

        Args:
            name (str): The binding name of the state to delete.
        """
        pass
