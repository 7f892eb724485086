import json
from pathlib import Path
from typing import Any, Dict

from core.domain import NON_INTEGRAL, ManifoldState, pi1_summary
from core.interfaces import IStateRepository


def to_json_dict(state: ManifoldState) -> Dict[str, Any]:
    """Serializes a state with a fixed field order."""
    return {
        "e": state.e,
        "sigma": state.sigma,
        "c1sq": state.c1sq,
        "chi_h": None if state.chi_h is NON_INTEGRAL else state.chi_h,
        "b2plus": state.b2plus,
        "b2minus": state.b2minus,
        "spin": state.spin,
        "pi1": pi1_summary(state),
        "surfaces": [
            {
                "name": s.name,
                "genus": s.genus,
                "square": s.self_intersection,
                "tags": sorted(t.value for t in s.tags),
            }
            for s in state.surfaces
        ],
        "provenance": [str(p) for p in state.provenance],
    }


def dumps_state(state: ManifoldState) -> str:
    return json.dumps(to_json_dict(state), indent=2)


class JsonStateRepository(IStateRepository):
    """
    Concrete implementation of IStateRepository that keeps serialized
    states in a local JSON file, keyed by binding name.
    """

    def __init__(self, storage_file: Path):
        self.storage_file = Path(storage_file).expanduser()
        self.states: Dict[str, dict] = self._load_from_file()

    def _load_from_file(self) -> Dict[str, dict]:
        if not self.storage_file.exists():
            return {}
        with open(self.storage_file, "r", encoding="utf-8") as f:
            return json.load(f)

    def _save_to_file(self) -> None:
        self.storage_file.parent.mkdir(parents=True, exist_ok=True)
        with open(self.storage_file, "w", encoding="utf-8") as f:
            json.dump(self.states, f, indent=2)

    def load_all_states(self) -> Dict[str, dict]:
        return self.states

    def save_state(self, name: str, state: ManifoldState) -> None:
        self.states[name] = to_json_dict(state)
        self._save_to_file()

    def delete_state(self, name: str) -> None:
        if name in self.states:
            del self.states[name]
            self._save_to_file()
