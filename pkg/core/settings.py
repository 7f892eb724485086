import json
from pathlib import Path
from typing import Any, Dict

DEFAULT_SETTINGS_PATH = Path("~/.fourfold/settings.json").expanduser()

DEFAULTS: Dict[str, Any] = {
    "tietze_budget": 100_000,
    "scan_driver": "serial",  # serial, pool
    "scan_workers": 4,
    "states_file": "~/.fourfold/states.json",
    "log_level": "WARNING",
}


def load_settings(settings_path: Path = DEFAULT_SETTINGS_PATH) -> Dict[str, Any]:
    """Loads settings from a JSON file, stored keys over the defaults."""
    settings = dict(DEFAULTS)
    settings_path = Path(settings_path).expanduser()
    if settings_path.exists():
        with open(settings_path, "r", encoding="utf-8") as f:
            settings.update(json.load(f))
    return settings


def save_settings(settings: Dict[str, Any], settings_path: Path = DEFAULT_SETTINGS_PATH) -> None:
    """Saves settings to a JSON file."""
    settings_path = Path(settings_path).expanduser()
    settings_path.parent.mkdir(parents=True, exist_ok=True)
    with open(settings_path, "w", encoding="utf-8") as f:
        json.dump(settings, f, indent=4)
