import json
import os

import pytest
from hypothesis import HealthCheck, settings

from core.settings import DEFAULTS

settings.register_profile("default", max_examples=200)
settings.register_profile(
    "acceptance",
    max_examples=10_000,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture
def settings_file(tmp_path):
    """A settings file pointing the state store into a temporary directory."""
    data = dict(DEFAULTS)
    data["states_file"] = str(tmp_path / "states.json")
    path = tmp_path / "settings.json"
    path.write_text(json.dumps(data), encoding="utf-8")
    return path
