import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from unwindsim import RunConfig, Scenario, data_path
from unwindsim.jsonio import dump_json, golden_regen_enabled, load_json

GOLDEN_DIR = Path(__file__).parent / "goldens"


@pytest.fixture(scope="session")
def campus_scenario() -> Scenario:
    return Scenario.from_doc(load_json(data_path("campus_lite.json"), expect_format="scenario/1"))


@pytest.fixture(scope="session")
def default_config() -> RunConfig:
    return RunConfig.from_doc(
        load_json(data_path("default_config.json"), expect_format="runconfig/1")
    )


def golden_doc(name: str, producer, compact: bool = False) -> dict:
    """Load a frozen golden document, producing it only when regeneration
    is explicitly requested (UNWIND_SIM_GOLDEN_REGEN=1) or it is absent."""
    path = GOLDEN_DIR / name
    if golden_regen_enabled() or not path.exists():
        GOLDEN_DIR.mkdir(exist_ok=True)
        dump_json(producer(), path, compact=compact)
    return load_json(path)


def golden_path(name: str) -> Path:
    return GOLDEN_DIR / name
