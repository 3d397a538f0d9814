from pathlib import Path

import pytest

from cwdoppler.config import RadarConfig

SCENARIO_DIR = Path(__file__).resolve().parent.parent / "scenarios"


@pytest.fixture
def config():
    return RadarConfig()


@pytest.fixture
def scenario_dir():
    return SCENARIO_DIR


def pytest_terminal_summary(terminalreporter):
    import sys

    module = sys.modules.get("test_acceptance")
    if module is None or not module.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(module.RESULTS, key=lambda s: int(s.split(" C")[1].split()[0])):
        terminalreporter.write_line(line)
