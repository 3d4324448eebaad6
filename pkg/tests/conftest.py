import os
import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session", autouse=True)
def isolated_cache(tmp_path_factory):
    """Keep the Weingarten cache of the test run out of the user's cache directory."""
    old = os.environ.get("WORDINT_CACHE")
    os.environ["WORDINT_CACHE"] = str(tmp_path_factory.mktemp("wg-cache"))
    yield
    if old is None:
        os.environ.pop("WORDINT_CACHE", None)
    else:
        os.environ["WORDINT_CACHE"] = old


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
