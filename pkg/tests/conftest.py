import numpy as np
import pytest

from qaclcd.group_algebra import GroupSpec
from qaclcd.idempotents import build_idempotents


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def sys35():
    return build_idempotents(GroupSpec((5,)), 3)


@pytest.fixture(scope="session")
def sys37():
    return build_idempotents(GroupSpec((7,)), 3)


@pytest.fixture(scope="session")
def sys25():
    return build_idempotents(GroupSpec((5,)), 2)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = next((m for name, m in sys.modules.items() if name.endswith("test_acceptance")), None)
    if mod is None or not getattr(mod, "RESULTS", None):
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.report_lines():
        terminalreporter.write_line(line)
