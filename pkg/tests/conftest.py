import numpy as np
import pytest

from helpers import ACCEPTANCE_RESULTS


@pytest.fixture
def rng():
    return np.random.default_rng(20241018)


def pytest_terminal_summary(terminalreporter, config):
    results = config.stash.get(ACCEPTANCE_RESULTS, {})
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        terminalreporter.write_line(results[number])
