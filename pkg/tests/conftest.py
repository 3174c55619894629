import numpy as np
import pytest

from afdm_im import ModemConfig, choose_c1, get_profile


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def two_path():
    return get_profile("2-path")


@pytest.fixture
def small_config(two_path):
    # (32,8,1,2) with c1 for alpha_max = 1, k_eps = 1
    return ModemConfig(32, 8, 1, 2, choose_c1(1, 1, 32, two_path.delays, min_gap=1), 0.0, two_path.l_max)


def pytest_terminal_summary(terminalreporter):
    from tests import acceptance_log

    if acceptance_log.LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(acceptance_log.LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
