import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from _acceptance_log import LINES as ACCEPTANCE_LINES  # noqa: E402
from fracsparse import Kernel, SparseSignal  # noqa: E402

HW_THETA = np.pi / 4
HW_T = 0.062
HW_LOCATIONS = (0.50, 0.83)
HW_AMPLITUDES = (0.748, 0.891)
HW_N = 16


@pytest.fixture
def hw_signal():
    return SparseSignal(HW_AMPLITUDES, HW_LOCATIONS)


@pytest.fixture
def hw_kernel():
    return Kernel.sinc(HW_T)


@pytest.fixture
def rng():
    return np.random.default_rng(20240429)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
