import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from stcpm import CorrectionBank, CpmConfig  # noqa: E402


@pytest.fixture
def rng():
    return np.random.default_rng(20260415)


@pytest.fixture
def cfg():
    """Simulation setting: M=4, 2REC, h=1/2."""
    return CpmConfig(M=4, m0=1, p=2, gamma=2)


@pytest.fixture
def cfg08():
    return CpmConfig(M=4, m0=4, p=5, gamma=2)


@pytest.fixture(params=[1, 2, 3])
def bank(request):
    return CorrectionBank(request.param)
