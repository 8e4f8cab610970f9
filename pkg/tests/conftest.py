import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from fairlattice import Dataset


@pytest.fixture
def tiny_m1():
    # rows: (a=0, y=1), (a=0, y=0), (a=1, y=1)
    return Dataset(np.array([[0], [0], [1]], dtype=np.uint8),
                   np.array([1, 0, 1], dtype=np.uint8))


@pytest.fixture
def tiny_m1_confusion():
    # rows: (0, y=1, yhat=1), (0, y=0, yhat=1), (1, y=1, yhat=0)
    return Dataset(np.array([[0], [0], [1]], dtype=np.uint8),
                   np.array([1, 0, 1], dtype=np.uint8),
                   np.array([1, 1, 0], dtype=np.uint8))
