import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(__file__))

from helpers import make_grid  # noqa: E402


@pytest.fixture
def flat_pair():
    dtm = make_grid(np.full((20, 20), 50.0))
    return dtm, dtm
