import random

import pytest
from hypothesis import settings

from bboxlab import BBox

settings.register_profile("default", max_examples=200, deadline=None)
settings.load_profile("default")


@pytest.fixture
def rng():
    return random.Random(20240611)


@pytest.fixture
def fixtures_dir():
    from pathlib import Path

    return Path(__file__).parent / "fixtures"


def boxes_strategy():
    from hypothesis import strategies as st

    coord = st.floats(-50, 50, allow_nan=False)
    size = st.floats(0.01, 40, allow_nan=False)
    return st.builds(BBox, coord, coord, size, size)
