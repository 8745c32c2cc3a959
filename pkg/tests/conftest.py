import numpy as np
import pytest

from ann.training import GrowthPolicy
from dynamics.frame import paper_frame
from dynamics.rocking import paper_block
from signals.records import GroundMotionRecord
from signals.synthetic import synthetic_record

AT2_TEXT = """PEER NGA STRONG MOTION DATABASE RECORD
TEST EVENT 1/1/2000, STATION A, 000
ACCELERATION TIME SERIES IN UNITS OF G
NPTS=    7, DT=   .0100 SEC
  0.0000000E+00  0.1000000E-01 -0.2500000E-01  0.5000000E-01 -0.1000000E+00
  0.7500000E-01 -0.1250000E-01
"""


@pytest.fixture
def at2_text():
    return AT2_TEXT


@pytest.fixture
def at2_file(tmp_path):
    path = tmp_path / "RSN0001_TEST.AT2"
    path.write_text(AT2_TEXT)
    return path


@pytest.fixture(scope="session")
def frame():
    return paper_frame()


@pytest.fixture(scope="session")
def block():
    return paper_block()


@pytest.fixture(scope="session")
def short_record():
    return synthetic_record(1, duration=4.0, dt=0.01)


@pytest.fixture
def zero_record():
    return GroundMotionRecord("ZERO", 0.01, np.zeros(301))


@pytest.fixture
def quick_policy():
    return GrowthPolicy(
        lr0=0.05, lr_halve_patience=2, lr_min=0.05 / 4, pretrain_epochs=2, frozen_iterations=50,
        max_growth_steps=2, max_epochs=12,
    )
