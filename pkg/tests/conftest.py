import os
import tempfile

# log files of the test session go to a throwaway directory; must be set before app imports
os.environ.setdefault("CAG_LOG_DIR", tempfile.mkdtemp(prefix="cag-logs-"))

import numpy as np
import pytest

from app.configs.network_profiles import tiny_profile
from app.network.skeleton_graph import build_skeleton
from app.services.synthetic_walker import SyntheticWalkerService
from app.utils.model_variant_enum import SkeletonName

def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="run desk-scale acceptance tests")

def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)

@pytest.fixture
def rng():
    return np.random.default_rng(20240611)

@pytest.fixture
def tiny_config():
    return tiny_profile()

@pytest.fixture
def coco17():
    return build_skeleton(SkeletonName.COCO17)

@pytest.fixture
def small_records(coco17):
    """
    4 subjects x 3 views x 2 sequences (nm-01, nm-02) of 16 frames.
    """
    return list(SyntheticWalkerService(coco17).generate(subjects=4, views=3, sequences=2, frames=16, seed=11))
