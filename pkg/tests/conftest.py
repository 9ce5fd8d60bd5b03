import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from srings import build, catalog, sring as sr
from srings.gfp import GroupContext


@pytest.fixture(scope="session")
def ctx33():
    return GroupContext(3, 3)


@pytest.fixture(scope="session")
def ctx32():
    return GroupContext(3, 2)


@pytest.fixture(scope="session")
def exceptional3():
    return catalog.exceptional_sring(3)


@pytest.fixture(scope="session")
def qh33(ctx33):
    return sr.full_group_algebra(ctx33)


@pytest.fixture(scope="session")
def corpus3():
    from srings.suites import corpus_z3

    return corpus_z3(3)
