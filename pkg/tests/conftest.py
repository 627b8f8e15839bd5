from __future__ import annotations

import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from sl2cq import ScalarConfig, Sl2Cq  # noqa: E402


@pytest.fixture(scope="session")
def cyc3():
    """n = 2, q_12 = zeta_3."""
    return ScalarConfig.cyclotomic_upper(2, 3, {(1, 2): 1})


@pytest.fixture(scope="session")
def cyc4():
    """n = 2, q_12 = zeta_4 = i."""
    return ScalarConfig.cyclotomic_upper(2, 4, {(1, 2): 1})


@pytest.fixture(scope="session")
def gen2():
    return ScalarConfig.generic(2)


@pytest.fixture(scope="session")
def alg3(cyc3):
    return Sl2Cq(cyc3)


@pytest.fixture(scope="session")
def alg1():
    return Sl2Cq(ScalarConfig.rational(1))
