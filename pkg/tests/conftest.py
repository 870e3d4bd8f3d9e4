import pytest

from interpsched.domain import group_part_timers
from interpsched.fixtures import make_t1, t1_scenario


@pytest.fixture
def t1():
    return make_t1()


@pytest.fixture
def t1_scen():
    return t1_scenario()


@pytest.fixture
def t1_template(t1):
    return group_part_timers(t1)
