import random

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from solenoid.farey import S, T, IDENTITY, DOE, Moebius
from solenoid.subgroup import commutator_subgroup, principal_congruence, full_group

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def word_element(letters) -> Moebius:
    g = IDENTITY
    for x in letters:
        g = g @ (S, T, T.inverse())[x]
    return g


moebius = st.lists(st.integers(0, 2), max_size=12).map(word_element)
farey_edges = moebius.map(lambda g: g.edge(DOE))


@pytest.fixture(scope="session")
def G():
    return commutator_subgroup()


@pytest.fixture(scope="session")
def gamma2():
    return principal_congruence(2)


@pytest.fixture(scope="session")
def gamma3():
    return principal_congruence(3)


@pytest.fixture(scope="session")
def full():
    return full_group()


@pytest.fixture
def rng():
    return random.Random(20240607)
