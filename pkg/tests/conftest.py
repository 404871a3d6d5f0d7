import pytest

from matroid_hom.catalog import mk4, theta
from matroid_hom.core import GroundSet, Matroid, uniform
from matroid_hom.maps import GroundMap


@pytest.fixture
def u24() -> Matroid:
    return uniform(2, 4, labels=list("abcd"))


@pytest.fixture
def u13() -> Matroid:
    return uniform(1, 3, labels=list("xyz"))


@pytest.fixture
def u12() -> Matroid:
    return uniform(1, 2, labels=list("xy"))


@pytest.fixture
def theta_m() -> Matroid:
    return theta()


@pytest.fixture
def mk4_m() -> Matroid:
    return mk4()


@pytest.fixture
def two_circuits() -> Matroid:
    ground = GroundSet(tuple("abcd"))
    return Matroid(ground, (ground.mask("a", "b"), ground.mask("c", "d")))


@pytest.fixture
def collapse(theta_m: Matroid, u13: Matroid) -> GroundMap:
    """a1,a2 -> x; b1,b2 -> y; c1,c2 -> z."""
    return GroundMap.from_labels(
        theta_m.ground,
        u13.ground,
        {"a1": "x", "a2": "x", "b1": "y", "b2": "y", "c1": "z", "c2": "z"},
    )


@pytest.fixture
def fold(theta_m: Matroid, u12: Matroid) -> GroundMap:
    """a1,b1,c1 -> x; a2,b2,c2 -> y."""
    return GroundMap.from_labels(
        theta_m.ground,
        u12.ground,
        {"a1": "x", "b1": "x", "c1": "x", "a2": "y", "b2": "y", "c2": "y"},
    )
