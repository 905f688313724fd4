import pytest

from anchorsim import AnchorGeometry, load_media
from anchorsim.media import generic_sand_profile


@pytest.fixture(scope="session")
def generic_sand():
    return generic_sand_profile()


@pytest.fixture(scope="session")
def loose_sand():
    """The bundled calibrated profile: tip/side ratio 16, rho 2.5."""
    return load_media("loose_sand_calibrated")


@pytest.fixture
def bench_extender():
    """The d = 15 mm, 15 cm hairless tip extender used on the bench."""
    return AnchorGeometry(radius=0.0075, length=0.15)


@pytest.fixture
def bench_intruder():
    return AnchorGeometry(radius=0.0075, length=0.15, mode="rigid_intruder")
