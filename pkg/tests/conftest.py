import numpy as np
import pytest

from sphlb import sht


def random_spectral(bandlimit, rng, scale=1.0):
    """Random band-limited real field (coefficients), realness implied."""
    c = sht.zero_field(bandlimit)
    for ell in range(bandlimit + 1):
        c.coeffs[ell, 0] = scale * rng.standard_normal()
        for m in range(1, ell + 1):
            c.coeffs[ell, m] = scale * complex(rng.standard_normal(),
                                               rng.standard_normal())
    return c


@pytest.fixture(scope="session")
def plan15():
    return sht.build_plan(15)


@pytest.fixture(scope="session")
def plan31():
    return sht.build_plan(31)
