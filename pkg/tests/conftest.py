import pytest

from mnseries.groups import IntegersGroup
from mnseries.ideals import ideal_closure, make_ideal
from mnseries.rings import (check_automorphism, ring_gf4, ring_product,
                            ring_trivial_extension, ring_zn)
from mnseries.series import trivial_twist, twist_from_spec


@pytest.fixture(scope="session")
def z2():
    return ring_zn(2)


@pytest.fixture(scope="session")
def z4():
    return ring_zn(4)


@pytest.fixture(scope="session")
def klein():
    return ring_product(ring_zn(2), ring_zn(2))


@pytest.fixture(scope="session")
def gf4():
    return ring_gf4()


@pytest.fixture(scope="session")
def tz4():
    return ring_trivial_extension(ring_zn(4))


@pytest.fixture(scope="session")
def u_z4(z4):
    """The ideal generated by 2 in Z4."""
    return ideal_closure(z4, [2], "twosided")


@pytest.fixture(scope="session")
def u_tz4(tz4):
    """{(0, m)} inside the trivial extension of Z4; pair (a, b) has id 4a + b."""
    return ideal_closure(tz4, [1], "twosided")


@pytest.fixture(scope="session")
def tw_z4(z4):
    return trivial_twist(z4)


@pytest.fixture(scope="session")
def tw_klein(klein):
    return trivial_twist(klein)


@pytest.fixture(scope="session")
def tw_z4_tau(z4):
    """tau(m, n) = 3^(m n) over Z4 with trivial sigma."""
    return twist_from_spec(z4, IntegersGroup(), {
        "sigma": "identity",
        "tau": {"kind": "unit_power", "unit": 3, "exponent_rule": "product"}})


@pytest.fixture(scope="session")
def tw_z4_tau_corrupt(z4):
    """The previous tau with tau(1, 1) patched to 1, breaking the cocycle."""
    return twist_from_spec(z4, IntegersGroup(), {
        "sigma": "identity",
        "tau": {"kind": "patched",
                "base": {"kind": "unit_power", "unit": 3, "exponent_rule": "product"},
                "overrides": [[1, 1, 1]]}})


@pytest.fixture(scope="session")
def tw_klein_swap(klein):
    """Klein ring with sigma_n = swap^n, tau = 1."""
    return twist_from_spec(klein, IntegersGroup(), {
        "sigma": {"generator": [0, 2, 1, 3]}, "tau": {"kind": "one"}})


@pytest.fixture(scope="session")
def tw_gf4_frob(gf4):
    return twist_from_spec(gf4, IntegersGroup(), {
        "sigma": {"generator": [0, 1, 3, 2]}, "tau": {"kind": "one"}})


@pytest.fixture(scope="session")
def frobenius(gf4):
    return check_automorphism(gf4, [0, 1, 3, 2])


@pytest.fixture(scope="session")
def swap(klein):
    return check_automorphism(klein, [0, 2, 1, 3])


@pytest.fixture(scope="session")
def zero_ideal_z4(z4):
    return make_ideal(z4, {0}, "twosided")
