import pytest

from src.errors import HomogeneityError, OracleBoundError
from src.grading import Bidegree, Tau
from src.milnor import (
    SteenrodElt,
    all_products,
    check_associativity,
    dual_pairing_product,
    enumerate_basis,
    first_tau_power_degree,
    may_filtration,
    milnor,
    milnor_bidegree,
    milnor_product,
)


def P(*r, tau=0):
    return SteenrodElt.basis(milnor(*r), tau)


def test_bidegrees():
    assert milnor_bidegree(milnor(1)) == Bidegree(1, 0)
    assert milnor_bidegree(milnor(2)) == Bidegree(2, 1)
    assert milnor_bidegree(milnor(0, 1)) == Bidegree(3, 1)
    assert milnor_bidegree(milnor(1, 1)) == Bidegree(4, 1)
    assert milnor(2, 0, 0) == (2,)


def test_basis_sizes():
    assert [len(enumerate_basis(p)) for p in range(8)] == [1, 1, 1, 2, 2, 2, 3, 4]


def test_may_filtration():
    assert may_filtration(milnor(3)) == 2
    assert may_filtration(milnor(0, 2)) == 2
    assert may_filtration(milnor(1, 1)) == 3


def test_small_products():
    assert milnor_product((1,), (1,)).is_zero
    assert milnor_product((1,), (2,)) == P(3)
    assert milnor_product((2,), (1,)) == P(3) + P(0, 1)
    # Sq2 Sq2 = tau Sq3 Sq1
    assert milnor_product((2,), (2,)) == P(1, 1, tau=1)


def test_product_keeps_bidegree_for_zero():
    zero = milnor_product((1,), (1,))
    assert zero.bidegree == Bidegree(2, 0)


def test_inhomogeneous_sum_rejected():
    with pytest.raises(HomogeneityError):
        P(1) + P(2)
    with pytest.raises(HomogeneityError):
        SteenrodElt({milnor(3): Tau(0), milnor(0, 1): Tau(1)})


def test_unit_and_associativity_low_degrees():
    unit = P()
    for p in range(6):
        for R in enumerate_basis(p):
            assert unit * P(*R) == P(*R)
            assert P(*R) * unit == P(*R)
    for a in enumerate_basis(2) + enumerate_basis(3):
        for b in enumerate_basis(2):
            for c in enumerate_basis(1) + enumerate_basis(3):
                x, y, z = P(*a), P(*b), P(*c)
                assert (x * y) * z == x * (y * z)


def test_associativity_covers_every_triple():
    top = 8
    expected = sum(
        len(enumerate_basis(a)) * len(enumerate_basis(b)) * len(enumerate_basis(c))
        for a in range(1, top + 1)
        for b in range(1, top + 1)
        for c in range(1, top + 1)
        if a + b + c <= top
    )
    checked, failures = check_associativity(top)
    assert checked == expected == 131
    assert failures == []


def test_product_matches_dual_pairing():
    for R, S, _ in all_products(10):
        assert milnor_product(R, S) == dual_pairing_product(R, S, max_degree=10), (R, S)


def test_oracle_bound():
    with pytest.raises(OracleBoundError):
        dual_pairing_product((4,), (4,), max_degree=6)


@pytest.mark.slow
def test_tau_squared_first_appears_in_degree_26():
    assert first_tau_power_degree(2, max_degree=26) == 26
