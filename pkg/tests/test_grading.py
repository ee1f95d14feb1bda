import pytest

from src.errors import HomogeneityError, IntegrityError
from src.grading import ONE, ZERO, Bidegree, ExtDegree, MayDegree, Tau, TauCoeff, chow_weight


def test_bidegree_addition_and_chow_weight():
    d = Bidegree(2, 1) + Bidegree(1, 0)
    assert d == Bidegree(3, 1)
    assert chow_weight(d) == -1
    assert Bidegree(4, 2).chow == 0


def test_bidegree_overflow_is_integrity_error():
    with pytest.raises(IntegrityError):
        Bidegree(2**31 - 1, 0) + Bidegree(1, 0)


def test_ext_degree_stem_is_derived():
    d = ExtDegree.from_stem(3, 8, 5)
    assert d.t == 11
    assert d.stem == 8
    with pytest.raises(ValueError):
        ExtDegree(-1, 0, 0)


def test_may_degree_rejects_m_below_f():
    assert MayDegree(4, 4, 2, 2) + MayDegree(1, 1, 1, 1) == MayDegree(5, 5, 3, 3)
    with pytest.raises(ValueError):
        MayDegree(1, 0, 2, 0)


def test_tau_coefficients():
    assert Tau(2) * Tau(3) == Tau(5)
    assert (ZERO * Tau(3)).is_zero
    assert Tau(1) + Tau(1) == ZERO
    assert Tau(2) + ZERO == Tau(2)
    assert str(ONE) == "1"
    assert str(Tau(1)) == "tau"
    assert not ZERO


def test_tau_sum_of_different_powers_is_rejected():
    with pytest.raises(HomogeneityError):
        Tau(1) + Tau(2)
    with pytest.raises(ValueError):
        TauCoeff(-1)
