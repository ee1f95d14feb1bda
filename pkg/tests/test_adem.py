import pytest

from src.adem import (
    AdmissibleElt,
    SqWord,
    adem_reduce,
    admissible_basis,
    admissible_to_milnor,
    format_word,
    is_admissible,
    milnor_to_admissible,
    parse_admissible,
    parse_milnor,
)
from src.grading import Tau
from src.milnor import SteenrodElt, enumerate_basis, milnor


def test_admissible_basis_matches_milnor_basis_size():
    for p in range(16):
        assert len(admissible_basis(p)) == len(enumerate_basis(p)), p
    assert admissible_basis(4) == ((4,), (3, 1))
    assert all(is_admissible(w) for w in admissible_basis(12))


def test_motivic_adem_relations():
    assert parse_admissible("Sq2 Sq2") == parse_admissible("tau Sq3 Sq1")
    assert parse_admissible("Sq1 Sq1").is_zero
    assert parse_admissible("Sq1 Sq2") == parse_admissible("Sq3")
    assert parse_admissible("Sq2 Sq3") == parse_admissible("Sq5 + Sq4 Sq1")


def test_reduce_keeps_tau_coefficient():
    x = adem_reduce(SqWord((2, 2), Tau(1)))
    assert x.terms == {(3, 1): Tau(2)}


def test_admissible_product_matches_milnor_product():
    for p in range(1, 7):
        for q in range(1, 7):
            for a in admissible_basis(p):
                for b in admissible_basis(q):
                    x = AdmissibleElt({a: Tau(0)})
                    y = AdmissibleElt({b: Tau(0)})
                    assert admissible_to_milnor(x * y) == admissible_to_milnor(x) * admissible_to_milnor(y)


def test_basis_change_round_trip():
    for p in range(12):
        for R in enumerate_basis(p):
            x = SteenrodElt.basis(R)
            assert admissible_to_milnor(milnor_to_admissible(x)) == x


def test_parse_milnor_product_and_format():
    assert parse_milnor("P(2) * P(2)") == SteenrodElt.basis(milnor(1, 1), 1)
    assert parse_milnor("tau P(1,1)") == SteenrodElt.basis(milnor(1, 1), 1)
    assert format_word((4, 2, 1)) == "Sq4 Sq2 Sq1"
    assert str(parse_admissible("Sq2 Sq2")) == "tau Sq3 Sq1"


def test_parse_milnor_product_binds_tighter_than_sum():
    assert parse_milnor("P(3) + P(2)*P(1)") == SteenrodElt.basis(milnor(0, 1))
    assert parse_milnor("P(2)*P(1) + P(0,1)") == SteenrodElt.basis(milnor(3))


def test_parse_errors():
    with pytest.raises(ValueError):
        parse_admissible("Sq2 Foo")
    with pytest.raises(ValueError):
        parse_milnor("Q(1)")
    with pytest.raises(ValueError):
        SqWord((0,))
