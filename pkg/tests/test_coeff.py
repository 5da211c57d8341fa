from fractions import Fraction

import pytest

from skewlocal.coeff import Field
from skewlocal.errors import (
    DivisionByZero,
    ParseError,
    UnsupportedField,
    ZeroElement,
)

Q = Field.rationals()


def test_rational_basics():
    a = Q.from_fraction(Fraction(3, 2))
    b = Q.from_int(-2)
    assert Q.add(a, b) == Fraction(-1, 2)
    assert Q.mul(a, b) == Fraction(-3)
    assert Q.inv(a) == Fraction(2, 3)
    assert Q.pow(a, -2) == Fraction(4, 9)
    assert Q.is_zero(Q.sub(a, a))
    with pytest.raises(DivisionByZero):
        Q.inv(Q.zero())


def test_cyclotomic_4():
    F = Field.cyclotomic(4)
    z = F.zeta()
    # zeta_4^2 = -1
    assert F.mul(z, z) == F.from_int(-1)
    assert F.pow(z, 4) == F.one()
    assert F.inv(z) == F.neg(z)


def test_cyclotomic_3():
    F = Field.cyclotomic(3)
    z = F.zeta()
    # 1 + zeta + zeta^2 = 0
    s = F.add(F.add(F.one(), z), F.mul(z, z))
    assert F.is_zero(s)
    assert F.mul(z, F.mul(z, z)) == F.one()


def test_cyclotomic_inverse_random():
    F = Field.cyclotomic(5)
    z = F.zeta()
    samples = [
        F.add(F.one(), z),
        F.sub(F.mul(z, z), F.from_int(3)),
        F.add(F.pow(z, 3), F.from_fraction(Fraction(1, 2))),
    ]
    for a in samples:
        assert F.mul(a, F.inv(a)) == F.one()


def test_prime_field():
    F = Field.prime_field(7)
    assert F.from_int(10) == 3
    assert F.add(5, 4) == 2
    assert F.mul(3, 5) == 1
    assert F.inv(3) == 5
    assert F.from_fraction(Fraction(1, 2)) == 4  # 2 * 4 = 8 = 1
    assert F.char() == 7
    with pytest.raises(ValueError):
        Field.prime_field(6)


def test_root_of_unity_order():
    assert Q.root_of_unity_order(Q.one()) == 1
    assert Q.root_of_unity_order(Q.from_int(-1)) == 2
    assert Q.root_of_unity_order(Q.from_int(2)) is None
    with pytest.raises(ZeroElement):
        Q.root_of_unity_order(Q.zero())

    F3 = Field.cyclotomic(3)
    z = F3.zeta()
    assert F3.root_of_unity_order(z) == 3
    # -zeta_3 has order 6, above the default bound n = 3
    assert F3.root_of_unity_order(F3.neg(z)) is None
    assert F3.root_of_unity_order(F3.neg(z), bound=6) == 6

    F13 = Field.prime_field(13)
    assert F13.root_of_unity_order(F13.from_int(12)) == 2
    assert F13.root_of_unity_order(F13.from_int(3)) == 3  # 27 = 1 mod 13


def test_primitive_root_of_unity():
    assert Q.primitive_root_of_unity(1) == Q.one()
    assert Q.primitive_root_of_unity(2) == Q.from_int(-1)
    with pytest.raises(UnsupportedField):
        Q.primitive_root_of_unity(3)

    F3 = Field.cyclotomic(3)
    for order in (1, 2, 3, 6):
        w = F3.primitive_root_of_unity(order)
        assert F3.root_of_unity_order(w, bound=6) == order
    with pytest.raises(UnsupportedField):
        F3.primitive_root_of_unity(4)

    F7 = Field.prime_field(7)
    w = F7.primitive_root_of_unity(3)
    assert F7.root_of_unity_order(w) == 3
    with pytest.raises(UnsupportedField):
        F7.primitive_root_of_unity(5)


def test_is_dth_power_rational():
    ok, w = Q.is_dth_power(Q.from_int(8), 3)
    assert ok and w == 2
    ok, w = Q.is_dth_power(Q.from_int(4), 2)
    assert ok and Q.mul(w, w) == 4
    ok, w = Q.is_dth_power(Q.from_int(2), 2)
    assert not ok and w is None
    ok, w = Q.is_dth_power(Q.from_int(-8), 3)
    assert ok and w == -2
    ok, w = Q.is_dth_power(Q.from_int(-4), 2)
    assert not ok
    ok, w = Q.is_dth_power(Q.from_fraction(Fraction(4, 9)), 2)
    assert ok and w == Fraction(2, 3)
    ok, w = Q.is_dth_power(Q.zero(), 5)
    assert ok and w == 0
    ok, w = Q.is_dth_power(Q.from_int(7), 1)
    assert ok and w == 7


def test_is_dth_power_prime():
    F7 = Field.prime_field(7)
    # squares mod 7 are {1, 2, 4}
    ok, w = F7.is_dth_power(F7.from_int(2), 2)
    assert ok and F7.mul(w, w) == 2
    ok, w = F7.is_dth_power(F7.from_int(3), 2)
    assert not ok and w is None
    F5 = Field.prime_field(5)
    ok, _ = F5.is_dth_power(F5.from_int(2), 4)
    assert not ok
    ok, w = F5.is_dth_power(F5.from_int(1), 4)
    assert ok and pow(w, 4, 5) == 1


def test_is_dth_power_cyclotomic_unsupported():
    F = Field.cyclotomic(4)
    with pytest.raises(UnsupportedField):
        F.is_dth_power(F.zeta(), 2)


def test_field_names():
    assert Field.from_text("Q") == Q
    assert Field.from_text("Q(zeta_5)") == Field.cyclotomic(5)
    assert Field.from_text("F7") == Field.prime_field(7)
    assert Field.from_text(" F7 ").name() == "F7"
    for bad in ("R", "Q(zeta_)", "F8", "F", "Qq"):
        with pytest.raises(ParseError):
            Field.from_text(bad)


def test_format_element():
    assert Q.format_element(Q.from_fraction(Fraction(-3, 2))) == "-3/2"
    F = Field.cyclotomic(3)
    a = F.add(F.one(), F.neg(F.zeta()))
    assert F.format_element(a) == "1 - zeta"
    assert F.format_element(F.zero()) == "0"
    assert not F.is_simple(a)
    assert F.is_simple(F.zeta())
    F7 = Field.prime_field(7)
    assert F7.format_element(F7.from_int(-1)) == "6"
