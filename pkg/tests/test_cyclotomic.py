import cmath
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vpartition.cyclotomic import (CycNumber, cyclotomic_poly, expi, one_minus_root_inverse,
                                   ramanujan_sum, root_of_unity, totient)


def test_root_of_unity_examples():
    assert root_of_unity(0, 1) == 1
    assert root_of_unity(1, 2) == -1
    assert root_of_unity(1, 4) ** 2 == root_of_unity(1, 2)


def test_field_examples():
    z3 = CycNumber.zeta(3)
    assert ((1 - z3).inverse() * (1 - z3)).is_one()
    assert (1 + z3 + z3 * z3).is_zero()
    assert CycNumber.zeta(2).promote(6) == CycNumber.zeta(6, 3)
    with pytest.raises(ZeroDivisionError):
        CycNumber.rational(0).inverse()


def test_to_complex_examples():
    assert complex(CycNumber.rational(1)) == 1
    assert abs(complex(CycNumber.zeta(4)) - 1j) < 1e-12
    z3 = CycNumber.zeta(3)
    assert abs(complex((1 - z3) * (1 - z3 * z3)) - 3) < 1e-12


def test_cyclotomic_polys():
    assert cyclotomic_poly(1) == (-1, 1)
    assert cyclotomic_poly(3) == (1, 1, 1)
    assert cyclotomic_poly(6) == (1, -1, 1)
    for m in range(1, 30):
        assert len(cyclotomic_poly(m)) == totient(m) + 1


@pytest.mark.parametrize("m", list(range(1, 13)) + [15, 30])
def test_root_relations(m):
    z = CycNumber.zeta(m)
    assert (z ** m).is_one()
    total = CycNumber.rational(0)
    for c in reversed(cyclotomic_poly(m)):
        total = total * z + c
    assert total.is_zero()


def _elements(m):
    coeffs = st.lists(st.integers(-4, 4), min_size=totient(m), max_size=totient(m))
    return st.builds(lambda num, den: CycNumber(m, num, den), coeffs, st.integers(1, 5))


orders = st.integers(1, 12)


@settings(max_examples=200, deadline=None)
@given(st.data())
def test_field_axioms(data):
    ms = [data.draw(orders) for _ in range(3)]
    a, b, c = (data.draw(_elements(m)) for m in ms)
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a
    if not b.is_zero():
        assert (a / b) * b == a
    assert abs(complex(a * b) - complex(a) * complex(b)) < 1e-9


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 12), st.integers(1, 4), st.data())
def test_promote_preserves_value(m, k, data):
    a = data.draw(_elements(m))
    assert abs(complex(a.promote(m * k)) - complex(a)) < 1e-12
    assert a.promote(m * k) == a


def test_galois_and_trace():
    z5 = CycNumber.zeta(5)
    assert z5.galois(2) == CycNumber.zeta(5, 2)
    assert z5.trace() == -1
    assert z5.conjugate() == CycNumber.zeta(5, 4)
    assert (z5 + z5.conjugate()).galois(3) == CycNumber.zeta(5, 3) + CycNumber.zeta(5, 2)


@pytest.mark.parametrize("s", [Fraction(1, 2), Fraction(1, 3), Fraction(2, 5), Fraction(5, 12)])
def test_one_minus_root_inverse(s):
    v = one_minus_root_inverse(s)
    assert (v * (1 - expi(s))).is_one()
    assert abs(complex(v) - 1 / (1 - cmath.exp(2j * cmath.pi * float(s)))) < 1e-12
    with pytest.raises(ZeroDivisionError):
        one_minus_root_inverse(3)


def test_ramanujan_sums():
    for m in range(1, 13):
        for k in range(m):
            direct = sum(cmath.exp(2j * cmath.pi * j * k / m) for j in range(1, m + 1) if _coprime(j, m))
            assert abs(direct - ramanujan_sum(m, k)) < 1e-9


def _coprime(a, b):
    from math import gcd
    return gcd(a, b) == 1
