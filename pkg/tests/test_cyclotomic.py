"""Exact arithmetic in Q(zeta_N)."""
from fractions import Fraction
from math import gcd

import cmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from caligeo.cyclotomic import (
    CyclotomicNumber,
    as_root_of_unity,
    cyclotomic_polynomial,
    root_of_unity_group,
    unit_generator,
    zeta,
)

PINNED_POLYS = {
    1: (-1, 1),
    2: (1, 1),
    3: (1, 1, 1),
    4: (1, 0, 1),
    6: (1, -1, 1),
    8: (1, 0, 0, 0, 1),
    12: (1, 0, -1, 0, 1),
    24: (1, 0, 0, 0, -1, 0, 0, 0, 1),
}


@pytest.mark.parametrize("n,coeffs", sorted(PINNED_POLYS.items()))
def test_cyclotomic_polynomials(n, coeffs):
    assert cyclotomic_polynomial(n) == coeffs


def test_degree_is_euler_phi():
    def phi(n):
        return sum(1 for k in range(1, n + 1) if gcd(k, n) == 1)

    for n in (3, 8, 12, 24, 30):
        assert len(cyclotomic_polynomial(n)) - 1 == phi(n)


def test_zeta_satisfies_minimal_polynomial():
    for n in (8, 12, 24):
        z = zeta(n)
        acc = CyclotomicNumber.zero(n)
        for j, c in enumerate(cyclotomic_polynomial(n)):
            acc = acc + c * z**j
        assert acc.is_zero


def test_zeta_has_exact_order():
    for n in (8, 24):
        z = zeta(n)
        assert z**n == CyclotomicNumber.one(n)
        assert all(z**k != CyclotomicNumber.one(n) for k in range(1, n))


def test_power_wraps_into_basis():
    z = zeta(24)
    assert zeta(24, power=25) == z
    assert zeta(24, power=-1) == z**23


small_rats = st.fractions(min_value=-3, max_value=3, max_denominator=4)


def cyclo(n):
    from caligeo.cyclotomic import _field_data

    deg = _field_data(n)[1]
    return st.lists(small_rats, min_size=deg, max_size=deg).map(
        lambda cs: CyclotomicNumber(cs, n)
    )


@settings(max_examples=40)
@given(cyclo(12), cyclo(12), cyclo(12))
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert a * (b + c) == a * b + a * c
    assert (a * b) * c == a * (b * c)


@settings(max_examples=40)
@given(cyclo(12))
def test_inverse(a):
    if a.is_zero:
        with pytest.raises(ZeroDivisionError):
            a.inverse()
    else:
        assert a * a.inverse() == CyclotomicNumber.one(12)


@settings(max_examples=30)
@given(cyclo(8), cyclo(8))
def test_galois_is_a_ring_map(a, b):
    for k in (3, 5, 7):
        assert (a * b).galois(k) == a.galois(k) * b.galois(k)
        assert (a + b).galois(k) == a.galois(k) + b.galois(k)


def test_galois_requires_coprime():
    with pytest.raises(ValueError):
        zeta(8).galois(2)


def test_conjugation_fixes_norm_of_roots():
    z = zeta(24, power=5)
    assert z * z.conjugate() == CyclotomicNumber.one(24)


def test_root_of_unity_group_order():
    assert root_of_unity_group(24) == 24
    assert root_of_unity_group(3) == 6  # -1 joins for odd conductors
    g = unit_generator(3)
    assert g**6 == CyclotomicNumber.one(3)
    assert g**3 != CyclotomicNumber.one(3)


def test_as_root_of_unity_round_trip():
    n = 24
    g = unit_generator(n)
    for t in range(root_of_unity_group(n)):
        assert as_root_of_unity(g**t) == t
    assert as_root_of_unity(CyclotomicNumber([0, 2], n)) is None
    assert as_root_of_unity(CyclotomicNumber.from_rational(Fraction(1, 2), n)) is None


def test_mixed_conductors_rejected():
    with pytest.raises(ValueError):
        zeta(8) + zeta(12)


def test_to_complex_matches():
    z = zeta(24)
    expect = cmath.exp(2j * cmath.pi / 24)
    got = (3 * z**2 - z.inverse()).to_complex()
    want = 3 * expect**2 - 1 / expect
    assert abs(got - want) < 1e-12


def test_rational_detection():
    n = 8
    x = zeta(n, 2) * zeta(n, 6)  # zeta^8 = 1
    assert x.is_rational and x.as_rational() == 1
    with pytest.raises(ValueError):
        zeta(n).as_rational()
