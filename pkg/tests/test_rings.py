import random
from math import gcd

import pytest
from hypothesis import given
from hypothesis import strategies as st

from stabledecomp.rings import Integers, IntegersMod, PolynomialsOverPrimeField, parse_engine

ZZ = Integers()
F5 = PolynomialsOverPrimeField(5)


@given(st.integers(-10**30, 10**30), st.integers(-10**6, 10**6).filter(bool))
def test_integer_division_decreases_measure(a, b):
    q, r = ZZ.divmod(a, b)
    assert a == q * b + r
    assert 0 <= r < abs(b)


def test_polynomial_division_decreases_degree():
    rng = random.Random(3)
    for _ in range(300):
        a = F5.random_element(rng, max_degree=6)
        b = F5.random_element(rng, max_degree=3)
        if not b:
            continue
        q, r = F5.divmod(a, b)
        assert F5.add(F5.mul(q, b), r) == a
        assert len(r) < len(b)


@pytest.mark.parametrize("n", range(2, 25))
def test_units_mod_n_are_coprime_residues(n):
    e = IntegersMod(n)
    units = {a for a in range(n) if e.is_unit(a)}
    assert units == {a for a in range(n) if gcd(a, n) == 1}
    for u in units:
        assert e.mul(u, e.inverse(u)) == 1


def test_gcdex_is_canonical():
    g, s, t = ZZ.gcdex(-12, 18)
    assert g == 6 and s * -12 + t * 18 == 6
    g, s, t = F5.gcdex(F5.poly([0, 2]), F5.poly([0, 0, 3]))
    assert g == (0, 1)


def test_polynomials_are_stored_trimmed():
    assert F5.poly([1, 0, 5, 10]) == (1,)
    assert F5.sub((1, 2), (1, 2)) == ()


def test_parse_engine_headers():
    assert parse_engine("int") == ZZ
    assert parse_engine("mod 12") == IntegersMod(12)
    assert parse_engine("IntegersMod(4)") == IntegersMod(4)
    assert parse_engine("poly 5") == F5
    assert parse_engine("F5[x]") == F5
    with pytest.raises(ValueError):
        parse_engine("mod 1")
    with pytest.raises(ValueError):
        parse_engine("poly 6")
    with pytest.raises(ValueError):
        parse_engine("rationals")


def test_polynomial_entries_parse_from_coefficient_lists():
    assert F5.parse_element([1, 0, 7]) == (1, 0, 2)
    assert F5.parse_element(10) == ()
    with pytest.raises(ValueError):
        F5.parse_element("x+1")
