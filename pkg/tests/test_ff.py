import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gmvsolve.errors import CompositeModulus, DivisionByZero, FieldMismatch, InvalidModulus
from gmvsolve.ff import FieldElement, PrimeField, fpow, inv, sample_uniform

PRIMES = [3, 7, 101, 1523, 8380417, 2**31 - 1, 2**61 - 1, 2**89 - 1, 2**127 - 1, 2**130 + 169]
primes = st.sampled_from(PRIMES)


def test_rejects_bad_moduli():
    for bad in (1, 2, 4, 9, -7, 0):
        with pytest.raises((InvalidModulus, CompositeModulus)):
            PrimeField(bad)
    with pytest.raises(CompositeModulus):
        PrimeField(1523 * 101)
    with pytest.raises(InvalidModulus):
        PrimeField(7.0)


def test_fast_path_boundary():
    assert PrimeField(2**31 - 1).fast
    assert not PrimeField(2**61 - 1).fast
    assert PrimeField(8380417).bits == 23
    assert PrimeField(1523).bits == 11


@given(primes, st.integers(), st.integers())
def test_ring_ops_match_integers(p, a, b):
    F = PrimeField(p)
    x, y = F(a), F(b)
    assert int(x + y) == (a + b) % p
    assert int(x - y) == (a - b) % p
    assert int(x * y) == (a * b) % p
    assert int(-x) == (-a) % p
    assert int(x + b) == (a + b) % p
    assert int(b - x) == (b - a) % p


@given(primes, st.integers())
def test_inverse(p, a):
    F = PrimeField(p)
    x = F(a)
    if a % p == 0:
        with pytest.raises(DivisionByZero):
            inv(x)
    else:
        assert x * inv(x) == F.one()
        assert F.one() / x == inv(x)


@given(primes, st.integers(), st.integers(min_value=0, max_value=500))
def test_pow(p, a, e):
    F = PrimeField(p)
    assert int(fpow(F(a), e)) == pow(a, e, p)


def test_fermat():
    F = PrimeField(1523)
    for a in range(1, 1523, 97):
        assert F(a) ** 1522 == F.one()


def test_mixed_fields_rejected():
    with pytest.raises(FieldMismatch):
        PrimeField(7)(1) + PrimeField(101)(1)


def test_sample_uniform_deterministic():
    F = PrimeField(8380417)
    a = [sample_uniform(F, random.Random(5)).value for _ in range(3)]
    b = [sample_uniform(F, random.Random(5)).value for _ in range(3)]
    assert a == b
    rng = random.Random(9)
    vals = {sample_uniform(F, rng).value for _ in range(200)}
    assert all(0 <= v < F.p for v in vals) and len(vals) > 190


def test_array_canonical():
    F = PrimeField(101)
    arr = F.array([-1, 102, 5])
    assert arr.tolist() == [100, 1, 5]
    G = PrimeField(2**61 - 1)
    assert G.array([-1]).tolist() == [2**61 - 2]


def test_element_is_hashable_and_ordered():
    F = PrimeField(7)
    assert len({F(1), F(8), F(2)}) == 2
    assert sorted([F(5), F(2)]) == [F(2), F(5)]
    assert isinstance(F(3), FieldElement)
