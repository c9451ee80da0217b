"""Exact cyclotomic arithmetic: field axioms, conjugation, embedding,
serialization and division."""

import cmath
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from modinv.cyclo import ONE, ZERO, Cyclotomic, csum, divide, phi, root_of_unity

CONDUCTORS = [1, 2, 3, 4, 5, 6, 7, 8, 9, 12, 15, 16, 18, 24, 72]


def elements(max_conductor=24):
    conductor = st.sampled_from([m for m in CONDUCTORS if m <= max_conductor])
    coeff = st.fractions(
        min_value=-4, max_value=4, max_denominator=6
    )
    return conductor.flatmap(
        lambda m: st.dictionaries(
            st.integers(min_value=0, max_value=max(phi(m) - 1, 0)), coeff, max_size=4
        ).map(lambda d: Cyclotomic(m, d))
    )


def test_phi_values():
    assert [phi(m) for m in [1, 2, 3, 4, 8, 9, 12, 72]] == [1, 1, 2, 2, 4, 6, 4, 24]


def test_primitive_root_relations():
    # zeta_4 = i, zeta_8^2 = i, zeta_3 + zeta_3^2 = -1.
    i1 = Cyclotomic.zeta(4)
    assert i1 * i1 == Cyclotomic.from_rational(-1)
    assert Cyclotomic.zeta(8) ** 2 == i1
    z3 = Cyclotomic.zeta(3)
    assert z3 + z3 ** 2 == Cyclotomic.from_rational(-1)


def test_cross_conductor_equality():
    # zeta_6 - 1 ... zeta_3 representations of the same number must compare equal.
    assert Cyclotomic.zeta(6) == ONE + Cyclotomic.zeta(3)
    assert Cyclotomic.zeta(6, 2) == Cyclotomic.zeta(3)
    assert hash(Cyclotomic.zeta(6, 2)) == hash(Cyclotomic.zeta(3))


def test_rational_value_detection():
    assert (Cyclotomic.zeta(5) * Cyclotomic.zeta(5, 4)).rational_value() == 1
    assert Cyclotomic.zeta(3).rational_value() is None
    assert ZERO.rational_value() == 0


@given(elements(), elements(), elements())
@settings(max_examples=60, deadline=None)
def test_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a + b == b + a
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a
    assert a * (b + c) == a * b + a * c
    assert a + ZERO == a
    assert a * ONE == a
    assert a - a == ZERO


@given(elements(), elements())
@settings(max_examples=60, deadline=None)
def test_embedding_is_homomorphic(a, b):
    assert cmath.isclose(
        (a * b).embed(), a.embed() * b.embed(), rel_tol=0, abs_tol=1e-7
    )
    assert cmath.isclose(
        (a + b).embed(), a.embed() + b.embed(), rel_tol=0, abs_tol=1e-7
    )


@given(elements())
@settings(max_examples=60, deadline=None)
def test_conjugate_matches_complex_conjugation(a):
    assert cmath.isclose(
        a.conjugate().embed(), a.embed().conjugate(), rel_tol=0, abs_tol=1e-7
    )
    assert a.conjugate().conjugate() == a
    assert (a * a.conjugate()).is_real()


@given(elements())
@settings(max_examples=40, deadline=None)
def test_json_round_trip(a):
    assert Cyclotomic.from_json(a.to_json()) == a


@given(elements(), st.sampled_from(CONDUCTORS))
@settings(max_examples=40, deadline=None)
def test_conductor_promotion_round_trip(a, m):
    target = a.conductor * m
    assert a.to_conductor(target) == a


@given(st.fractions(max_denominator=24))
@settings(max_examples=50, deadline=None)
def test_root_of_unity_order(h):
    w = root_of_unity(h)
    q = (h % 1).denominator
    assert w ** q == ONE
    assert cmath.isclose(
        w.embed(), cmath.exp(2j * cmath.pi * float(h % 1)), rel_tol=0, abs_tol=1e-9
    )


@given(elements(12), elements(12))
@settings(max_examples=40, deadline=None)
def test_division_inverts_multiplication(a, b):
    if b.is_zero():
        with pytest.raises(ZeroDivisionError):
            divide(a, b)
    else:
        q = divide(a * b, b)
        assert q == a


def test_division_verifies_result():
    half = divide(ONE, Cyclotomic.from_rational(2))
    assert half == Cyclotomic.from_rational(Fraction(1, 2))
    golden = Cyclotomic.zeta(5) + Cyclotomic.zeta(5, 4)  # 2 cos(2 pi / 5)
    assert divide(golden * golden, golden) == golden


def test_csum_empty_is_zero():
    assert csum([]) == ZERO


def test_high_precision_embed():
    z = Cyclotomic.zeta(7)
    assert abs(z.embed(200) - z.embed()) < 1e-12


def test_scalar_operations():
    z = Cyclotomic.zeta(8)
    assert 2 * z == z + z
    assert z / 2 + z / 2 == z
    assert z - 1 == z + (-1)
