"""Fusion-ring data model: axiom validation, builtins, numeric dims."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from modinv.cyclo import ONE, Cyclotomic
from modinv.fusion import (
    builtin_cyclic,
    builtin_so_level1,
    builtin_su2,
    dims_numeric,
    make_ring,
    pf_dims_numeric,
    validate,
)


@pytest.mark.parametrize("k", range(0, 9))
def test_su2_passes_validation(k):
    assert validate(builtin_su2(k)) == []


@pytest.mark.parametrize("n", [16, 32])
def test_so_level1_passes_validation(n):
    ring = builtin_so_level1(n)
    assert validate(ring) == []
    assert ring.size == 4
    assert ring.twists[1] == Fraction(1, 2)


def test_so_level1_rejects_bad_n():
    with pytest.raises(ValueError):
        builtin_so_level1(8)


def quadratic_twists(n: int, q: int) -> list[Fraction]:
    """h_a = q a^2 / (2n) for even n, q a^2 / n for odd n; both satisfy
    h_a = h_{-a} mod 1."""
    den = 2 * n if n % 2 == 0 else n
    return [Fraction(q * a * a, den) % 1 for a in range(n)]


@pytest.mark.parametrize("n", [1, 2, 3, 4, 6])
def test_cyclic_passes_validation(n):
    assert validate(builtin_cyclic(n, quadratic_twists(n, 1))) == []


def test_cyclic_rejects_asymmetric_twists():
    with pytest.raises(ValueError):
        builtin_cyclic(3, [Fraction(0), Fraction(1, 3), Fraction(2, 3)])


def test_su2_dims_match_sine_values():
    import math

    k = 5
    ring = builtin_su2(k)
    s = math.sin(math.pi / (k + 2))
    for l in range(k + 1):
        expected = math.sin((l + 1) * math.pi / (k + 2)) / s
        assert abs(ring.dims[l].embed().real - expected) < 1e-12


@pytest.mark.parametrize("k", [1, 3, 6])
def test_pf_dims_agree_with_exact(k):
    ring = builtin_su2(k)
    exact = [d.embed().real for d in ring.dims]
    numeric = pf_dims_numeric(ring)
    assert max(abs(a - b) for a, b in zip(exact, numeric)) < 1e-9


def test_dims_numeric_uses_pf_without_exact_dims():
    ring = builtin_su2(4)
    stripped = make_ring(
        ring.names, ring.fusion, ring.dual, ring.twists, dims=None, name="stripped"
    )
    exact = [d.embed().real for d in ring.dims]
    assert max(abs(a - b) for a, b in zip(exact, dims_numeric(stripped))) < 1e-9


def test_validation_catches_broken_unit():
    ring = builtin_cyclic(2, [Fraction(0), Fraction(0)])
    fusion = [[list(row) for row in plane] for plane in ring.fusion]
    fusion[0][1][1] = 0
    broken = make_ring(ring.names, fusion, ring.dual, ring.twists, ring.dims)
    assert any("unit" in msg for msg in validate(broken))


def test_validation_catches_twist_of_unit():
    ring = builtin_cyclic(3, [Fraction(0), Fraction(1, 3), Fraction(1, 3)])
    bad = make_ring(
        ring.names,
        ring.fusion,
        ring.dual,
        [Fraction(1, 2), Fraction(1, 3), Fraction(1, 3)],
        ring.dims,
    )
    assert any("unit" in msg for msg in validate(bad))


def test_validation_catches_wrong_dims():
    ring = builtin_su2(2)
    bad_dims = list(ring.dims)
    bad_dims[1] = ONE  # true value is sqrt(2)
    bad = make_ring(ring.names, ring.fusion, ring.dual, ring.twists, bad_dims)
    assert any("d[1]*d[1]" in msg or "sum N*d" in msg for msg in validate(bad))


def test_conductor_is_lcm_of_twist_and_dim_conductors():
    ring = builtin_su2(2)  # twists have denominator 16, dims live in Q(zeta_16)
    assert ring.conductor == 16
    assert all(d.conductor == 16 for d in ring.dims)


def test_twists_normalized_mod_one():
    ring = builtin_so_level1(32)  # raw spinor twist 2 reduces to 0
    assert ring.twists[2] == 0


@given(st.integers(min_value=1, max_value=6), st.integers(min_value=0, max_value=11))
@settings(max_examples=30, deadline=None)
def test_quadratic_twists_always_validate(n, q):
    assert validate(builtin_cyclic(n, quadratic_twists(n, q))) == []
