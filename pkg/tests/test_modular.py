"""Monodromy matrix, Gauss sum, central charge, degeneracy detection and the
statistics axioms."""

import cmath
from fractions import Fraction

import numpy as np
import pytest

from modinv.cyclo import Cyclotomic
from modinv.fusion import builtin_cyclic, builtin_so_level1, builtin_su2, make_ring
from modinv.modular import (
    DataIntegrityError,
    DegenerateBraidingError,
    compute_modular_data,
    detect_degenerates,
    verify_statistics_axioms,
    verlinde_check,
)

from test_fusion import quadratic_twists


def test_so16_modular_data():
    md = compute_modular_data(builtin_so_level1(16))
    # S = (1/2) * the 4x4 two-variable character table; Y = z S with z = 2.
    expected_S = 0.5 * np.array(
        [[1, 1, 1, 1], [1, 1, -1, -1], [1, -1, 1, -1], [1, -1, -1, 1]], dtype=float
    )
    assert np.max(np.abs(md.S_numeric - expected_S)) < 1e-12
    assert md.z.rational_value() == 2
    assert md.w.rational_value() == 4
    assert md.c == 0
    assert md.nondegenerate
    # T carries the hinted charge 8: prefactor e^{-2 pi i / 3} on diag(1,-1,1,1).
    pref = cmath.exp(-2j * cmath.pi / 3)
    assert abs(md.T_numeric[0, 0] - pref) < 1e-12
    assert abs(md.T_numeric[1, 1] + pref) < 1e-12


def test_so32_T_prefactor():
    md = compute_modular_data(builtin_so_level1(32))
    assert abs(md.T_numeric[0, 0] - cmath.exp(-4j * cmath.pi / 3)) < 1e-12


@pytest.mark.parametrize("k,expected_c", [(1, Fraction(1)), (2, Fraction(3, 2)), (16, Fraction(8, 3))])
def test_su2_central_charge(k, expected_c):
    md = compute_modular_data(builtin_su2(k))
    assert md.c is not None
    assert (md.c - expected_c) % 8 == 0


@pytest.mark.parametrize("k", range(1, 9))
def test_su2_statistics_axioms(k):
    md = compute_modular_data(builtin_su2(k))
    assert verify_statistics_axioms(md) == []
    assert md.nondegenerate


@pytest.mark.parametrize("n", [16, 32])
def test_so_level1_statistics_axioms(n):
    md = compute_modular_data(builtin_so_level1(n))
    assert verify_statistics_axioms(md) == []


def test_cyclic_degenerate_braiding():
    md = compute_modular_data(builtin_cyclic(2, [Fraction(0)] * 2))
    assert md.degenerates == frozenset({0, 1})
    assert not md.nondegenerate
    assert verify_statistics_axioms(md) == []
    with pytest.raises(DegenerateBraidingError):
        verlinde_check(md)


def test_cyclic_nondegenerate_braiding():
    md = compute_modular_data(builtin_cyclic(4, quadratic_twists(4, 1)))
    assert md.nondegenerate
    assert verify_statistics_axioms(md) == []
    assert verlinde_check(md)["ok"]


@pytest.mark.parametrize("k", [2, 5, 16])
def test_verlinde_reconstruction(k):
    result = verlinde_check(compute_modular_data(builtin_su2(k)))
    assert result["ok"]
    assert result["max_deviation"] < 1e-9


def test_corrupted_Y_violates_dichotomy():
    md = compute_modular_data(builtin_su2(2))
    md.Y[0][1] = md.Y[0][1] + Cyclotomic.from_rational(1)
    with pytest.raises(DataIntegrityError):
        detect_degenerates(md)


def test_corrupted_twist_fails_axioms():
    ring = builtin_so_level1(16)
    bad = make_ring(
        ring.names,
        ring.fusion,
        ring.dual,
        [Fraction(0), Fraction(1, 3), Fraction(1), Fraction(1)],
        ring.dims,
    )
    try:
        md = compute_modular_data(bad)
        assert verify_statistics_axioms(md) != []
    except DataIntegrityError:
        pass  # the dichotomy check may trip first; either failure is correct


def test_numeric_only_path():
    ring = builtin_su2(3)
    stripped = make_ring(ring.names, ring.fusion, ring.dual, ring.twists, dims=None)
    md = compute_modular_data(stripped)
    assert not md.exact
    exact_md = compute_modular_data(ring)
    assert np.max(np.abs(md.Y_numeric - exact_md.Y_numeric)) < 1e-9
    assert md.nondegenerate


def test_gauss_sum_magnitude_is_sqrt_w():
    # |z|^2 = w for a nondegenerate braiding.
    for ring in [builtin_su2(4), builtin_so_level1(16)]:
        md = compute_modular_data(ring)
        z, w = md.z.embed(), md.w.embed().real
        assert abs(abs(z) ** 2 - w) < 1e-9
