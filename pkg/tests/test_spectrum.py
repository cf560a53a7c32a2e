import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sijc.models import build_ladder, harmonic, morse_class, scaling_class
from sijc.spectrum import (
    analytic_spectrum,
    oracle_comparison,
    resonant_limits,
    spectrum_invariant_residuals,
    standard_jc_consistency,
    standard_jc_spectrum,
)
from sijc.twochannel import build_hamiltonian

INV_SQRT2 = 1.0 / math.sqrt(2.0)


def test_harmonic_resonant_pair_zero():
    table = analytic_spectrum(build_ladder(harmonic(), 4), 1.0, 0.0)
    assert table.energies_plus[0] == pytest.approx(2.0, abs=1e-15)
    assert table.energies_minus[0] == pytest.approx(0.0, abs=1e-15)


def test_harmonic_detuned_pair_zero():
    table = analytic_spectrum(build_ladder(harmonic(), 4), 1.0, math.sqrt(3.0))
    assert table.energies_plus[0] == pytest.approx(3.0, abs=1e-14)
    assert table.energies_minus[0] == pytest.approx(-1.0, abs=1e-14)


def test_morse_row_matches_oracle():
    ladder = build_ladder(morse_class(1.0, 0.1), 6)
    table = analytic_spectrum(ladder, 0.7, 0.3)
    parts = build_hamiltonian(ladder, 0.7, 0.3)
    comparison = oracle_comparison(table, parts)
    assert abs(table.energies_plus[1] - comparison.oracle_plus[1]) < 1e-10
    assert abs(table.energies_minus[1] - comparison.oracle_minus[1]) < 1e-10
    assert comparison.pairing_residual < 1e-10
    assert comparison.eigenvector_residual < 1e-10


def test_resonant_amplitudes_are_half_sqrt2():
    for model in (harmonic(), morse_class(1.0, 0.1), scaling_class(1.0, 0.5)):
        ladder = build_ladder(model, 5)
        table = resonant_limits(ladder, 1.3)
        for column in (table.c_up_plus, table.c_low_plus, table.c_up_minus, table.c_low_minus):
            np.testing.assert_allclose(column, INV_SQRT2, rtol=0, atol=0)


def test_resonant_equals_analytic_bit_for_bit():
    ladder = build_ladder(harmonic(), 6)
    res = resonant_limits(ladder, 1.0)
    ana = analytic_spectrum(ladder, 1.0, 0.0)
    np.testing.assert_array_equal(res.energies_plus, ana.energies_plus)
    np.testing.assert_array_equal(res.c_up_plus, ana.c_up_plus)
    assert res.energies_plus[1] == pytest.approx(2.0 + math.sqrt(2.0), abs=1e-15)


def test_standard_jc_zero_detuning():
    table, coeffs = standard_jc_spectrum(1.0, 1.0, 1.0, 4)
    np.testing.assert_array_equal(coeffs.delta_m, np.zeros(5))
    np.testing.assert_allclose(coeffs.gamma_plus, 1.0, atol=1e-15)
    np.testing.assert_allclose(table.c_up_plus, INV_SQRT2, atol=1e-16)
    assert table.energies_plus[0] == pytest.approx(2.0, abs=1e-15)
    assert table.energies_minus[0] == pytest.approx(0.0, abs=1e-15)


def test_standard_jc_gamma_product_is_one():
    _, coeffs = standard_jc_spectrum(1.0, 0.5, 2.0, 10)
    np.testing.assert_allclose(coeffs.gamma_plus * coeffs.gamma_minus, 1.0, atol=1e-14)


def test_standard_jc_detuned_matches_general():
    # omega=1, omega_o=0.5, Omega=2, m=2: pair energy 3, detuning 0.5
    table, _ = standard_jc_spectrum(1.0, 0.5, 2.0, 4)
    expected = 3.0 + math.sqrt(2.0 * 1.0 * 3.0 + 0.25)
    assert table.energies_plus[2] == pytest.approx(expected, abs=1e-14)
    assert standard_jc_consistency(1.0, 0.5, 2.0, 10) < 1e-12


def test_oracle_multiset_includes_singlet():
    ladder = build_ladder(scaling_class(1.0, 0.5), 8)
    table = analytic_spectrum(ladder, 1.0, 0.4)
    parts = build_hamiltonian(ladder, 1.0, 0.4)
    comparison = oracle_comparison(table, parts)
    assert comparison.pairing_residual < 1e-10
    assert comparison.oracle_singlet == pytest.approx(-0.4, abs=1e-12)


def test_eigenvector_minus_branch_sign():
    ladder = build_ladder(harmonic(), 4)
    table = analytic_spectrum(ladder, 1.0, 0.8)
    vec = table.eigenvector(1, "-")
    assert vec[1].real > 0  # upper amplitude, phase convention C_up >= 0
    assert vec[3 + 2].real < 0  # lower amplitude carries the block sign


@settings(max_examples=40, deadline=None)
@given(
    coupling=st.floats(0.1, 4.0),
    detuning=st.floats(-3.0, 3.0),
    hbar=st.floats(0.5, 2.0),
    levels=st.integers(3, 15),
)
def test_spectrum_invariants_property(coupling, detuning, hbar, levels):
    ladder = build_ladder(harmonic(hbar=hbar), levels)
    table = analytic_spectrum(ladder, coupling, detuning, hbar)
    residuals = spectrum_invariant_residuals(table)
    assert residuals["orthonormality"] < 1e-12
    assert residuals["cross_branch"] < 1e-12
    assert residuals["ratio_relation"] < 1e-12
    assert residuals["lambda_consistency"] < 1e-12
    assert residuals["branch_gap"] < 1e-12
