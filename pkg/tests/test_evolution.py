import numpy as np
import pytest

from sijc import oracle
from sijc.evolution import (
    ansatz_condition_residuals,
    full_propagator,
    mode_frequencies,
    paper_propagator,
    propagator_diagnostics,
)
from sijc.inversion import rabi_frequencies
from sijc.models import build_ladder, harmonic, morse_class, scaling_class
from sijc.twochannel import PHASE_MINUS_I, PHASE_PLUS_I, build_hamiltonian, singlet_index


@pytest.fixture
def ladder():
    return build_ladder(harmonic(), 5)


def test_propagator_identity_at_zero(ladder):
    u = paper_propagator(ladder, 1.0, 0.4, 1.0, 0.0)
    np.testing.assert_array_equal(u.matrix, np.eye(9))
    uf = full_propagator(ladder, 1.0, 0.4, 1.0, 0.0)
    np.testing.assert_array_equal(uf.matrix, np.eye(9))


def test_mode_frequency_edges(ladder):
    freqs = mode_frequencies(ladder, 1.0, -0.7, 1.0)
    assert freqs.omega2[0] == pytest.approx(0.7, abs=1e-15)
    assert np.all(freqs.omega1 >= 0.7)
    assert np.all(freqs.omega2 >= 0.7)


def test_resonant_interaction_propagator_matches_expm(ladder):
    parts = build_hamiltonian(ladder, 1.0, 0.0, 1.0)
    for t in (0.3, 1.0, 4.7):
        u = paper_propagator(ladder, 1.0, 0.0, 1.0, t, PHASE_MINUS_I)
        u_oracle = oracle.expm_prop(parts.h_coupling, t, 1.0)
        assert np.max(np.abs(u.matrix - u_oracle.matrix)) < 1e-9


def test_resonant_full_propagator_matches_expm(ladder):
    parts = build_hamiltonian(ladder, 1.0, 0.0, 1.0)
    for t in (0.5, 2.0):
        u = full_propagator(ladder, 1.0, 0.0, 1.0, t, PHASE_MINUS_I)
        u_oracle = oracle.expm_prop(parts.total, t, 1.0)
        assert np.max(np.abs(u.matrix - u_oracle.matrix)) < 1e-9
        norms = np.linalg.norm(u.matrix, axis=0)
        np.testing.assert_allclose(norms, 1.0, atol=1e-12)


def test_resonant_frequencies_are_half_rabi(ladder):
    freqs = mode_frequencies(ladder, 1.3, 0.0, 1.0)
    rabi = rabi_frequencies(ladder, 1.3, 1.0)
    np.testing.assert_array_equal(freqs.omega1, rabi.nu1 / 2.0)
    np.testing.assert_array_equal(freqs.omega2, rabi.nu2 / 2.0)


def test_diagnostics_resonant_residuals(ladder):
    lad3 = build_ladder(harmonic(), 3)
    samples = propagator_diagnostics(
        lad3, 1.0, 0.0, 1.0, np.linspace(0.0, 2.0, 9), PHASE_MINUS_I, 1e-3
    )
    assert max(s.residual_first_order for s in samples) < 1e-6
    assert max(s.residual_second_order for s in samples) < 1e-6
    assert max(s.residual_unitarity for s in samples) < 1e-10
    assert max(s.oracle_supnorm for s in samples) < 1e-9


def test_diagnostics_detuned_first_order_is_genuine():
    lad3 = build_ladder(harmonic(), 3)
    samples = propagator_diagnostics(
        lad3, 1.0, 0.3, 1.0, np.linspace(0.0, 2.0, 9), PHASE_MINUS_I, 1e-3
    )
    # second-order equation still holds, first-order residual is O(alpha*beta)
    assert max(s.residual_second_order for s in samples) < 1e-6
    first = max(s.residual_first_order for s in samples)
    assert 0.01 < first < 1.0
    assert max(s.residual_unitarity for s in samples) < 1e-10

    half = propagator_diagnostics(
        lad3, 1.0, 0.3, 1.0, np.linspace(0.0, 2.0, 9), PHASE_MINUS_I, 5e-4
    )
    ratio = max(s.residual_second_order for s in samples) / max(
        s.residual_second_order for s in half
    )
    assert ratio >= 3.5


def test_singlet_column_decouples():
    ladder = build_ladder(harmonic(), 4)
    t = 1.3
    u = paper_propagator(ladder, 1.0, 0.5, 1.0, t).matrix
    s = singlet_index(4)
    col = u[:, s].copy()
    col[s] = 0.0
    assert np.max(np.abs(col)) == 0.0
    assert u[s, s] == pytest.approx(np.cos(0.5 * t), abs=1e-15)
    samples = propagator_diagnostics(ladder, 1.0, 0.5, 1.0, [t], PHASE_MINUS_I, 1e-3)
    assert samples[0].singlet_deviation == pytest.approx(abs(np.cos(0.5 * t) ** 2 - 1.0), abs=1e-12)


def test_ansatz_conditions_both_phases():
    for model in (harmonic(), morse_class(1.0, 0.1), scaling_class(1.0, 0.5)):
        ladder = build_ladder(model, 5)
        for phase in (PHASE_MINUS_I, PHASE_PLUS_I):
            residuals = ansatz_condition_residuals(ladder, 1.0, 0.4, 1.0, 1.7, phase)
            assert max(residuals.values()) < 1e-10


def test_plus_i_phase_is_unitary_but_not_oracle():
    ladder = build_ladder(harmonic(), 4)
    samples = propagator_diagnostics(
        ladder, 1.0, 0.0, 1.0, [1.0], PHASE_PLUS_I, 1e-3
    )
    assert samples[0].residual_unitarity < 1e-10
    assert samples[0].oracle_supnorm > 0.1  # conjugate branch, not the Schrodinger one


def test_fd_step_validation(ladder):
    with pytest.raises(ValueError):
        propagator_diagnostics(ladder, 1.0, 0.0, 1.0, [0.0], PHASE_MINUS_I, 0.0)
