import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sijc.models import (
    ModelValidityError,
    build_ladder,
    harmonic,
    max_level_count,
    morse_class,
    remainder,
    scaling_class,
    validate_model,
)


def test_remainder_catalog_values():
    assert remainder(harmonic(omega=1.0), 5) == 1.0
    assert remainder(scaling_class(1.0, 0.5), 3) == 0.25
    assert remainder(morse_class(1.0, 0.1), 2) == pytest.approx(0.7, abs=1e-15)


def test_remainder_scales_with_hbar_for_harmonic():
    assert remainder(harmonic(omega=2.0, hbar=0.5), 1) == 1.0


def test_remainder_rejects_bad_index_and_invalid_range():
    with pytest.raises(ValueError):
        remainder(harmonic(), 0)
    with pytest.raises(ModelValidityError) as err:
        remainder(morse_class(1.0, 0.1), 6)
    assert err.value.first_invalid_k == 6
    assert err.value.max_levels == 6


def test_build_ladder_examples():
    np.testing.assert_array_equal(build_ladder(harmonic(), 4).energies, [0.0, 1.0, 2.0, 3.0])
    np.testing.assert_array_equal(
        build_ladder(scaling_class(1.0, 0.5), 4).energies, [0.0, 1.0, 1.5, 1.75]
    )
    morse = build_ladder(morse_class(1.0, 0.1), 3)
    np.testing.assert_allclose(morse.energies, [0.0, 0.9, 1.6], atol=1e-15)


def test_validate_model_examples():
    assert validate_model(harmonic(), 100).valid
    assert validate_model(harmonic(), 100).max_levels is None

    report = validate_model(morse_class(1.0, 0.1), 10)
    assert not report.valid
    assert report.first_invalid_k == 6
    assert report.max_levels == 6
    assert remainder(morse_class(1.0, 0.1), 5) == pytest.approx(0.1, abs=1e-15)

    assert validate_model(scaling_class(1.0, 0.99), 50).valid


def test_morse_boundary_remainder_excluded():
    # c1 = 0.9, c2 = 0.1 puts R_5 = 0 exactly; k = 5 must be invalid
    assert max_level_count(morse_class(0.9, 0.1)) == 5


def test_build_ladder_error_carries_max_levels():
    with pytest.raises(ModelValidityError) as err:
        build_ladder(morse_class(1.0, 0.1), 20)
    assert err.value.max_levels == 6


def test_parameter_validation():
    with pytest.raises(ValueError):
        harmonic(omega=-1.0)
    with pytest.raises(ValueError):
        scaling_class(1.0, 1.2)
    with pytest.raises(ValueError):
        morse_class(-1.0, 0.1)
    with pytest.raises(ValueError):
        harmonic(Omega=0.0)
    with pytest.raises(ValueError):
        build_ladder(harmonic(), 1)


def test_alpha_beta():
    model = harmonic(Omega=2.0, Delta=0.6, hbar=0.5)
    assert model.alpha == pytest.approx(math.sqrt(0.5 * 2.0))
    assert model.beta == pytest.approx(0.5 * 0.6 / model.alpha)


@st.composite
def valid_models(draw):
    kind = draw(st.sampled_from(["harmonic", "morse_class", "scaling_class"]))
    if kind == "harmonic":
        return harmonic(omega=draw(st.floats(0.1, 5.0)))
    if kind == "scaling_class":
        return scaling_class(draw(st.floats(0.1, 5.0)), draw(st.floats(0.05, 0.95)))
    c1 = draw(st.floats(1.0, 5.0))
    c2 = draw(st.floats(0.0, 0.04))  # keeps at least ~12 levels valid
    return morse_class(c1, c2)


@settings(max_examples=50, deadline=None)
@given(model=valid_models(), levels=st.integers(2, 12))
def test_ladder_invariants(model, levels):
    ladder = build_ladder(model, levels)
    assert ladder.energies[0] == 0.0
    # one float addition per level, bit-exact
    for n in range(1, levels):
        assert ladder.energies[n] == ladder.energies[n - 1] + ladder.remainders[n - 1]
    assert np.all(np.diff(ladder.energies) > 0)
    assert len(ladder.paired_energies) == levels - 1
