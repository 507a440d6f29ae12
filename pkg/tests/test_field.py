import numpy as np
import pytest
from hypothesis import given, strategies as st

from cptsim.errors import InvalidArgumentError
from cptsim.field import (
    SCHEMES,
    BichromaticField,
    FieldComponent,
    Polarization,
    circular_components,
    polarization_from_ellipse,
    preset,
)


def test_linear_x_components():
    p = polarization_from_ellipse(0.0, 0.0)
    am, ap = circular_components(p)
    # e_x = (e_{-1} - e_{+1}) / sqrt(2)
    assert am == pytest.approx(1 / np.sqrt(2))
    assert ap == pytest.approx(-1 / np.sqrt(2))
    ex, ey = p.cartesian()
    assert ex == pytest.approx(1.0) and abs(ey) < 1e-15


def test_circular_limits_are_pure():
    plus = polarization_from_ellipse(0.3, np.pi / 4)
    minus = polarization_from_ellipse(0.3, -np.pi / 4)
    assert plus.amp_minus == 0 and abs(plus.amp_plus) == pytest.approx(1.0)
    assert minus.amp_plus == 0 and abs(minus.amp_minus) == pytest.approx(1.0)


def test_linear_y_is_orthogonal_to_x():
    x = polarization_from_ellipse(0.0, 0.0)
    y = polarization_from_ellipse(np.pi / 2, 0.0)
    overlap = np.conj(x.amp_minus) * y.amp_minus + np.conj(x.amp_plus) * y.amp_plus
    assert abs(overlap) < 1e-15


@given(st.floats(0, np.pi), st.floats(-np.pi / 4, np.pi / 4))
def test_ellipse_is_normalized_and_consistent(angle, eps):
    p = polarization_from_ellipse(angle, eps)
    assert p.norm == pytest.approx(1.0, abs=1e-12)
    # degree of circular polarization |a+|^2 - |a-|^2 = sin(2 eps)
    assert abs(p.amp_plus) ** 2 - abs(p.amp_minus) ** 2 == pytest.approx(np.sin(2 * eps), abs=1e-12)
    ex, ey = p.cartesian()
    assert abs(ex) ** 2 + abs(ey) ** 2 == pytest.approx(1.0, abs=1e-12)


def test_polarization_helpers():
    p = Polarization(1, 1j)
    assert p.normalized().norm == pytest.approx(1.0)
    assert p.amplitude(0) == 0
    q = p.with_phase(np.pi / 2)
    assert q.amp_minus == pytest.approx(1j)
    with pytest.raises(InvalidArgumentError):
        Polarization(0, 0).normalized()
    with pytest.raises(InvalidArgumentError):
        p.amplitude(2)


def test_presets():
    assert set(SCHEMES) == {"lin_par_lin", "sigma_sigma", "lin_perp_lin"}
    f = preset("sigma_sigma", 1.0, 2.0, raman_detuning=5.0)
    assert f.component1.amplitude(-1) == 0
    assert f.component2.rabi_scale == 2.0
    assert f.raman_detuning == 5.0
    assert str(f.component1.target_ground_F) == "2"
    g = preset("lin_par_lin", 1.0, 1.0, optical_detuning=(1e6, -2e6))
    assert (g.component1.optical_detuning, g.component2.optical_detuning) == (1e6, -2e6)
    with pytest.raises(InvalidArgumentError):
        preset("lin_circ", 1.0, 1.0)


def test_field_validation_and_replacement():
    pol = polarization_from_ellipse(0, 0)
    with pytest.raises(InvalidArgumentError):
        BichromaticField(FieldComponent(1, 0, pol, 2), FieldComponent(1, 0, pol, 2))
    with pytest.raises(InvalidArgumentError):
        FieldComponent(-1.0, 0, pol, 1)
    f = preset("lin_par_lin", 1.0, 1.0)
    assert f.for_ground_F(1) is f.component2
    assert f.for_ground_F(3) is None
    assert f.with_raman_detuning(7.0).raman_detuning == 7.0
    s = f.with_common_detuning_shift(10.0)
    assert s.component1.optical_detuning == 10.0 and s.component2.optical_detuning == 10.0
    ph = f.with_phase(0.7)
    assert ph.component1.polarization.amp_minus == pytest.approx(f.component1.polarization.amp_minus * np.exp(0.7j))
