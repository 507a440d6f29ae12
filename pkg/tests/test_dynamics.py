import warnings

import numpy as np
import pytest
from scipy.integrate import solve_ivp
from scipy.linalg import expm

from cptsim.coupling import construct_dark_pm, pair_raman_detuning
from cptsim.dynamics import (
    RateSet,
    absorption,
    build_lindblad,
    decay_operators,
    doppler_average,
    mixed_ground_state,
    steady_state,
)
from cptsim.errors import InvalidArgumentError, NonUniqueSteadyStateError
from cptsim.field import BichromaticField, FieldComponent, polarization_from_ellipse, preset
from cptsim.structure import build_level_set, get_atom

TWO_PI = 2 * np.pi
RB87 = get_atom("rb87")


def random_config(rng, fast=False):
    """Random (levels, field, rates). ``fast`` keeps rates and detunings small
    enough for explicit long-time integration."""
    Fe = int(rng.integers(1, 3))
    B = rng.uniform(0, 0.05 if fast else 1.0)
    lv = build_level_set(RB87, Fe, B)
    det = 1e6 if fast else 50e6
    comps = [
        FieldComponent(
            TWO_PI * rng.uniform(5e5, 2e6),
            rng.uniform(-det, det),
            polarization_from_ellipse(rng.uniform(0, np.pi), rng.uniform(-0.7, 0.7)),
            F,
        )
        for F in (2, 1)
    ]
    f = BichromaticField(*comps, raman_detuning=rng.uniform(-5e3, 5e3))
    if fast:
        rates = RateSet.for_atom(RB87, ground_relaxation=TWO_PI * rng.uniform(1e4, 3e4),
                                 optical_dephasing=TWO_PI * rng.uniform(1e5, 2e6))
    else:
        rates = RateSet.for_atom(RB87, ground_relaxation=TWO_PI * rng.uniform(50, 5e3),
                                 optical_dephasing=TWO_PI * rng.uniform(0, 300e6),
                                 extra_excited_quench=rng.choice([0.0, 1e7]))
    return lv, f, rates


def integrate_radau(gen, T):
    """Long-time implicit Runge-Kutta integration from the mixed ground state."""
    L = gen.superoperator
    M = np.block([[L.real, -L.imag], [L.imag, L.real]])
    y0 = mixed_ground_state(gen.levels).matrix.reshape(-1)
    sol = solve_ivp(lambda t, y: M @ y, (0, T), np.r_[y0.real, y0.imag],
                    method="Radau", jac=M, rtol=1e-10, atol=1e-13)
    assert sol.success
    n = gen.dim ** 2
    y = sol.y[:, -1]
    return (y[:n] + 1j * y[n:]).reshape(gen.dim, gen.dim)


def propagate_exact(gen, T, doublings=24):
    """rho(T) = exp(L T) rho(0) by repeated squaring of a short-step propagator."""
    P = expm(gen.superoperator * (T / 2 ** doublings))
    for _ in range(doublings):
        P = P @ P
    rho0 = mixed_ground_state(gen.levels).matrix.reshape(-1)
    return (P @ rho0).reshape(gen.dim, gen.dim)


# ---------------------------------------------------------------- rates


def test_rateset_validation():
    with pytest.raises(InvalidArgumentError):
        RateSet(gamma_natural=1.0, optical_dephasing=-1.0)
    with pytest.warns(UserWarning):
        RateSet(gamma_natural=1.0, ground_relaxation=2.0)
    r = RateSet.for_atom(RB87)
    assert r.gamma_natural == RB87.gamma
    assert r.optical_dephasing == TWO_PI * 100e6
    assert r.ground_relaxation == TWO_PI * 500


# ---------------------------------------------------------------- decay


@pytest.mark.parametrize("Fe", [1, 2])
def test_decay_operators_total_rate_and_no_hyperfine_coherence(Fe):
    lv = build_level_set(RB87, Fe, 0.2)
    ops = decay_operators(lv, RB87.gamma)
    rate = sum(op.conj().T @ op for op in ops)
    ng = lv.n_ground
    np.testing.assert_allclose(np.diag(rate)[ng:], RB87.gamma, rtol=1e-13)
    # each jump lands in a single ground hyperfine level
    for op in ops:
        hit = {str(lv.ground_levels[g].F) for g in np.nonzero(np.any(op != 0, axis=1))[0]}
        assert len(hit) == 1


def test_branching_ratios_fe1():
    # F'=1 decays to F=1 with probability 1/6 and to F=2 with 5/6
    lv = build_level_set(RB87, 1, 0.0)
    ops = decay_operators(lv, 1.0)
    to_f1 = sum((op[:3, 8:] ** 2).sum(axis=0) for op in ops)
    np.testing.assert_allclose(to_f1, 1 / 6, rtol=1e-12)


# ---------------------------------------------------------------- generator properties


def test_trace_preservation_and_steady_state_hygiene():
    rng = np.random.default_rng(20)
    for _ in range(20):
        lv, f, rates = random_config(rng)
        gen = build_lindblad(lv, f, rates)
        scale = np.abs(gen.superoperator).max()
        assert np.abs(gen.trace_row()).max() <= 1e-12 * scale
        rho = steady_state(gen)
        assert rho.hermiticity_error() <= 1e-12
        assert rho.trace_error() <= 1e-12
        assert rho.min_eigenvalue() >= -1e-9


def test_steady_state_matches_runge_kutta_integration():
    rng = np.random.default_rng(1)
    for _ in range(5):
        lv, f, rates = random_config(rng, fast=True)
        gen = build_lindblad(lv, f, rates)
        rho_rk = integrate_radau(gen, 40 / rates.ground_relaxation)
        assert np.linalg.norm(rho_rk - steady_state(gen).matrix) <= 1e-6


def test_steady_state_matches_exact_propagation_default_rates():
    rng = np.random.default_rng(4)
    for _ in range(3):
        lv, f, _ = random_config(rng)
        rates = RateSet.for_atom(RB87)
        gen = build_lindblad(lv, f, rates)
        rho_t = propagate_exact(gen, 60 / rates.ground_relaxation)
        assert np.linalg.norm(rho_t - steady_state(gen).matrix) <= 1e-6


def test_shifted_generator_equals_rebuilt():
    rng = np.random.default_rng(8)
    lv, f, rates = random_config(rng)
    gen = build_lindblad(lv, f, rates)
    for dr, do in [(1234.0, 0.0), (0.0, 5e6), (-777.0, 3e6)]:
        ref = build_lindblad(lv, f.with_raman_detuning(f.raman_detuning + dr).with_common_detuning_shift(do), rates)
        diff = np.abs(gen.shifted(raman=dr, optical=do).superoperator - ref.superoperator).max()
        assert diff <= 1e-14 * np.abs(ref.superoperator).max()
    assert gen.shifted() is gen


def test_zero_light_gives_mixed_ground_state_and_no_absorption():
    lv = build_level_set(RB87, 1, 0.15)
    gen = build_lindblad(lv, preset("lin_par_lin", 0.0, 0.0), RateSet.for_atom(RB87))
    rho = steady_state(gen)
    np.testing.assert_allclose(rho.matrix, mixed_ground_state(lv).matrix, atol=1e-14)
    assert absorption(rho) == 0.0


def test_non_unique_steady_state_without_ground_relaxation():
    lv = build_level_set(RB87, 1, 0.0)
    rates = RateSet.for_atom(RB87, ground_relaxation=0.0)
    gen = build_lindblad(lv, preset("lin_par_lin", 1e6, 1e6), rates)
    with pytest.raises(NonUniqueSteadyStateError):
        steady_state(gen)


def test_population_accumulates_in_closed_form_dark_states():
    # gamma_g = 1e-4 Gamma; optical pumping well above gamma_g
    lv = build_level_set(RB87, 1, 0.15)
    rates = RateSet.for_atom(RB87, ground_relaxation=1e-4 * RB87.gamma)
    rabi = TWO_PI * 10e6
    f = preset("lin_par_lin", rabi, rabi)
    d = pair_raman_detuning(lv, -1, 1)
    gen = build_lindblad(lv, f, rates).shifted(raman=d)
    rho = steady_state(gen).matrix[:8, :8]
    tuned = f.with_raman_detuning(d)
    dark = [construct_dark_pm(lv, tuned, s) for s in "+-"]
    overlap = sum(np.vdot(v, rho @ v).real for v in dark)
    assert overlap > 0.9
    # the same number from long-time propagation
    rho_t = propagate_exact(gen, 60 / rates.ground_relaxation)[:8, :8]
    assert sum(np.vdot(v, rho_t @ v).real for v in dark) == pytest.approx(overlap, abs=1e-6)


def test_absorption_is_gamma_times_excited_population():
    rng = np.random.default_rng(9)
    lv, f, rates = random_config(rng)
    rho = steady_state(build_lindblad(lv, f, rates))
    assert absorption(rho) == pytest.approx(RB87.gamma * rho.excited_population, rel=1e-14)
    assert absorption(rho, gamma=1.0) == pytest.approx(rho.excited_population, rel=1e-14)


# ---------------------------------------------------------------- Doppler quadrature


def test_doppler_average_identity_constant_and_moments():
    assert doppler_average(lambda s: s + 3.0, 0.0) == 3.0
    assert doppler_average(lambda s: 2.5, 400e6) == pytest.approx(2.5, rel=1e-14)
    fwhm = 400e6
    sigma = fwhm / (2 * np.sqrt(2 * np.log(2)))
    assert doppler_average(lambda s: s ** 2, fwhm) == pytest.approx(sigma ** 2, rel=1e-12)
    assert doppler_average(lambda s: s ** 4, fwhm) == pytest.approx(3 * sigma ** 4, rel=1e-12)
    out = doppler_average(lambda s: np.array([1.0, s]), fwhm)
    assert out.shape == (2,)
    with pytest.raises(InvalidArgumentError):
        doppler_average(lambda s: s, -1.0)
    with pytest.raises(InvalidArgumentError):
        doppler_average(lambda s: s, 1.0, points=0)


def test_doppler_gaussian_convolution_of_gaussian():
    # <exp(-(x0+s)^2/2w^2)> over N(0, sigma^2) is a Gaussian of width sqrt(w^2+sigma^2)
    w, sigma = 1.0, 0.5
    fwhm = sigma * 2 * np.sqrt(2 * np.log(2))
    for x0 in (0.0, 0.7):
        got = doppler_average(lambda s: np.exp(-((x0 + s) ** 2) / (2 * w * w)), fwhm, points=40)
        s2 = w * w + sigma * sigma
        assert got == pytest.approx(w / np.sqrt(s2) * np.exp(-x0 * x0 / (2 * s2)), rel=1e-10)


def test_warning_free_defaults():
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        RateSet.for_atom(RB87)
