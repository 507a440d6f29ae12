import numpy as np
import pytest

from cptsim.coupling import pair_raman_detuning, raman_amplitude
from cptsim.dynamics import RateSet, absorption, build_lindblad, steady_state
from cptsim.errors import InvalidArgumentError, NumericalError
from cptsim.spectroscopy import (
    Lineshape,
    ScanConfig,
    bfield_csv,
    bfield_family,
    compare_schemes,
    comparison_csv,
    extract_metrics,
    lineshape_csv,
    one_photon_spectrum,
    scan,
)
from cptsim.structure import build_level_set, get_atom

TWO_PI = 2 * np.pi
RB87 = get_atom("rb87")


def lorentzian_dip(x, bg, amp, fwhm, x0=0.0):
    hw = fwhm / 2
    return bg - amp * hw ** 2 / ((x - x0) ** 2 + hw ** 2)


# ---------------------------------------------------------------- config


def test_scan_config_validation_and_grid():
    with pytest.raises(InvalidArgumentError):
        ScanConfig(delta_start=1.0, delta_stop=0.0)
    with pytest.raises(InvalidArgumentError):
        ScanConfig(delta_step=0.0)
    with pytest.raises(InvalidArgumentError):
        ScanConfig(atom="na23")
    with pytest.raises(InvalidArgumentError):
        ScanConfig(scheme="lin_circ")
    with pytest.raises(InvalidArgumentError):
        ScanConfig(B=-1.0)
    d = ScanConfig().deltas()
    assert len(d) == 1001 and d[0] == -50e3 and d[-1] == 50e3
    assert np.all(np.diff(d) > 0)


# ---------------------------------------------------------------- metrics on synthetic data


def test_metrics_recover_analytic_lorentzian():
    x = np.linspace(-50e3, 50e3, 1001)
    bg, amp, fwhm = 10.0, 3.0, 4e3
    m = extract_metrics(Lineshape(x, lorentzian_dip(x, bg, amp, fwhm, 1234.0), None))
    # the outer samples sit on the Lorentzian wings, ~0.16 % below bg
    assert m.amplitude == pytest.approx(amp, rel=0.01)
    assert m.fwhm == pytest.approx(fwhm, rel=0.01)
    assert m.center == pytest.approx(1234.0, abs=5.0)
    assert m.contrast == pytest.approx(amp / bg, rel=0.01)
    assert m.n_peaks == 1 and m.resonance_found


def test_metrics_flat_line_flags_no_resonance():
    x = np.linspace(-1, 1, 100)
    m = extract_metrics(Lineshape(x, np.full(100, 5.0), None))
    assert not m.resonance_found
    assert (m.amplitude, m.fwhm, m.contrast, m.n_peaks) == (0.0, 0.0, 0.0, 0)


def test_metrics_two_peaks_and_min_samples():
    x = np.linspace(-50e3, 50e3, 1001)
    y = lorentzian_dip(x, 10, 2, 3e3, -10e3) + lorentzian_dip(x, 0, 2, 3e3, 10e3)
    m = extract_metrics(Lineshape(x, y, None))
    assert m.n_peaks == 2
    assert m.peak_separation == pytest.approx(20e3, rel=0.01)
    with pytest.raises(InvalidArgumentError):
        extract_metrics(Lineshape(x[:19], y[:19], None))


# ---------------------------------------------------------------- scans


def test_zero_rabi_gives_flat_zero_lineshape():
    ls = scan(ScanConfig(rabi1=0.0, rabi2=0.0, delta_step=1000.0))
    assert np.all(ls.absorption == 0.0)
    assert not extract_metrics(ls).resonance_found


def test_default_scan_properties_and_determinism():
    cfg = ScanConfig()
    a, b = scan(cfg), scan(cfg, workers=4)
    assert lineshape_csv(a) == lineshape_csv(b)
    assert np.all(a.absorption >= 0)
    m = extract_metrics(a)
    assert 0 <= m.contrast <= 1
    assert m.fwhm > 0
    assert m.amp_to_width == pytest.approx(m.amplitude / m.fwhm, rel=1e-12)


def test_global_phase_invariance():
    base = ScanConfig(polarizations=((0.3, 0.2), (1.0, -0.1)), delta_step=500.0)
    ref = scan(base).absorption
    atom = base.atom_spec()
    levels = build_level_set(atom, 1, base.B)
    f = base.build_field()
    for phase in (0.4, 2.9):
        gen = build_lindblad(levels, f.with_phase(phase), base.resolved_rates())
        got = np.array([absorption(steady_state(gen.shifted(raman=d))) for d in base.deltas()])
        assert np.abs(got - ref).max() <= 1e-12 * np.abs(ref).max()


def _symmetry_residual(B):
    cfg = ScanConfig(B=B, atom_overrides=dict(nuclear_gI=0.0))
    lv = build_level_set(cfg.atom_spec(), 1, B)
    c = pair_raman_detuning(lv, -1, 1)
    gen = build_lindblad(lv, cfg.build_field(), cfg.resolved_rates())
    A = lambda d: absorption(steady_state(gen.shifted(raman=d)))
    x = np.linspace(0, 20e3, 41)
    resid = max(abs(A(c + xi) - A(c - xi)) for xi in x)
    amp = extract_metrics(scan(cfg.replace(delta_start=c - 50e3, delta_stop=c + 50e3))).amplitude
    return resid / amp


def test_lineshape_symmetric_about_quadratic_shift_zero_field():
    assert _symmetry_residual(0.0) <= 1e-8


def test_lineshape_symmetric_about_quadratic_shift_at_default_field():
    # achieved ~1.03e-8: the (0, +-2) resonances at +-210 kHz sit a few Hz
    # asymmetrically about the central pair and their wings leave an odd part
    assert _symmetry_residual(0.15) <= 1e-8


def test_scan_error_names_the_detuning():
    # zero ground relaxation makes the resonant steady state non-unique
    cfg = ScanConfig(B=0.0, rates=RateSet.for_atom(RB87, ground_relaxation=0.0),
                     delta_start=-100.0, delta_stop=100.0, delta_step=100.0)
    with pytest.raises(NumericalError, match=r"scan failed at delta_R = (-100|0|100) Hz"):
        scan(cfg)


# ---------------------------------------------------------------- Raman amplitudes vs scan dips


@pytest.mark.parametrize("detuning", [1e9, -1.5e9])
def test_dip_depths_follow_raman_amplitudes(detuning):
    B = 3.0
    cfg = ScanConfig(B=B, polarizations=((0.4, 0.2), (1.1, -0.15)), rabi1=TWO_PI * 3e5,
                     rabi2=TWO_PI * 3e5, detuning1=detuning, detuning2=detuning)
    lv = build_level_set(RB87, 1, B)
    f = cfg.build_field()
    gen = build_lindblad(lv, f, cfg.resolved_rates())
    A = lambda d: absorption(steady_state(gen.shifted(raman=d)))
    h = 2.5e3
    depth, weight = [], []
    for pair in [(0, 0), (-1, 1), (1, -1)]:
        d0 = pair_raman_detuning(lv, *pair)
        # depth against a symmetric linear baseline removes the one-photon tilt
        depth.append(0.5 * (A(d0 - h) + A(d0 + h)) - A(d0))
        weight.append(abs(raman_amplitude(lv, f.with_raman_detuning(d0), *pair)) ** 2)
    ratio = (np.array(depth) / sum(depth)) / (np.array(weight) / sum(weight))
    np.testing.assert_allclose(ratio, 1.0, rtol=0.1)


# ---------------------------------------------------------------- scheme comparison


def test_compare_rows_csv_and_validation():
    base = ScanConfig(delta_step=1000.0)
    rows = compare_schemes(base, ["lin_par_lin/1", ("sigma_sigma", 2)], [TWO_PI * 1e6, TWO_PI * 2e6])
    assert len(rows) == 4
    text = comparison_csv(rows)
    assert text.splitlines()[0].startswith("scheme,excited_F,rabi_scale,")
    assert len(text.splitlines()) == 5
    with pytest.raises(InvalidArgumentError):
        compare_schemes(base, ["lin_par_lin/1"], [1.0])


def test_amplitude_vanishes_with_rabi():
    base = ScanConfig(delta_step=1000.0)
    for scheme in ["lin_par_lin/1", "sigma_sigma/2", "lin_par_lin/2"]:
        rows = compare_schemes(base, [scheme, scheme], [TWO_PI * 1e6, TWO_PI * 1e4, 0.0])
        amps = [r.metrics.amplitude for r in rows[:3]]
        assert amps[2] == 0.0
        assert amps[1] < 1e-3 * amps[0]


def test_ordering_weak_pumping_reversal():
    # with optical pumping comparable to ground relaxation the sigma-sigma
    # trap state is barely populated and its contrast exceeds lin||lin
    base = ScanConfig(delta_step=500.0)
    rows = compare_schemes(base, ["lin_par_lin/1", "sigma_sigma/2"], [TWO_PI * 0.3e6])
    lin, sig = (r.metrics for r in rows)
    assert sig.contrast > lin.contrast


def test_ordering_at_strong_pumping():
    base = ScanConfig(delta_step=500.0)
    rows = compare_schemes(base, ["lin_par_lin/1", "sigma_sigma/2", "lin_par_lin/2"], [TWO_PI * 1e6])
    lin1, sig2, lin2 = (r.metrics for r in rows)
    assert lin1.amplitude > sig2.amplitude > lin2.amplitude
    assert lin1.contrast > sig2.contrast > lin2.contrast


# ---------------------------------------------------------------- magnetic field


def test_bfield_family_morphology_and_csv():
    fam = bfield_family(ScanConfig(delta_step=250.0), [0.05, 0.2, 1.0])
    assert [p.metrics.n_peaks for p in fam] == [1, 1, 2]
    assert fam[1].metrics.fwhm > fam[0].metrics.fwhm
    sep = fam[2].metrics.peak_separation
    assert sep == pytest.approx(5.53e3, rel=0.02)
    text = bfield_csv(fam, comment="B family")
    lines = text.splitlines()
    assert lines[0] == "# B family"
    assert lines[1] == "B_gauss,delta_R_hz,absorption"
    assert len(lines) == 2 + 3 * 401
    with pytest.raises(InvalidArgumentError):
        bfield_family(ScanConfig(), [-1.0])


def test_center_shift_is_quadratic_at_small_field():
    B = np.array([0.0, 0.1, 0.2])
    centers = [p.metrics.center for p in bfield_family(ScanConfig(delta_step=50.0, delta_start=-20e3, delta_stop=20e3), B)]
    c2, c1, c0 = np.polyfit(B, centers, 2)
    assert abs(c1) < 27.9
    assert c2 == pytest.approx(431.36, rel=0.1)


# ---------------------------------------------------------------- one-photon spectrum


def test_one_photon_doppler_spectrum_resolves_excited_hyperfine():
    det = np.linspace(-1.0e9, 2.0e9, 301)
    a = one_photon_spectrum(RB87, 2, det, doppler_fwhm=400e6)
    peaks = [i for i in range(1, len(a) - 1) if a[i] > a[i - 1] and a[i] >= a[i + 1]]
    assert len(peaks) == 2
    pos = [det[i] + 0.5 * (a[i - 1] - a[i + 1]) / (a[i - 1] - 2 * a[i] + a[i + 1]) * (det[1] - det[0]) for i in peaks]
    assert pos[1] - pos[0] == pytest.approx(812e6, rel=0.01)
    valley = a[peaks[0]:peaks[1]].min()
    assert valley < 0.8 * min(a[peaks[0]], a[peaks[1]])
