"""
Scan drivers and resonance metrics.

Contrast is the resonance amplitude (background minus minimum absorption)
divided by the off-resonance absorption background.
"""

from __future__ import annotations

import dataclasses
import io
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np
from scipy.signal import find_peaks

from .angmom import half
from .errors import InvalidArgumentError, NumericalError, SingularityError
from .field import (
    SCHEMES,
    BichromaticField,
    FieldComponent,
    polarization_from_ellipse,
    preset,
)
from .dynamics import RateSet, absorption, build_lindblad, doppler_average, steady_state
from .structure import ATOMS, AtomSpec, build_level_set, get_atom

__all__ = [
    "DEFAULT_RABI",
    "DEFAULT_RABI_SWEEP",
    "ScanConfig",
    "Lineshape",
    "ResonanceMetrics",
    "BFieldPoint",
    "ComparisonRow",
    "scan",
    "extract_metrics",
    "bfield_family",
    "compare_schemes",
    "one_photon_spectrum",
    "format_float",
    "lineshape_csv",
    "bfield_csv",
    "comparison_csv",
]

TWO_PI = 2 * np.pi

#: Default Rabi scale of each sideband (rad/s); equal scales mirror equal
#: sideband powers.
DEFAULT_RABI = TWO_PI * 1.0e6

#: Matched Rabi sweep (rad/s) for scheme comparisons. Every point has an
#: optical pumping rate well above the default ground relaxation, the regime
#: in which trap-state accumulation decides the ranking of schemes.
DEFAULT_RABI_SWEEP = tuple(TWO_PI * f for f in (1.0e6, 1.5e6, 2.0e6, 2.5e6, 3.0e6))


def format_float(x: float) -> str:
    return f"{x:.12g}"


@dataclass(frozen=True)
class ScanConfig:
    """Everything needed to compute one lineshape.

    Frequencies are in Hz, Rabi scales and rates in rad/s, field in gauss.
    ``polarizations`` (two ``(axis_angle, ellipticity)`` pairs for the
    components on the upper and lower ground levels) overrides ``scheme``.
    """

    atom: str = "rb87"
    excited_F: float = 1
    scheme: str = "lin_par_lin"
    polarizations: tuple | None = None
    rabi1: float = DEFAULT_RABI
    rabi2: float = DEFAULT_RABI
    detuning1: float = 0.0
    detuning2: float = 0.0
    B: float = 0.15
    delta_start: float = -50e3
    delta_stop: float = 50e3
    delta_step: float = 100.0
    doppler: bool = False
    doppler_fwhm: float | None = None
    doppler_points: int = 21
    rates: RateSet | None = None
    atom_overrides: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.delta_start < self.delta_stop:
            raise InvalidArgumentError("delta_start must be below delta_stop")
        if not self.delta_step > 0:
            raise InvalidArgumentError("delta_step must be positive")
        if self.atom.lower() not in ATOMS:
            raise InvalidArgumentError(f"unknown atom preset {self.atom!r}")
        if self.polarizations is None and self.scheme not in SCHEMES:
            raise InvalidArgumentError(f"unknown scheme {self.scheme!r}; choose from {SCHEMES}")
        if self.B < 0:
            raise InvalidArgumentError("B must be >= 0")
        if self.doppler_points < 1:
            raise InvalidArgumentError("doppler_points must be >= 1")
        half(self.excited_F)

    def replace(self, **changes) -> "ScanConfig":
        return dataclasses.replace(self, **changes)

    def atom_spec(self) -> AtomSpec:
        return get_atom(self.atom, **self.atom_overrides)

    def resolved_rates(self) -> RateSet:
        return self.rates if self.rates is not None else RateSet.for_atom(self.atom_spec())

    def deltas(self) -> np.ndarray:
        n = int(round((self.delta_stop - self.delta_start) / self.delta_step)) + 1
        return self.delta_start + self.delta_step * np.arange(n)

    def build_field(self, raman_detuning: float = 0.0) -> BichromaticField:
        atom = self.atom_spec()
        targets = (atom.upper_F, atom.lower_F)
        if self.polarizations is None:
            return preset(self.scheme, self.rabi1, self.rabi2, raman_detuning,
                          ground_F=targets, optical_detuning=(self.detuning1, self.detuning2))
        (a1, e1), (a2, e2) = self.polarizations
        c1 = FieldComponent(self.rabi1, self.detuning1, polarization_from_ellipse(a1, e1), targets[0])
        c2 = FieldComponent(self.rabi2, self.detuning2, polarization_from_ellipse(a2, e2), targets[1])
        return BichromaticField(c1, c2, raman_detuning)

    def label(self) -> str:
        pol = self.scheme if self.polarizations is None else "custom"
        return f"{pol}/Fe={half(self.excited_F)}"


@dataclass(frozen=True)
class Lineshape:
    delta_r: np.ndarray  # Hz
    absorption: np.ndarray  # photons/s
    config: ScanConfig

    def __len__(self):
        return len(self.delta_r)


@dataclass(frozen=True)
class ResonanceMetrics:
    background: float
    amplitude: float
    fwhm: float
    contrast: float
    amp_to_width: float
    center: float
    n_peaks: int
    resonance_found: bool = True
    peak_positions: tuple = ()

    @property
    def peak_separation(self) -> float:
        """Distance (Hz) between the two outermost detected peaks, 0 if fewer than two."""
        if len(self.peak_positions) < 2:
            return 0.0
        return float(max(self.peak_positions) - min(self.peak_positions))


class BFieldPoint(NamedTuple):
    B: float
    lineshape: Lineshape
    metrics: ResonanceMetrics


class ComparisonRow(NamedTuple):
    scheme: str
    excited_F: float
    rabi_scale: float
    metrics: ResonanceMetrics


def _point_absorption(gen, delta, doppler_fwhm, points):
    g = gen.shifted(raman=delta)
    if doppler_fwhm:
        return float(doppler_average(lambda s: absorption(steady_state(g.shifted(optical=s))), doppler_fwhm, points))
    return absorption(steady_state(g))


def scan(config: ScanConfig, workers: int | None = None) -> Lineshape:
    """Steady-state absorption versus two-photon detuning.

    Points are independent; with ``workers > 1`` they are computed in a
    thread pool and reassembled in detuning order.

    Raises
    ------
    NumericalError
        If any point fails; the message names the offending detuning.
    """
    atom = config.atom_spec()
    levels = build_level_set(atom, config.excited_F, config.B)
    gen = build_lindblad(levels, config.build_field(0.0), config.resolved_rates())
    deltas = config.deltas()
    fwhm = 0.0
    if config.doppler:
        fwhm = atom.doppler_fwhm if config.doppler_fwhm is None else config.doppler_fwhm

    def one(delta):
        try:
            return _point_absorption(gen, delta, fwhm, config.doppler_points)
        except (NumericalError, SingularityError) as exc:
            raise type(exc)(f"scan failed at delta_R = {delta:.12g} Hz: {exc}") from exc

    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            values = list(pool.map(one, deltas))
    else:
        values = [one(d) for d in deltas]
    return Lineshape(deltas, np.clip(np.array(values), 0.0, None), config)


def _crossing(x, y, i_from, i_to, level):
    """Linear interpolation of where ``y`` drops below ``level`` walking from i_from towards i_to."""
    step = 1 if i_to > i_from else -1
    i = i_from
    while i != i_to:
        j = i + step
        if y[j] < level:
            t = (y[i] - level) / (y[i] - y[j])
            return x[i] + t * (x[j] - x[i])
        i = j
    return x[i_to]


def _refine_peak(x, y, i):
    if 0 < i < len(y) - 1:
        y0, y1, y2 = y[i - 1], y[i], y[i + 1]
        den = y0 - 2 * y1 + y2
        if den < 0:
            off = 0.5 * (y0 - y2) / den
            return x[i] + off * (x[i + 1] - x[i - 1]) / 2
    return x[i]


def extract_metrics(ls: Lineshape) -> ResonanceMetrics:
    """Background, amplitude, FWHM, contrast and peak count of a dip.

    The background is the median of the outer 10 % of samples (5 % on each
    side); peaks are local maxima of ``background - absorption`` with a
    prominence above 5 % of the amplitude. A lineshape whose amplitude is
    below ``1e-12`` of the background is reported with
    ``resonance_found = False`` and zeroed metrics.
    """
    x = np.asarray(ls.delta_r, float)
    a = np.asarray(ls.absorption, float)
    n = len(x)
    if n < 20:
        raise InvalidArgumentError("need at least 20 samples to extract metrics")
    k = max(1, int(round(0.05 * n)))
    background = float(np.median(np.r_[a[:k], a[-k:]]))
    signal = background - a
    i0 = int(np.argmax(signal))
    amplitude = float(signal[i0])
    if amplitude <= 1e-12 * abs(background) or amplitude <= 0:
        return ResonanceMetrics(background, 0.0, 0.0, 0.0, 0.0, 0.0, 0, False, ())
    half_level = amplitude / 2
    left = _crossing(x, signal, i0, 0, half_level)
    right = _crossing(x, signal, i0, n - 1, half_level)
    fwhm = float(right - left)
    peaks, _ = find_peaks(np.r_[-np.inf, signal, -np.inf], prominence=0.05 * amplitude)
    peaks = peaks - 1
    positions = tuple(float(_refine_peak(x, signal, p)) for p in peaks)
    contrast = amplitude / background if background > 0 else 0.0
    return ResonanceMetrics(
        background=background,
        amplitude=amplitude,
        fwhm=fwhm,
        contrast=float(contrast),
        amp_to_width=amplitude / fwhm if fwhm > 0 else 0.0,
        center=float(0.5 * (left + right)),
        n_peaks=len(peaks),
        resonance_found=True,
        peak_positions=positions,
    )


def bfield_family(config: ScanConfig, B_values: Sequence[float], workers: int | None = None) -> list[BFieldPoint]:
    """Scan the same configuration at several longitudinal fields."""
    out = []
    for B in B_values:
        if B < 0:
            raise InvalidArgumentError("B values must be >= 0")
        ls = scan(config.replace(B=float(B)), workers=workers)
        out.append(BFieldPoint(float(B), ls, extract_metrics(ls)))
    return out


def _parse_scheme(entry) -> tuple[str, float]:
    if isinstance(entry, str):
        name, _, fe = entry.partition("/")
        return name, float(fe) if fe else None
    name, fe = entry
    return name, float(fe)


def compare_schemes(
    base: ScanConfig,
    schemes: Sequence,
    rabi_values: Sequence[float],
    workers: int | None = None,
) -> list[ComparisonRow]:
    """Metrics for several schemes over a sweep of the (matched) Rabi scale.

    Parameters
    ----------
    schemes : sequence of ``(scheme, excited_F)`` or ``"scheme/F"`` strings
    rabi_values : Rabi scales (rad/s) applied to both components
    """
    parsed = [_parse_scheme(s) for s in schemes]
    if len(parsed) < 2:
        raise InvalidArgumentError("compare_schemes needs at least two schemes")
    rows = []
    for name, fe in parsed:
        fe = base.excited_F if fe is None else fe
        for rabi in rabi_values:
            cfg = base.replace(scheme=name, excited_F=fe, polarizations=None, rabi1=float(rabi), rabi2=float(rabi))
            rows.append(ComparisonRow(name, fe, float(rabi), extract_metrics(scan(cfg, workers=workers))))
    return rows


def one_photon_spectrum(
    atom: AtomSpec,
    ground_F,
    detunings: np.ndarray,
    rabi: float = TWO_PI * 10e3,
    rates: RateSet | None = None,
    doppler_fwhm: float = 0.0,
    grid_step: float = 2e6,
) -> np.ndarray:
    """Single-frequency absorption from one ground level through both excited levels.

    ``detunings`` (Hz) are measured from the ``ground_F -> lower F_e`` line;
    the upper excited level sits ``atom.hfs_excited`` higher. A weak linear
    x-polarized field is applied at zero magnetic field.

    In this weak-field limit the homogeneous spectrum depends on detuning and
    Doppler shift only through their sum, so the Doppler average is a
    convolution. It is evaluated on a uniform grid of spacing ``grid_step``
    spanning +-6 sigma around the requested detunings; Gauss-Hermite nodes
    are too sparse when the homogeneous lines are much narrower than the
    Doppler width.
    """
    rates = rates if rates is not None else RateSet.for_atom(atom)
    ground_F = half(ground_F)
    other = atom.lower_F if ground_F == atom.upper_F else atom.upper_F
    pol = polarization_from_ellipse(0.0, 0.0)
    gens = []
    for Fe, offset in ((atom.lower_F, 0.0), (atom.upper_F, atom.hfs_excited)):
        levels = build_level_set(atom, Fe, 0.0)
        fld = BichromaticField(
            FieldComponent(rabi, 0.0, pol, ground_F),
            FieldComponent(0.0, 0.0, pol, other),
        )
        gens.append((build_lindblad(levels, fld, rates), offset))

    def homogeneous(d):
        return sum(absorption(steady_state(g.shifted(optical=d - off))) for g, off in gens)

    det = np.asarray(detunings, float)
    if doppler_fwhm < 0:
        raise InvalidArgumentError("doppler_fwhm must be >= 0")
    if doppler_fwhm == 0:
        return np.array([homogeneous(d) for d in det])
    if not grid_step > 0:
        raise InvalidArgumentError("grid_step must be positive")
    sigma = doppler_fwhm / (2 * np.sqrt(2 * np.log(2)))
    k = int(np.ceil(6 * sigma / grid_step))
    shifts = grid_step * np.arange(-k, k + 1)
    weights = np.exp(-0.5 * (shifts / sigma) ** 2)
    weights /= weights.sum()
    grid = np.arange(det.min() + shifts[0], det.max() + shifts[-1] + grid_step, grid_step)
    values = np.array([homogeneous(d) for d in grid])
    return np.array([weights @ np.interp(d + shifts, grid, values) for d in det])


def _csv(header: str, rows, comment: str | None = None) -> str:
    buf = io.StringIO()
    if comment:
        for line in comment.splitlines():
            buf.write(f"# {line}\n")
    buf.write(header + "\n")
    for row in rows:
        buf.write(",".join(v if isinstance(v, str) else format_float(v) for v in row) + "\n")
    return buf.getvalue()


def lineshape_csv(ls: Lineshape, comment: str | None = None) -> str:
    return _csv("delta_R_hz,absorption", zip(ls.delta_r, ls.absorption), comment)


def bfield_csv(family: Sequence[BFieldPoint], comment: str | None = None) -> str:
    rows = ((p.B, d, a) for p in family for d, a in zip(p.lineshape.delta_r, p.lineshape.absorption))
    return _csv("B_gauss,delta_R_hz,absorption", rows, comment)


def comparison_csv(rows: Sequence[ComparisonRow], comment: str | None = None) -> str:
    header = "scheme,excited_F,rabi_scale,background,amplitude,fwhm_hz,contrast,amp_to_width,center_hz,n_peaks"
    body = (
        (r.scheme, r.excited_F, r.rabi_scale, r.metrics.background, r.metrics.amplitude,
         r.metrics.fwhm, r.metrics.contrast, r.metrics.amp_to_width, r.metrics.center,
         str(r.metrics.n_peaks))
        for r in rows
    )
    return _csv(header, body, comment)
