"""
Bichromatic running-wave field along z.

Polarizations are stored in the circular basis
``e_{+1} = -(e_x + i e_y)/sqrt(2)``, ``e_{-1} = (e_x - i e_y)/sqrt(2)``.
A z-propagating wave has no ``e_0`` component, so each frequency component is
fully described by the pair ``(amp_minus, amp_plus)`` and a Rabi scale.

``component1`` addresses the upper ground hyperfine level (F_g = 2 for
87Rb) and ``component2`` the lower one.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

import numpy as np

from .angmom import HalfInt, half
from .errors import InvalidArgumentError

__all__ = [
    "Polarization",
    "FieldComponent",
    "BichromaticField",
    "SCHEMES",
    "polarization_from_ellipse",
    "circular_components",
    "preset",
]

SCHEMES = ("lin_par_lin", "sigma_sigma", "lin_perp_lin")


@dataclass(frozen=True)
class Polarization:
    amp_minus: complex
    amp_plus: complex

    def __post_init__(self):
        object.__setattr__(self, "amp_minus", complex(self.amp_minus))
        object.__setattr__(self, "amp_plus", complex(self.amp_plus))

    @property
    def norm(self) -> float:
        return float(np.hypot(abs(self.amp_minus), abs(self.amp_plus)))

    def normalized(self) -> "Polarization":
        n = self.norm
        if n == 0:
            raise InvalidArgumentError("cannot normalize a zero polarization")
        return Polarization(self.amp_minus / n, self.amp_plus / n)

    def amplitude(self, q: int) -> complex:
        """Coefficient of ``e_q`` (zero for ``q = 0``)."""
        if q == -1:
            return self.amp_minus
        if q == +1:
            return self.amp_plus
        if q == 0:
            return 0j
        raise InvalidArgumentError(f"q must be -1, 0 or +1, got {q!r}")

    def with_phase(self, phi: float) -> "Polarization":
        f = np.exp(1j * phi)
        return Polarization(self.amp_minus * f, self.amp_plus * f)

    def cartesian(self) -> tuple[complex, complex]:
        """Jones vector ``(E_x, E_y)``."""
        s = 1 / np.sqrt(2)
        ex = s * (self.amp_minus - self.amp_plus)
        ey = -1j * s * (self.amp_minus + self.amp_plus)
        return complex(ex), complex(ey)


def polarization_from_ellipse(axis_angle: float, ellipticity: float) -> Polarization:
    """Normalized polarization of an ellipse.

    Parameters
    ----------
    axis_angle : float
        Orientation of the major axis measured from x, radians.
    ellipticity : float
        ``arctan(minor/major)`` with sign giving the handedness; 0 is linear,
        ``+pi/4`` is pure ``e_{+1}`` and ``-pi/4`` pure ``e_{-1}``.
    """
    c, s = np.cos(axis_angle), np.sin(axis_angle)
    # rotate (cos eps, i sin eps) by the axis angle
    ex = c * np.cos(ellipticity) - 1j * s * np.sin(ellipticity)
    ey = s * np.cos(ellipticity) + 1j * c * np.sin(ellipticity)
    r = 1 / np.sqrt(2)
    amp_plus = -r * (ex - 1j * ey)
    amp_minus = r * (ex + 1j * ey)
    return Polarization(_snap(amp_minus), _snap(amp_plus))


def _snap(z: complex, eps: float = 1e-15) -> complex:
    # round-off from cos(pi/4) - sin(pi/4) must not leave a spurious coupling
    re = 0.0 if abs(z.real) < eps else z.real
    im = 0.0 if abs(z.imag) < eps else z.imag
    return complex(re, im)


def circular_components(p: Polarization) -> tuple[complex, complex]:
    """Return ``(amp_minus, amp_plus)``."""
    return p.amp_minus, p.amp_plus


@dataclass(frozen=True)
class FieldComponent:
    rabi_scale: float  # rad/s
    optical_detuning: float  # Hz, from the target-F -> F_e centroid
    polarization: Polarization
    target_ground_F: HalfInt

    def __post_init__(self):
        if not self.rabi_scale >= 0:
            raise InvalidArgumentError(f"rabi_scale must be >= 0, got {self.rabi_scale}")
        object.__setattr__(self, "target_ground_F", half(self.target_ground_F))

    def amplitude(self, q: int) -> complex:
        return self.rabi_scale * self.polarization.amplitude(q)


@dataclass(frozen=True)
class BichromaticField:
    """Two frequency components and their two-photon (Raman) detuning.

    ``raman_detuning`` is the difference-frequency offset from the ground
    hyperfine splitting, Hz, shared symmetrically: the lower-level
    component moves by ``+raman_detuning/2`` and the upper-level one by
    ``-raman_detuning/2``. Nominal optical detunings that differ between the
    components add to it: the effective two-photon detuning is
    ``raman_detuning`` plus the lower-level component's optical detuning
    minus the upper-level one's.
    """

    component1: FieldComponent
    component2: FieldComponent
    raman_detuning: float = 0.0

    def __post_init__(self):
        if self.component1.target_ground_F == self.component2.target_ground_F:
            raise InvalidArgumentError("the two components must address different ground levels")

    @property
    def components(self) -> tuple[FieldComponent, FieldComponent]:
        return (self.component1, self.component2)

    def for_ground_F(self, F) -> FieldComponent | None:
        F = half(F)
        for comp in self.components:
            if comp.target_ground_F == F:
                return comp
        return None

    def replace(self, **changes) -> "BichromaticField":
        return dataclasses.replace(self, **changes)

    def with_raman_detuning(self, delta: float) -> "BichromaticField":
        return dataclasses.replace(self, raman_detuning=float(delta))

    def with_phase(self, phi: float) -> "BichromaticField":
        """Same field with a common phase on both polarizations."""
        c1 = dataclasses.replace(self.component1, polarization=self.component1.polarization.with_phase(phi))
        c2 = dataclasses.replace(self.component2, polarization=self.component2.polarization.with_phase(phi))
        return dataclasses.replace(self, component1=c1, component2=c2)

    def with_common_detuning_shift(self, shift: float) -> "BichromaticField":
        """Shift both optical detunings by ``shift`` Hz (e.g. a Doppler shift)."""
        c1 = dataclasses.replace(self.component1, optical_detuning=self.component1.optical_detuning + shift)
        c2 = dataclasses.replace(self.component2, optical_detuning=self.component2.optical_detuning + shift)
        return dataclasses.replace(self, component1=c1, component2=c2)


_SCHEME_ELLIPSES = {
    "lin_par_lin": ((0.0, 0.0), (0.0, 0.0)),
    "sigma_sigma": ((0.0, np.pi / 4), (0.0, np.pi / 4)),
    "lin_perp_lin": ((0.0, 0.0), (np.pi / 2, 0.0)),
}


def preset(
    scheme: str,
    rabi1: float,
    rabi2: float,
    raman_detuning: float = 0.0,
    *,
    ground_F: tuple = (2, 1),
    optical_detuning: float | tuple[float, float] = 0.0,
) -> BichromaticField:
    """Named polarization configuration.

    Parameters
    ----------
    scheme : {"lin_par_lin", "sigma_sigma", "lin_perp_lin"}
        Both components along x; both pure sigma+; x and y.
    rabi1, rabi2 : float
        Rabi scales (rad/s) of the components addressing ``ground_F[0]``
        and ``ground_F[1]``.
    ground_F : (upper, lower)
        Ground hyperfine levels addressed; defaults suit I = 3/2 atoms.
    """
    if scheme not in _SCHEME_ELLIPSES:
        raise InvalidArgumentError(f"unknown scheme {scheme!r}; choose from {SCHEMES}")
    if np.ndim(optical_detuning) == 0:
        det = (float(optical_detuning), float(optical_detuning))
    else:
        det = tuple(float(d) for d in optical_detuning)
    (a1, e1), (a2, e2) = _SCHEME_ELLIPSES[scheme]
    c1 = FieldComponent(rabi1, det[0], polarization_from_ellipse(a1, e1), ground_F[0])
    c2 = FieldComponent(rabi2, det[1], polarization_from_ellipse(a2, e2), ground_F[1])
    return BichromaticField(c1, c2, float(raman_detuning))
