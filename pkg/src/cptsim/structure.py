"""
Zeeman-resolved hyperfine structure of alkali D1 lines.

Ground-state energies come from the Breit-Rabi formula (exact for J = 1/2);
the selected excited hyperfine level is split linearly with its Lande
factor. All energies are frequencies in Hz, fields are in gauss.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field

import numpy as np
from scipy.constants import physical_constants

from .angmom import HalfInt, half
from .errors import InvalidArgumentError

__all__ = [
    "MU_B_HZ_PER_GAUSS",
    "AtomSpec",
    "Level",
    "LevelSet",
    "ATOMS",
    "get_atom",
    "lande_g",
    "breit_rabi_energy",
    "build_level_set",
    "pair_resonance_frequency",
]

#: Bohr magneton over Planck constant, Hz per gauss (about 1.399625 MHz/G).
MU_B_HZ_PER_GAUSS = physical_constants["Bohr magneton in Hz/T"][0] * 1e-4

J_GROUND = half(0.5)
J_EXCITED = half(0.5)  # D1 line


@dataclass(frozen=True)
class AtomSpec:
    """Constants of one alkali species on its D1 line.

    ``nuclear_gI`` follows the sign convention ``H_Z = mu_B (g_J J_z + g_I I_z) B``,
    so it is negative for the stable alkalis.
    """

    name: str
    nuclear_spin: HalfInt
    gJ_ground: float
    gJ_excited: float
    nuclear_gI: float
    hfs_ground: float  # Hz
    hfs_excited: float  # Hz, upper minus lower excited F
    gamma: float  # natural linewidth, rad/s
    doppler_fwhm: float = 0.0  # Hz

    def __post_init__(self):
        object.__setattr__(self, "nuclear_spin", half(self.nuclear_spin))
        if self.nuclear_spin.twice_value < 1:
            raise InvalidArgumentError("nuclear spin must be >= 1/2")
        if not self.hfs_ground > 0:
            raise InvalidArgumentError("ground hyperfine splitting must be positive")
        if not self.hfs_excited > 0:
            raise InvalidArgumentError("excited hyperfine splitting must be positive")
        if not self.gamma > 0:
            raise InvalidArgumentError("natural linewidth must be positive")
        if self.doppler_fwhm < 0:
            raise InvalidArgumentError("Doppler width must be >= 0")

    @property
    def upper_F(self) -> HalfInt:
        return self.nuclear_spin + half(0.5)

    @property
    def lower_F(self) -> HalfInt:
        return self.nuclear_spin - half(0.5)

    def ground_F(self) -> tuple[HalfInt, HalfInt]:
        return (self.lower_F, self.upper_F)

    def excited_F(self) -> tuple[HalfInt, HalfInt]:
        return (self.lower_F, self.upper_F)

    def replace(self, **changes) -> "AtomSpec":
        return dataclasses.replace(self, **changes)


_TWO_PI = 2 * np.pi

ATOMS: dict[str, AtomSpec] = {
    # hfs_excited: 812 MHz as quoted for the experiment (modern value 814.5 MHz)
    "rb87": AtomSpec(
        name="rb87",
        nuclear_spin=half(1.5),
        gJ_ground=2.00233113,
        gJ_excited=0.666,
        nuclear_gI=-0.0009951414,
        hfs_ground=6.834682610904e9,
        hfs_excited=812.0e6,
        gamma=_TWO_PI * 5.746e6,
        doppler_fwhm=400.0e6,
    ),
    "rb85": AtomSpec(
        name="rb85",
        nuclear_spin=half(2.5),
        gJ_ground=2.00233113,
        gJ_excited=0.666,
        nuclear_gI=-0.00029364000,
        hfs_ground=3.035732439e9,
        hfs_excited=361.58e6,
        gamma=_TWO_PI * 5.746e6,
        doppler_fwhm=400.0e6,
    ),
    "cs133": AtomSpec(
        name="cs133",
        nuclear_spin=half(3.5),
        gJ_ground=2.00254032,
        gJ_excited=0.665900,
        nuclear_gI=-0.00039885395,
        hfs_ground=9.192631770e9,
        hfs_excited=1167.68e6,
        gamma=_TWO_PI * 4.575e6,
        doppler_fwhm=360.0e6,
    ),
}
ATOMS["cs"] = ATOMS["cs133"]


def get_atom(name: str, **overrides) -> AtomSpec:
    """Look up a preset by name, optionally overriding any field."""
    key = name.lower()
    if key not in ATOMS:
        raise InvalidArgumentError(f"unknown atom preset {name!r}; known: {sorted(ATOMS)}")
    atom = ATOMS[key]
    if overrides:
        unknown = set(overrides) - {f.name for f in dataclasses.fields(AtomSpec)}
        if unknown:
            raise InvalidArgumentError(f"unknown AtomSpec fields: {sorted(unknown)}")
        atom = dataclasses.replace(atom, **overrides)
    return atom


@dataclass(frozen=True)
class Level:
    manifold: str  # "ground" or "excited"
    F: HalfInt
    m: HalfInt
    energy: float  # Hz, relative to the B = 0 position of this F level

    def __post_init__(self):
        if self.manifold not in ("ground", "excited"):
            raise InvalidArgumentError(f"manifold must be 'ground' or 'excited', got {self.manifold!r}")
        if abs(self.m) > self.F:
            raise InvalidArgumentError(f"|m|={abs(self.m)} exceeds F={self.F}")

    def label(self) -> str:
        tag = "g" if self.manifold == "ground" else "e"
        return f"{tag}(F={self.F},m={self.m})"


@dataclass(frozen=True)
class LevelSet:
    """Ground sublevels of both hyperfine levels plus one excited F level.

    Matrices built on a level set use the index order ``ground_levels``
    followed by ``excited_levels``; both lists are sorted by ``(F, m)``.
    """

    atom: AtomSpec
    B: float
    ground_levels: tuple[Level, ...]
    excited_levels: tuple[Level, ...]
    excited_F_selected: HalfInt
    _index: dict = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        index = {}
        for i, lev in enumerate(self.ground_levels):
            index[("ground", lev.F, lev.m)] = i
        for i, lev in enumerate(self.excited_levels):
            index[("excited", lev.F, lev.m)] = i
        object.__setattr__(self, "_index", index)

    @property
    def n_ground(self) -> int:
        return len(self.ground_levels)

    @property
    def n_excited(self) -> int:
        return len(self.excited_levels)

    @property
    def dim(self) -> int:
        return self.n_ground + self.n_excited

    @property
    def levels(self) -> tuple[Level, ...]:
        return self.ground_levels + self.excited_levels

    def ground_index(self, F, m) -> int:
        """Row/column of ``|F, m>`` within the ground block."""
        try:
            return self._index[("ground", half(F), half(m))]
        except KeyError:
            raise InvalidArgumentError(f"no ground level F={F}, m={m}") from None

    def excited_index(self, m) -> int:
        """Index of ``|F_e, m>`` within the excited block."""
        try:
            return self._index[("excited", self.excited_F_selected, half(m))]
        except KeyError:
            raise InvalidArgumentError(f"no excited level m={m} in F_e={self.excited_F_selected}") from None

    def manifold_mask(self, F) -> np.ndarray:
        """Boolean mask over ground levels belonging to hyperfine level ``F``."""
        F = half(F)
        return np.array([lev.F == F for lev in self.ground_levels])


def _check_ground_F(F, atom: AtomSpec) -> HalfInt:
    F = half(F)
    if F not in atom.ground_F() or F.twice_value < 0:
        raise InvalidArgumentError(f"F={F} is not a ground hyperfine level of {atom.name}")
    return F


def lande_g(F, manifold: str, atom: AtomSpec) -> float:
    """First-order hyperfine Lande factor, nuclear term included."""
    if manifold == "ground":
        gJ = atom.gJ_ground
        J = J_GROUND
    elif manifold == "excited":
        gJ = atom.gJ_excited
        J = J_EXCITED
    else:
        raise InvalidArgumentError(f"manifold must be 'ground' or 'excited', got {manifold!r}")
    F = half(F)
    valid = (atom.nuclear_spin - J, atom.nuclear_spin + J)
    if F not in valid or F.twice_value < 0:
        raise InvalidArgumentError(f"F={F} not allowed for {manifold} manifold of {atom.name}")
    f, i, j = float(F), float(atom.nuclear_spin), float(J)
    if f == 0:
        return 0.0
    ff = f * (f + 1)
    return (gJ * (ff - i * (i + 1) + j * (j + 1)) + atom.nuclear_gI * (ff + i * (i + 1) - j * (j + 1))) / (2 * ff)


def _branch_sign(branch, atom: AtomSpec) -> int:
    if isinstance(branch, str):
        if branch == "upper":
            return +1
        if branch == "lower":
            return -1
    try:
        F = half(branch)
    except Exception:
        raise InvalidArgumentError(f"branch must be 'upper', 'lower' or a ground F, got {branch!r}") from None
    if F == atom.upper_F:
        return +1
    if F == atom.lower_F:
        return -1
    raise InvalidArgumentError(f"F={F} is not a ground hyperfine level of {atom.name}")


def breit_rabi_energy(atom: AtomSpec, m, branch, B):
    """Exact J = 1/2 ground-state energy in Hz.

    Measured from the hyperfine-free fine-structure level, so the two
    hyperfine levels sit at ``+I/(2I+1)`` and ``-(I+1)/(2I+1)`` times the
    splitting at zero field. ``B`` (gauss) may be an array.

    Parameters
    ----------
    branch : {"upper", "lower"} or F
        Which of the two states with this ``m`` to return.
    """
    sign = _branch_sign(branch, atom)
    m = half(m)
    i2 = atom.nuclear_spin.twice_value  # 2I
    top = i2 + 1  # 2(I + 1/2)
    if (m.twice_value - top) % 2:
        raise InvalidArgumentError(f"m={m} has the wrong parity for F = I +- 1/2")
    if abs(m.twice_value) > top:
        raise InvalidArgumentError(f"|m|={abs(m)} exceeds I+1/2={atom.nuclear_spin + half(0.5)}")
    if sign < 0 and abs(m.twice_value) == top:
        raise InvalidArgumentError(f"m={m} only exists in the upper hyperfine level")
    B = np.asarray(B, dtype=float)
    if np.any(B < 0):
        raise InvalidArgumentError("B must be >= 0")
    dhfs = atom.hfs_ground
    mu = MU_B_HZ_PER_GAUSS
    I = float(atom.nuclear_spin)
    mf = float(m)
    if abs(m.twice_value) == top:
        # stretched states are exactly linear in B
        out = dhfs * I / (2 * I + 1) + np.sign(mf) * 0.5 * (atom.gJ_ground + 2 * I * atom.nuclear_gI) * mu * B
    else:
        x = (atom.gJ_ground - atom.nuclear_gI) * mu * B / dhfs
        root = np.sqrt(1 + 4 * mf * x / (2 * I + 1) + x * x)
        out = -dhfs / (2 * (2 * I + 1)) + atom.nuclear_gI * mu * mf * B + sign * 0.5 * dhfs * root
    return out[()] if out.ndim == 0 else out


def _centroid(atom: AtomSpec, sign: int) -> float:
    I = float(atom.nuclear_spin)
    if sign > 0:
        return atom.hfs_ground * I / (2 * I + 1)
    return -atom.hfs_ground * (I + 1) / (2 * I + 1)


def build_level_set(atom: AtomSpec, excited_F, B: float) -> LevelSet:
    """Enumerate ground and excited sublevels at field ``B`` (gauss)."""
    excited_F = half(excited_F)
    if excited_F not in atom.excited_F() or excited_F.twice_value < 0:
        raise InvalidArgumentError(f"excited F={excited_F} not in {[str(f) for f in atom.excited_F()]}")
    if B < 0:
        raise InvalidArgumentError("B must be >= 0")
    ground = []
    for F, branch, sign in ((atom.lower_F, "lower", -1), (atom.upper_F, "upper", +1)):
        c = _centroid(atom, sign)
        for m in F.projections():
            e = float(breit_rabi_energy(atom, m, branch, B)) - c
            ground.append(Level("ground", F, m, e))
    ge = lande_g(excited_F, "excited", atom)
    excited = [
        Level("excited", excited_F, m, ge * float(m) * MU_B_HZ_PER_GAUSS * B)
        for m in excited_F.projections()
    ]
    return LevelSet(atom, float(B), tuple(ground), tuple(excited), excited_F)


def pair_resonance_frequency(atom: AtomSpec, m_lower, m_upper, B):
    """Two-photon resonance ``E(upper F, m_upper) - E(lower F, m_lower)`` in Hz."""
    return breit_rabi_energy(atom, m_upper, "upper", B) - breit_rabi_energy(atom, m_lower, "lower", B)
