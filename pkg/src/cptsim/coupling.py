"""
Light-atom coupling in the two-photon rotating frame, and the algebra of
dark and trap states.

Frame
-----
The two-photon detuning is shared symmetrically by the two components, as
for a pair of modulation sidebands: the component on the lower ground level
moves by ``+raman_detuning/2`` and the one on the upper level by
``-raman_detuning/2``. Diagonal of the rotating-frame Hamiltonian (rad/s):

* lower ground level ``|F_low, m>``: ``2 pi (z(m) + delta)``
* upper ground level ``|F_up, m>``:  ``2 pi z(m)``
* excited ``|F_e, m>``:             ``2 pi (z_e(m) - Delta_up)``

where ``z`` are Zeeman shifts from :mod:`cptsim.structure`,
``Delta_up = optical_detuning_up - raman_detuning/2`` is the optical
detuning of the component on the upper ground level and
``delta = raman_detuning + Delta_low - Delta_up`` with the nominal optical
detunings. Off-diagonal entries are
the coupling entries ``C[e, g]`` and their conjugates.

A *stationary dark state* is a null vector of ``C`` supported on a set of
ground levels that are degenerate in this frame. A *trap state* is a single
ground sublevel whose column of ``C`` is identically zero.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .angmom import dipole_weight, half
from .errors import DegenerateInputError, InvalidArgumentError, SingularityError
from .field import BichromaticField
from .structure import J_EXCITED, J_GROUND, Level, LevelSet, pair_resonance_frequency

__all__ = [
    "CouplingOperator",
    "RWAHamiltonian",
    "SchemeReport",
    "build_coupling",
    "rwa_hamiltonian",
    "ground_frame_energies",
    "pair_raman_detuning",
    "stationary_dark_states",
    "construct_dark_pm",
    "trap_states",
    "raman_amplitude",
    "DEGENERACY_FRACTION",
    "NULL_TOLERANCE",
]

#: Ground levels closer than this fraction of Gamma/2pi (Hz) are degenerate.
DEGENERACY_FRACTION = 1e-6
#: Singular values below this fraction of ||C|| count as zero.
NULL_TOLERANCE = 1e-10

TWO_PI = 2 * np.pi


@dataclass(frozen=True)
class CouplingOperator:
    """Rows: excited sublevels; columns: ground sublevels (rad/s)."""

    matrix: np.ndarray
    levels: LevelSet

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.matrix, 2)) if self.matrix.size else 0.0

    def residual(self, v: np.ndarray) -> float:
        """``||C v||`` for a ground-space vector."""
        return float(np.linalg.norm(self.matrix @ v))


@dataclass(frozen=True)
class RWAHamiltonian:
    matrix: np.ndarray  # rad/s, ground levels first
    levels: LevelSet
    frame_note: str = (
        "two-photon rotating frame; lower ground level shifted by +2pi*delta_R, "
        "excited diagonal -2pi*Delta(upper component)"
    )


@dataclass
class SchemeReport:
    """Outcome of a dark/trap-state census.

    ``dark_states[k]`` is a normalized ground-space vector supported on the
    ground indices ``dark_blocks[k]``. ``pair_flags`` maps each examined
    ``(m_lower, m_upper)`` pair to the number of dark states in its block,
    and ``raman_detunings`` to the two-photon detuning (Hz) that made the
    pair resonant.
    """

    levels: LevelSet
    dark_states: list = field(default_factory=list)
    dark_blocks: list = field(default_factory=list)
    trap_states: list = field(default_factory=list)
    pair_flags: dict = field(default_factory=dict)
    raman_detunings: dict = field(default_factory=dict)
    max_residual: float = 0.0

    @property
    def n_dark(self) -> int:
        return len(self.dark_states)

    @property
    def n_trap(self) -> int:
        return len(self.trap_states)

    def count_for_pairs(self, pairs) -> int:
        return sum(self.pair_flags.get(tuple(half(x) for x in p), 0) for p in pairs)

    def to_text(self) -> str:
        """Plain ``key: value`` report used by the command line."""
        lv = self.levels
        lines = [
            f"atom: {lv.atom.name}",
            f"excited_F: {lv.excited_F_selected}",
            f"B_gauss: {lv.B:.12g}",
            f"dark_states: {self.n_dark}",
            f"trap_states: {self.n_trap}",
        ]
        for (ml, mu), n in sorted(self.pair_flags.items()):
            d = self.raman_detunings.get((ml, mu), float("nan"))
            lines.append(f"pair ({ml},{mu}): dark={n} delta_R_hz={d:.12g}")
        for k, (v, block) in enumerate(zip(self.dark_states, self.dark_blocks)):
            terms = []
            for i in block:
                lev = lv.ground_levels[i]
                c = v[i]
                terms.append(f"({c.real:.12g}{c.imag:+.12g}j)|F={lev.F},m={lev.m}>")
            lines.append(f"dark[{k}]: " + " + ".join(terms))
        for lev in self.trap_states:
            lines.append(f"trap: |F={lev.F},m={lev.m}>")
        lines.append(f"max_residual: {self.max_residual:.3e}")
        return "\n".join(lines) + "\n"


def _components(levels: LevelSet, field: BichromaticField):
    atom = levels.atom
    up = field.for_ground_F(atom.upper_F)
    low = field.for_ground_F(atom.lower_F)
    for comp in field.components:
        if comp.target_ground_F not in atom.ground_F():
            raise InvalidArgumentError(
                f"field component targets F={comp.target_ground_F}, not a ground level of {atom.name}"
            )
    if up is None or low is None:
        raise InvalidArgumentError("field must address both ground hyperfine levels")
    return up, low


def build_coupling(levels: LevelSet, field: BichromaticField) -> CouplingOperator:
    """Coupling matrix ``C[e, g] = sum_q rabi * amp_q * <e| d_q |g>``.

    Each ground level only sees the component assigned to its hyperfine
    level; the far-detuned cross terms are dropped.
    """
    _components(levels, field)
    atom = levels.atom
    Fe = levels.excited_F_selected
    C = np.zeros((levels.n_excited, levels.n_ground), dtype=complex)
    for g, lev in enumerate(levels.ground_levels):
        comp = field.for_ground_F(lev.F)
        if comp is None or comp.rabi_scale == 0:
            continue
        for q in (-1, +1):
            amp = comp.amplitude(q)
            me = lev.m + half(q)
            if amp == 0 or abs(me) > Fe:
                continue
            w = dipole_weight(lev.F, lev.m, Fe, me, q, atom.nuclear_spin, J_GROUND, J_EXCITED)
            if w != 0.0:
                C[levels.excited_index(me), g] += amp * w
    return CouplingOperator(C, levels)


def _frame_detuning(levels: LevelSet, field: BichromaticField) -> tuple[float, float]:
    """(effective two-photon detuning, upper-component optical detuning), Hz."""
    up, low = _components(levels, field)
    delta = field.raman_detuning + low.optical_detuning - up.optical_detuning
    return delta, up.optical_detuning - 0.5 * field.raman_detuning


def ground_frame_energies(levels: LevelSet, field: BichromaticField) -> np.ndarray:
    """Rotating-frame energies of the ground sublevels, Hz."""
    delta, _ = _frame_detuning(levels, field)
    low_F = levels.atom.lower_F
    return np.array([lev.energy + (delta if lev.F == low_F else 0.0) for lev in levels.ground_levels])


def rwa_hamiltonian(levels: LevelSet, field: BichromaticField) -> RWAHamiltonian:
    """Time-independent Hamiltonian (rad/s) on ground + excited sublevels."""
    C = build_coupling(levels, field).matrix
    _, det_up = _frame_detuning(levels, field)
    ng = levels.n_ground
    diag = np.concatenate([
        ground_frame_energies(levels, field),
        [lev.energy - det_up for lev in levels.excited_levels],
    ])
    H = np.diag(TWO_PI * diag).astype(complex)
    H[ng:, :ng] = C
    H[:ng, ng:] = C.conj().T
    return RWAHamiltonian(H, levels)


def pair_raman_detuning(levels: LevelSet, m_lower, m_upper) -> float:
    """Two-photon detuning (Hz) at which the ``(m_lower, m_upper)`` pair is resonant."""
    atom = levels.atom
    levels.ground_index(atom.lower_F, m_lower)
    levels.ground_index(atom.upper_F, m_upper)
    return float(pair_resonance_frequency(atom, m_lower, m_upper, levels.B) - atom.hfs_ground)


def _tune_to_pair(levels, field, m_lower, m_upper) -> BichromaticField:
    up, low = _components(levels, field)
    target = pair_raman_detuning(levels, m_lower, m_upper)
    return field.with_raman_detuning(target - (low.optical_detuning - up.optical_detuning))


def _degenerate_block(energies: np.ndarray, seed: int, tol: float) -> tuple[int, ...]:
    """Indices connected to ``seed`` by chains of gaps below ``tol``."""
    order = np.argsort(energies, kind="stable")
    pos = int(np.where(order == seed)[0][0])
    lo = hi = pos
    while lo > 0 and energies[order[lo]] - energies[order[lo - 1]] < tol:
        lo -= 1
    while hi < len(order) - 1 and energies[order[hi + 1]] - energies[order[hi]] < tol:
        hi += 1
    return tuple(sorted(int(i) for i in order[lo:hi + 1]))


def _null_space(C: np.ndarray, cols, scale: float) -> list[np.ndarray]:
    n_ground = C.shape[1]
    cols = list(cols)
    if not cols:
        return []
    sub = C[:, cols]
    _, s, vh = np.linalg.svd(sub, full_matrices=True)
    rank = int(np.sum(s > NULL_TOLERANCE * scale)) if scale > 0 else 0
    out = []
    for row in vh[rank:]:
        v = np.zeros(n_ground, dtype=complex)
        v[cols] = row.conj()
        k = int(np.argmax(np.abs(v)))
        v *= np.exp(-1j * np.angle(v[k]))
        out.append(v / np.linalg.norm(v))
    return out


def trap_states(levels: LevelSet, field: BichromaticField) -> list[Level]:
    """Ground sublevels with an identically zero coupling column."""
    C = build_coupling(levels, field).matrix
    return [lev for g, lev in enumerate(levels.ground_levels) if not np.any(C[:, g])]


def stationary_dark_states(levels: LevelSet, field: BichromaticField, pair="auto") -> SchemeReport:
    """Census of stationary dark states and trap states.

    Parameters
    ----------
    pair : (m_lower, m_upper), list of pairs, "auto" or "mirror"
        With an explicit pair the two-photon detuning is set to that pair's
        resonance and only its degenerate block is examined. ``"auto"``
        repeats this for every pair of sublevels sharing an excited level;
        ``"mirror"`` for the pairs ``(-m, +m)``, whose resonances stay near
        zero two-photon detuning (the ``(-1)-(+1)`` and ``(+1)-(-1)`` pairs
        and the 0-0 pair).

    Raises
    ------
    InvalidArgumentError
        If the pair does not exist in the level set.
    """
    atom = levels.atom
    C = build_coupling(levels, field).matrix
    scale = float(np.linalg.norm(C, 2)) if C.size else 0.0
    tol = DEGENERACY_FRACTION * atom.gamma / TWO_PI
    trap_idx = {g for g in range(levels.n_ground) if not np.any(C[:, g])}
    report = SchemeReport(levels, trap_states=[levels.ground_levels[g] for g in sorted(trap_idx)])

    if isinstance(pair, str):
        if pair == "auto":
            pairs = []
            low_idx = [g for g, lev in enumerate(levels.ground_levels) if lev.F == atom.lower_F]
            up_idx = [g for g, lev in enumerate(levels.ground_levels) if lev.F == atom.upper_F]
            for gl, gu in itertools.product(low_idx, up_idx):
                if np.any((C[:, gl] != 0) & (C[:, gu] != 0)):
                    pairs.append((levels.ground_levels[gl].m, levels.ground_levels[gu].m))
        elif pair == "mirror":
            pairs = [(m, -m) for m in atom.lower_F.projections()]
        else:
            raise InvalidArgumentError(f"pair must be (m_lower, m_upper), a list of pairs, 'auto' or 'mirror', got {pair!r}")
    else:
        seq = list(pair)
        if len(seq) == 2 and not isinstance(seq[0], (tuple, list)):
            seq = [seq]
        pairs = []
        for p in seq:
            m_low, m_up = (half(x) for x in p)
            levels.ground_index(atom.lower_F, m_low)
            levels.ground_index(atom.upper_F, m_up)
            pairs.append((m_low, m_up))

    seen = {}
    for m_low, m_up in pairs:
        tuned = _tune_to_pair(levels, field, m_low, m_up)
        energies = ground_frame_energies(levels, tuned)
        seed = levels.ground_index(atom.lower_F, m_low)
        block = _degenerate_block(energies, seed, tol)
        if block not in seen:
            cols = [g for g in block if g not in trap_idx]
            seen[block] = _null_space(C, cols, scale)
            for v in seen[block]:
                report.dark_states.append(v)
                report.dark_blocks.append(tuple(g for g in block if abs(v[g]) > 0))
                report.max_residual = max(report.max_residual, float(np.linalg.norm(C @ v)))
        report.pair_flags[(m_low, m_up)] = len(seen[block])
        report.raman_detunings[(m_low, m_up)] = tuned.raman_detuning
    return report


def construct_dark_pm(levels: LevelSet, field: BichromaticField, sign: str | int) -> np.ndarray:
    """Closed-form dark state of the ``(-1)-(+1)`` or ``(+1)-(-1)`` Lambda pair.

    For ``sign = +`` the state is
    ``N { |F_low, -1> - (V_low E_low,+1) / (V_up E_up,-1) |F_up, +1> }``
    with ``V`` the dipole weights to ``|F_e = 1, m = 0>`` and ``E`` the
    circular amplitudes of the component on each ground level; ``sign = -``
    mirrors all projections. Valid for I = 3/2 atoms excited via F_e = 1.

    Returns
    -------
    ndarray
        Normalized ground-space vector.

    Raises
    ------
    DegenerateInputError
        If the upper-level leg of the Lambda system has zero amplitude.
    """
    atom = levels.atom
    if atom.nuclear_spin != half(1.5) or levels.excited_F_selected != 1:
        raise InvalidArgumentError("closed-form |dark(+-)> needs I = 3/2 and F_e = 1")
    if sign in ("+", +1):
        s = +1
    elif sign in ("-", -1):
        s = -1
    else:
        raise InvalidArgumentError(f"sign must be '+' or '-', got {sign!r}")
    up, low = _components(levels, field)
    I = atom.nuclear_spin
    m_low, m_up = -s, +s
    # lower leg |1, -s> -> |1, 0> absorbs e_{+s}; upper leg |2, +s> -> |1, 0> absorbs e_{-s}
    v_low = dipole_weight(1, m_low, 1, 0, s, I, J_GROUND, J_EXCITED) * low.amplitude(s)
    v_up = dipole_weight(2, m_up, 1, 0, -s, I, J_GROUND, J_EXCITED) * up.amplitude(-s)
    if v_up == 0:
        raise DegenerateInputError(
            f"|dark({'+' if s > 0 else '-'})> undefined: upper-level leg amplitude is zero"
        )
    vec = np.zeros(levels.n_ground, dtype=complex)
    vec[levels.ground_index(1, m_low)] = 1.0
    vec[levels.ground_index(2, m_up)] = -v_low / v_up
    return vec / np.linalg.norm(vec)


def raman_amplitude(levels: LevelSet, field: BichromaticField, m_lower, m_upper) -> complex:
    """Effective two-photon coupling between ``|F_low, m_lower>`` and ``|F_up, m_upper>``.

    Adiabatic elimination of the excited level:
    ``sum_e conj(C[e, up]) C[e, low] / (2 pi Delta_e)`` in rad/s, where
    ``Delta_e`` is the one-photon detuning (Hz) of the upper-level component
    from ``|F_up, m_upper> -> |e>``.

    Raises
    ------
    SingularityError
        If a contributing excited sublevel is exactly on one-photon resonance.
    """
    atom = levels.atom
    gl = levels.ground_index(atom.lower_F, m_lower)
    gu = levels.ground_index(atom.upper_F, m_upper)
    C = build_coupling(levels, field).matrix
    _, det_up = _frame_detuning(levels, field)
    z_up = levels.ground_levels[gu].energy
    total = 0j
    for e, lev in enumerate(levels.excited_levels):
        term = np.conj(C[e, gu]) * C[e, gl]
        if term == 0:
            continue
        det = det_up - lev.energy + z_up
        if det == 0:
            raise SingularityError(
                f"zero one-photon detuning for excited m={lev.m}; choose a nonzero optical detuning"
            )
        total += term / (TWO_PI * det)
    return complex(total)
