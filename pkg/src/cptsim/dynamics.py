"""
Lindblad master equation on a :class:`~cptsim.structure.LevelSet`.

The density matrix is vectorized row-major (``rho.reshape(-1)``), so
``vec(A rho B) = kron(A, B.T) vec(rho)``. The generator contains

* the coherent part ``-i [H, rho]`` of the rotating-frame Hamiltonian,
* spontaneous emission through one jump operator per polarization
  ``q = -1, 0, +1`` and ground hyperfine level, normalized so every excited
  sublevel decays at exactly ``gamma_natural``,
* pure dephasing of optical coherences at ``optical_dephasing / 2``
  (buffer-gas collisions),
* relaxation of the ground block towards the fully mixed ground state at
  ``ground_relaxation`` (ground coherences decay at the same rate),
* optional quenching of the excited level into the mixed ground state.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field as dc_field

import numpy as np

from .angmom import dipole_weight, half
from .coupling import rwa_hamiltonian
from .errors import InvalidArgumentError, NonUniqueSteadyStateError, NumericalError
from .field import BichromaticField
from .structure import J_EXCITED, J_GROUND, AtomSpec, LevelSet

__all__ = [
    "RateSet",
    "DensityMatrix",
    "LindbladGenerator",
    "decay_operators",
    "build_lindblad",
    "steady_state",
    "absorption",
    "doppler_average",
    "mixed_ground_state",
]

TWO_PI = 2 * np.pi


@dataclass(frozen=True)
class RateSet:
    """Relaxation rates, all in rad/s.

    Buffer-gas pressure is not converted into rates; the defaults
    (100 MHz optical dephasing, 500 Hz ground relaxation) are representative
    of a few Torr of neon at 50 C and are meant to be overridden.
    """

    gamma_natural: float
    optical_dephasing: float = TWO_PI * 100e6
    ground_relaxation: float = TWO_PI * 500.0
    extra_excited_quench: float = 0.0

    def __post_init__(self):
        for name in ("gamma_natural", "optical_dephasing", "ground_relaxation", "extra_excited_quench"):
            v = getattr(self, name)
            if not v >= 0:
                raise InvalidArgumentError(f"{name} must be >= 0, got {v}")
        if self.ground_relaxation >= self.gamma_natural > 0:
            warnings.warn("ground_relaxation is not small compared with gamma_natural", stacklevel=3)

    @classmethod
    def for_atom(cls, atom: AtomSpec, **kwargs) -> "RateSet":
        return cls(gamma_natural=kwargs.pop("gamma_natural", atom.gamma), **kwargs)


@dataclass(frozen=True)
class DensityMatrix:
    matrix: np.ndarray
    levels: LevelSet

    @property
    def populations(self) -> np.ndarray:
        return self.matrix.diagonal().real.copy()

    @property
    def ground_block(self) -> np.ndarray:
        n = self.levels.n_ground
        return self.matrix[:n, :n]

    @property
    def excited_population(self) -> float:
        return float(self.matrix.diagonal()[self.levels.n_ground:].real.sum())

    def hermiticity_error(self) -> float:
        return float(np.abs(self.matrix - self.matrix.conj().T).max())

    def trace_error(self) -> float:
        return float(abs(np.trace(self.matrix) - 1))

    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(0.5 * (self.matrix + self.matrix.conj().T)).min())


def mixed_ground_state(levels: LevelSet) -> DensityMatrix:
    """Equal-weight mixture of all ground sublevels."""
    rho = np.zeros((levels.dim, levels.dim), dtype=complex)
    idx = np.arange(levels.n_ground)
    rho[idx, idx] = 1.0 / levels.n_ground
    return DensityMatrix(rho, levels)


@dataclass(frozen=True)
class LindbladGenerator:
    """Superoperator acting on row-major vectorized density matrices.

    ``raman_diagonal`` and ``optical_diagonal`` are the (diagonal)
    derivatives of the superoperator with respect to the two-photon detuning
    and to a common optical detuning shift, both per Hz, so a detuning
    sweep reuses one construction.
    """

    superoperator: np.ndarray
    dim: int
    levels: LevelSet
    rates: RateSet
    raman_diagonal: np.ndarray = dc_field(repr=False)
    optical_diagonal: np.ndarray = dc_field(repr=False)

    def trace_row(self) -> np.ndarray:
        """``d tr(rho)/dt`` as a row vector; zero for a trace-preserving map."""
        t = np.eye(self.dim).reshape(-1)
        return t @ self.superoperator

    def shifted(self, raman: float = 0.0, optical: float = 0.0) -> "LindbladGenerator":
        """Generator with the two-photon detuning and/or both optical detunings moved (Hz)."""
        if raman == 0.0 and optical == 0.0:
            return self
        L = self.superoperator.copy()
        k = np.arange(self.dim * self.dim)
        L[k, k] += raman * self.raman_diagonal + optical * self.optical_diagonal
        return LindbladGenerator(L, self.dim, self.levels, self.rates, self.raman_diagonal, self.optical_diagonal)

    def apply(self, rho: np.ndarray) -> np.ndarray:
        return (self.superoperator @ np.asarray(rho).reshape(-1)).reshape(self.dim, self.dim)


def _commutator(H: np.ndarray) -> np.ndarray:
    eye = np.eye(H.shape[0])
    return -1j * (np.kron(H, eye) - np.kron(eye, H.T))


def _dissipator(L: np.ndarray) -> np.ndarray:
    eye = np.eye(L.shape[0])
    LdL = L.conj().T @ L
    return np.kron(L, L.conj()) - 0.5 * np.kron(LdL, eye) - 0.5 * np.kron(eye, LdL.T)


def _reset(P_from: np.ndarray, target: np.ndarray, rate: float) -> np.ndarray:
    """``rate * (tr(P rho) target - {P, rho}/2)`` for diagonal projector ``P``."""
    eye = np.eye(P_from.shape[0])
    gain = np.outer(target.reshape(-1), P_from.T.reshape(-1))
    loss = 0.5 * (np.kron(P_from, eye) + np.kron(eye, P_from.T))
    return rate * (gain - loss)


def decay_operators(levels: LevelSet, gamma: float) -> list[np.ndarray]:
    """Spontaneous-emission jump operators, one per ``(q, F_g)``.

    ``L[g, e]`` is proportional to ``<e| d_q |g>``. Decay into the two ground
    hyperfine levels gets separate operators: those photons differ by the
    hyperfine frequency, so emission transfers no coherence between the two
    levels. Every excited sublevel's total decay rate is normalized to
    ``gamma``.
    """
    atom = levels.atom
    ng, d = levels.n_ground, levels.dim
    Fe = levels.excited_F_selected
    ops = {(q, F): np.zeros((d, d)) for q in (-1, 0, 1) for F in atom.ground_F()}
    for e, lev_e in enumerate(levels.excited_levels):
        for g, lev_g in enumerate(levels.ground_levels):
            q_twice = lev_e.m.twice_value - lev_g.m.twice_value
            if abs(q_twice) > 2:
                continue
            q = q_twice // 2
            w = dipole_weight(lev_g.F, lev_g.m, Fe, lev_e.m, q, atom.nuclear_spin, J_GROUND, J_EXCITED)
            ops[q, lev_g.F][g, ng + e] = w
    total = sum((op ** 2).sum(axis=0) for op in ops.values())[ng:]
    if np.any(total <= 0):
        raise NumericalError("an excited sublevel has no decay channel")
    scale = np.ones(d)
    scale[ng:] = np.sqrt(gamma / total)
    return [op * scale[None, :] for op in ops.values() if np.any(op)]


def build_lindblad(levels: LevelSet, field: BichromaticField, rates: RateSet) -> LindbladGenerator:
    """Assemble the full Liouvillian for one field configuration."""
    H = rwa_hamiltonian(levels, field).matrix
    d = levels.dim
    if H.shape != (d, d):
        raise InvalidArgumentError("Hamiltonian and level set dimensions differ")
    ng = levels.n_ground
    Pg = np.diag(np.r_[np.ones(ng), np.zeros(d - ng)])
    Pe = np.eye(d) - Pg
    mixed = Pg / ng

    L = _commutator(H)
    for op in decay_operators(levels, rates.gamma_natural):
        L += _dissipator(op)
    if rates.optical_dephasing > 0:
        L += _dissipator(np.sqrt(rates.optical_dephasing) * Pe)
    if rates.ground_relaxation > 0:
        L += _reset(Pg, mixed, rates.ground_relaxation)
    if rates.extra_excited_quench > 0:
        L += _reset(Pe, mixed, rates.extra_excited_quench)

    low = np.array([lev.F == levels.atom.lower_F for lev in levels.ground_levels] + [False] * (d - ng), float)
    exc = np.diag(Pe).copy()
    # d(-i[H, rho])_ij / d(param) for diagonal dH = 2 pi diag(p): -i 2 pi (p_i - p_j);
    # delta_R shifts the lower ground level by 1 and the excited level by 1/2
    p_raman = low + 0.5 * exc
    raman = -1j * TWO_PI * (p_raman[:, None] - p_raman[None, :]).reshape(-1)
    optical = -1j * TWO_PI * (-(exc[:, None] - exc[None, :])).reshape(-1)
    return LindbladGenerator(L, d, levels, rates, raman, optical)


def steady_state(gen: LindbladGenerator) -> DensityMatrix:
    """Unique stationary state of ``gen``.

    Solved directly: the first population equation is replaced by the trace
    condition. Requires ``ground_relaxation > 0`` (or otherwise a unique
    kernel).

    Raises
    ------
    NonUniqueSteadyStateError
        If the kernel of the generator is more than one-dimensional.
    NumericalError
        If the solve fails or its residual exceeds ``1e-10 * ||L||``.
    """
    L = gen.superoperator
    d = gen.dim
    norm = float(np.linalg.norm(L, 1))
    if gen.rates.ground_relaxation == 0:
        s = np.linalg.svd(L, compute_uv=False)
        if np.sum(s < 1e-10 * s[0]) > 1:
            raise NonUniqueSteadyStateError(
                "steady state is not unique (dark states without ground relaxation); "
                "use ground_relaxation > 0"
            )
    A = L.copy()
    scale = norm if norm > 0 else 1.0
    A[0, :] = scale * np.eye(d).reshape(-1)
    b = np.zeros(d * d, dtype=complex)
    b[0] = scale
    try:
        x = np.linalg.solve(A, b)
    except np.linalg.LinAlgError as exc:
        raise NonUniqueSteadyStateError(
            "singular Liouvillian; use ground_relaxation > 0"
        ) from exc
    rho = x.reshape(d, d)
    rho = 0.5 * (rho + rho.conj().T)
    resid = float(np.linalg.norm(L @ rho.reshape(-1)))
    if not np.isfinite(resid) or resid > 1e-10 * scale:
        raise NumericalError(f"steady-state residual {resid:.3e} exceeds tolerance")
    return DensityMatrix(rho, gen.levels)


def absorption(rho: DensityMatrix, levels: LevelSet | None = None, gamma: float | None = None) -> float:
    """Photon scattering rate ``Gamma * P_excited`` (1/s).

    In the optically thin limit this is proportional to the absorbed power.
    """
    levels = levels if levels is not None else rho.levels
    g = levels.atom.gamma if gamma is None else gamma
    ng = levels.n_ground
    return float(g * rho.matrix.diagonal()[ng:].real.sum())


def doppler_average(spectrum_fn, fwhm: float, points: int = 21):
    """Average ``spectrum_fn(shift_hz)`` over a Gaussian velocity distribution.

    Gauss-Hermite quadrature with ``points`` nodes; ``shift_hz`` is the
    common Doppler shift of both optical frequencies. ``fwhm = 0`` returns
    ``spectrum_fn(0.0)``.
    """
    if fwhm < 0:
        raise InvalidArgumentError("fwhm must be >= 0")
    if points < 1:
        raise InvalidArgumentError("points must be >= 1")
    if fwhm == 0:
        return spectrum_fn(0.0)
    sigma = fwhm / (2 * np.sqrt(2 * np.log(2)))
    x, w = np.polynomial.hermite.hermgauss(points)
    w = w / np.sqrt(np.pi)
    total = None
    for xi, wi in zip(x, w):
        val = wi * np.asarray(spectrum_fn(np.sqrt(2) * sigma * xi))
        total = val if total is None else total + val
    return total[()] if np.ndim(total) == 0 else total
