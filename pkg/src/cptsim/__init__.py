"""Coherent-population-trapping resonance simulator for alkali D1 lines."""

from .angmom import (
    HalfInt,
    clebsch_gordan,
    dipole_weight,
    half,
    hyperfine_reduced_factor,
    wigner3j,
    wigner6j,
)
from .coupling import (
    CouplingOperator,
    RWAHamiltonian,
    SchemeReport,
    build_coupling,
    construct_dark_pm,
    pair_raman_detuning,
    raman_amplitude,
    rwa_hamiltonian,
    stationary_dark_states,
    trap_states,
)
from .dynamics import (
    DensityMatrix,
    LindbladGenerator,
    RateSet,
    absorption,
    build_lindblad,
    decay_operators,
    doppler_average,
    mixed_ground_state,
    steady_state,
)
from .errors import (
    CPTError,
    DegenerateInputError,
    InvalidArgumentError,
    NonUniqueSteadyStateError,
    NumericalError,
    SingularityError,
)
from .field import (
    SCHEMES,
    BichromaticField,
    FieldComponent,
    Polarization,
    circular_components,
    polarization_from_ellipse,
    preset,
)
from .spectroscopy import (
    DEFAULT_RABI,
    DEFAULT_RABI_SWEEP,
    BFieldPoint,
    ComparisonRow,
    Lineshape,
    ResonanceMetrics,
    ScanConfig,
    bfield_family,
    bfield_csv,
    compare_schemes,
    comparison_csv,
    extract_metrics,
    lineshape_csv,
    one_photon_spectrum,
    scan,
)
from .structure import (
    ATOMS,
    MU_B_HZ_PER_GAUSS,
    AtomSpec,
    Level,
    LevelSet,
    breit_rabi_energy,
    build_level_set,
    get_atom,
    lande_g,
    pair_resonance_frequency,
)

__version__ = "0.1.0"
