"""Compiler and fault-tolerant resource estimator for effective-QED
Hamiltonians: lattice and momentum-space builders, Jordan-Wigner mapping,
product-formula circuit compilation with dense verification, commutator
Monte Carlo, phase-estimation cost chains, and Slater-determinant state
preparation."""

from .circuits import Circuit, Gate, cnot, format_circuit, parse_circuit, rz
from .dense import (
    circuit_to_unitary,
    exact_evolution,
    measure_trotter_error,
    pauli_to_dense,
    phase_estimate_emulation,
    spectral_distance,
)
from .errors import EqedcError
from .fermions import (
    ELECTRON,
    POSITRON,
    FermionPolynomial,
    FermionTerm,
    ModeIndex,
    check_hermitian,
    conserves_charge,
    format_polynomial,
    jordan_wigner,
    jw_case_expand,
    parse_polynomial,
    reduce_to_support,
)
from .lattice import LatticeConfig, build_lattice, free_dispersion
from .mc import McConfig, McResult, chi_h, format_mc_csv, run_campaign, sample_commutator
from .pauli import (
    PauliSum,
    PauliTerm,
    commutator,
    format_pauli_sum,
    parse_pauli_sum,
    spectral_norm,
)
from .rellium import (
    AmplitudeRequest,
    RelliumConfig,
    amplitude,
    build_rellium,
    build_rellium_blocks,
    cutoff_for_grid,
)
from .resources import (
    CutoffEstimate,
    QpePlan,
    ResourceReport,
    lattice_free_counts,
    planewave_cutoff,
    qpe_plan,
    qubitization_lambda,
    t_count,
    trotter_step_counts,
)
from .stateprep import (
    ActiveSpaceSpec,
    SlaterSpec,
    compile_givens,
    givens_decompose,
    mrci_determinant_count,
)
from .trotter import (
    TrotterPlan,
    compile_odd_family,
    compile_one_body,
    compile_trotter,
    ghz_diagonalizer,
    suzuki_coefficients,
)

__version__ = "0.1.0"
