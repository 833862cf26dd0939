"""Dissipative preparation of arbitrary flux-qubit Bloch states.

A driven qubit exchanging excitations with a lossy microwave resonator can be
polarized into any chosen pure state: the drive quadratures and detunings
pick the Bloch direction, and matching the drive's effective precession rate
to the resonator detuning makes photon loss carry entropy out of the qubit.
The package provides the joint-system master equation, the reduced rate
model obtained by adiabatically eliminating the resonator, drive design for
arbitrary targets, and the analysis/optimization studies built on top.
"""

from .analysis import (
    PolarizationRow,
    RobustnessGrid,
    fit_exponential,
    normalized_sigma_z,
    robustness_map,
    table1_report,
    time_to_threshold,
)
from .lindblad import (
    AmbiguousSteadyStateError,
    HygieneError,
    Liouvillian,
    SolverError,
    Trajectory,
    batch_map,
    build_liouvillian,
    effective_nbar,
    evolve,
    fidelity_target,
    mixed_qubit_with_resonator,
    scenario_liouvillian,
    standard_dissipators,
    standard_observables,
    steady_state,
    thermal_occupation,
)
from .model import (
    DriveParams,
    FrameVectors,
    RwaCheck,
    SystemParams,
    TargetState,
    build_hamiltonian,
    design_drive,
    effective_rabi,
    frame_vectors,
    qubit_splitting,
    rotation_matrix,
    rwa_report,
    sigma_z_rotated,
)
from .operators import (
    DensityMatrix,
    Operator,
    annihilation,
    expect,
    expm,
    identity,
    kron,
    partial_trace_resonator,
    pauli,
    thermal_state,
)
from .optimize import Problem, SearchResult, steady_fidelity
from .tcl import (
    ModeRow,
    ModeTable,
    RateModel,
    equilibrium_sigma_z,
    gamma_z,
    mode_rates,
    mode_table,
    polarization_time,
    populations,
    rate_matrix,
    rate_model,
)
from .units import to_two_pi_mhz, two_pi_ghz, two_pi_mhz

__version__ = "0.1.0"
