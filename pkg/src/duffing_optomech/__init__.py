"""Gaussian dynamics of a driven optomechanical cavity with two Duffing
mirrors and an atomic ensemble: steady state, squeezed-frame model,
covariance propagation, squeezing and state-transfer observables."""

from .bogoliubov import (
    EffectiveModel,
    RwaDiagnostics,
    build_effective,
    lossless,
    make_model,
    rwa_diagnostics,
    swap_time,
)
from .dynamics import (
    FRAME_INTERACTION,
    FRAME_LAB,
    GaussianState,
    bogoliubov_scaling,
    diffusion_oscillating,
    diffusion_static,
    drift_matrix,
    evolve_cov_closed,
    evolve_cov_ode,
    evolve_mean,
    evolve_state,
    frame_rotation,
    ground_state_covariance,
    is_physical,
    lab_frame_diffusion,
    lab_frame_drift,
    lab_to_interaction_cov,
    matrix_from_text,
    matrix_to_text,
    propagate_covariance,
    propagator_closed,
    propagator_closed_batch,
    purity_determinant,
    symmetry_defect,
    symplectic_eig_floor,
    symplectic_form,
)
from .errors import (
    ConfigError,
    ConvergenceError,
    DegenerateCovarianceError,
    InvalidParameterError,
    NoOptimumError,
    OverdampedRegimeError,
    QuadratureError,
    SimulationError,
    StiffnessError,
)
from .observables import (
    SqueezeReport,
    TransferReport,
    atomic_squeezing,
    gaussian_fidelity,
    initial_squeezed_block,
    optimal_coupling,
    squeezing_degree,
    squeezing_from_model,
    transfer_experiment,
    transfer_from_model,
)
from .params import (
    ReducedParams,
    SystemParams,
    default_params,
    drive_amplitude,
    laser_frequency,
    power_for_drive,
    reduce_params,
    thermal_occupation,
)
from .steady_state import (
    SteadyState,
    intracavity_amplitude,
    residuals,
    solve_mirror_cubic,
    solve_self_consistent,
    steady_state_for_g1,
)

__version__ = "0.1.0"
