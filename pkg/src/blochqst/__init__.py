"""Wave-packet state transfer on tilted tight-binding chains.

A packet on a chain with a linear potential undergoes Bloch oscillations;
half a period moves it by -coupling/force sites while (for a suitably
truncated Gaussian) preserving its shape up to an alternating sign.  The
package builds such transfers, checks them against closed-form results,
sweeps packet parameters, routes by force, and carries a polarization
payload along.
"""

from .analytic import (
    TiltParameters,
    UntiltedChainError,
    WannierStarkState,
    dispersion,
    free_propagator_element,
    group_velocity,
    half_period_profile,
    tilt_parameters,
    wannier_stark_state,
)
from .bessel import bessel_jn
from .chain import (
    ChainSpec,
    HamiltonianMatrix,
    LatticeState,
    align_global_phase,
    build_free_hamiltonian,
    build_tilted_hamiltonian,
    overlap,
)
from .evolution import (
    SpectralDecomposition,
    Trajectory,
    eigendecompose,
    energy_expectation,
    evolve,
    evolve_oracle,
    mean_position,
    position_variance,
    probability_profile,
    trajectory,
    write_mean_position_csv,
    write_trajectory_csv,
)
from .polarization import (
    PolarizationQubit,
    PolarizedLatticeState,
    attach_polarization,
    bloch_vector,
    evolve_polarized,
    extract_qubit,
)
from .transfer import (
    RouteLeg,
    RouteResult,
    SweepResult,
    TransferPlan,
    TruncatedGaussianSpec,
    gaussian_state,
    plan_transfer,
    route,
    run_transfer,
    sharp_state,
    success_probability,
    sweep_beta_delta,
    truncated_gaussian,
    write_output_profile_csv,
    write_route_json,
    write_route_mean_csv,
    write_sweep_csv,
    write_sweep_json,
)

__version__ = "0.1.0"

__all__ = [
    "ChainSpec",
    "HamiltonianMatrix",
    "LatticeState",
    "PolarizationQubit",
    "PolarizedLatticeState",
    "RouteLeg",
    "RouteResult",
    "SpectralDecomposition",
    "SweepResult",
    "TiltParameters",
    "Trajectory",
    "TransferPlan",
    "TruncatedGaussianSpec",
    "UntiltedChainError",
    "WannierStarkState",
    "align_global_phase",
    "attach_polarization",
    "bessel_jn",
    "bloch_vector",
    "build_free_hamiltonian",
    "build_tilted_hamiltonian",
    "dispersion",
    "eigendecompose",
    "energy_expectation",
    "evolve",
    "evolve_oracle",
    "evolve_polarized",
    "extract_qubit",
    "free_propagator_element",
    "gaussian_state",
    "group_velocity",
    "half_period_profile",
    "mean_position",
    "overlap",
    "plan_transfer",
    "position_variance",
    "probability_profile",
    "route",
    "run_transfer",
    "sharp_state",
    "success_probability",
    "sweep_beta_delta",
    "tilt_parameters",
    "trajectory",
    "truncated_gaussian",
    "wannier_stark_state",
    "write_mean_position_csv",
    "write_output_profile_csv",
    "write_route_json",
    "write_route_mean_csv",
    "write_sweep_csv",
    "write_sweep_json",
    "write_trajectory_csv",
]
