"""Exact two-boson lattice dynamics: bound-pair bands, Stark quenches, pair breaking."""

from .bound_band import (
    BandStructure,
    BoundState,
    MomentumSector,
    band_scan,
    bound_state_realspace,
    build_heq,
    cubic_residual,
    momentum_grid,
    solve_bound_states,
)
from .model import (
    Boundary,
    ModelParams,
    TwoBosonBasis,
    build_basis,
    build_h0,
    build_hamiltonian,
    build_stark,
    expectation,
    mean_distance,
)
from .propagation import (
    ChebyshevPropagator,
    PropagationAccuracyError,
    SpectralPropagator,
    make_propagator,
)
from .quench import (
    IncompleteBandError,
    PeriodEstimate,
    QuenchTrajectory,
    QuenchWorkspace,
    SweepResult,
    WavePacketSpec,
    energy_distribution,
    estimate_period,
    evolve,
    prepare_wavepacket,
    run_quench,
    sweep_transfer,
    transfer_rate,
)
from .spectrum import (
    AvoidedCrossing,
    CrossingScan,
    SpectrumSlice,
    classify_levels,
    detect_avoided_crossings,
    spectrum_vs_field,
)
from .three_site import (
    EffectiveConstants,
    SingularParameterError,
    exact_pair_dynamics,
    pair_unpair_hamiltonian,
    rabi_constants,
    transfer_probability,
)

__version__ = "0.1.0"

__all__ = [
    "BandStructure",
    "BoundState",
    "Boundary",
    "AvoidedCrossing",
    "ChebyshevPropagator",
    "CrossingScan",
    "EffectiveConstants",
    "IncompleteBandError",
    "ModelParams",
    "MomentumSector",
    "PeriodEstimate",
    "PropagationAccuracyError",
    "QuenchTrajectory",
    "QuenchWorkspace",
    "SingularParameterError",
    "SpectralPropagator",
    "SpectrumSlice",
    "SweepResult",
    "TwoBosonBasis",
    "WavePacketSpec",
    "band_scan",
    "bound_state_realspace",
    "build_basis",
    "build_h0",
    "build_hamiltonian",
    "build_heq",
    "build_stark",
    "classify_levels",
    "cubic_residual",
    "detect_avoided_crossings",
    "energy_distribution",
    "estimate_period",
    "evolve",
    "exact_pair_dynamics",
    "expectation",
    "make_propagator",
    "mean_distance",
    "momentum_grid",
    "pair_unpair_hamiltonian",
    "prepare_wavepacket",
    "rabi_constants",
    "run_quench",
    "solve_bound_states",
    "spectrum_vs_field",
    "sweep_transfer",
    "transfer_probability",
    "transfer_rate",
]
