"""Informational macrodynamics: diffusion ensembles, entropy functionals, invariants,
operator identification, triplet networks and their code, evolutionary potentials,
cyclic renewal and surface geometry."""

from .errors import (
    ConfigError,
    DegenerateChainError,
    DimensionError,
    DomainError,
    IdentificationError,
    IMDError,
    InsufficientSampleError,
    PoleError,
    SingularDiffusionError,
)
from .evolution import (
    adaptive_asymmetry,
    cycle_frequency_ratio,
    cycle_spawn,
    cycle_triplet,
    dimension_threshold,
    epsilon,
    gamma_lo,
    potentials,
    theta_for_gamma,
)
from .geometry import cell_areas, chain_ratios, rotation, rotation_correction, total_area
from .invariants import (
    GAMMA_STAR,
    InvariantSet,
    Source,
    connect_invariants,
    lookup,
    portioning_loss,
    solve_a_invariant,
    solve_b_invariant,
)
from .macrodynamics import MacroModel, identify_chain, identify_operator, identify_operator_integral
from .microlevel import (
    DiffusionSpec,
    TrajectoryEnsemble,
    entropy_functional,
    estimate_correlation,
    gaussian_information,
    impulse_cutoff,
    ipf_value,
    simulate_ensemble,
)
from .network import build_network, encode_network, generate_spectrum
from .scenario import ScenarioConfig, run_scenario
from .units import nat_to_bit, bit_to_nat

__version__ = "0.1.0"
