"""Energy cost of extracting entanglement from 1D lattice ground states.

The package measures, for a chain split between Alice and Bob, how much
energy a state pays for each bit of entanglement removed across the cut:
matrix-product-state sampling maps out the (delta_e, delta_s) Pareto front
and its temperature curve t = delta_e / delta_s, while closed-form reference
results pin the toy-chain, projector-model, fermion-chain and scaling limits.
"""

from .closedform import (
    KrausChannel,
    QftScalingParams,
    asymptotic_pair_cost,
    channel_energy_cost,
    fermion_ground_energy,
    fermion_product_bound,
    naive_protocol_bound,
    optimize_rank_limited_overlap,
    projector_extraction_cost,
    qft_scaling_curve,
    rank_limited_overlap_bound,
    stationarity_best_fit,
    stationarity_residual,
)
from .errors import (
    ConvergenceError,
    DegeneracyError,
    InfeasibleError,
    InvalidInputError,
    RegularizationWarning,
    ResourceLimitError,
)
from .models import (
    FermionChainSpec,
    LocalHamiltonian,
    dense_ground_state,
    dense_matrix,
    heisenberg_af,
    interaction_norm,
    parse_model,
    staggered_fermion_spin,
    tfi_critical,
    toy_model,
)
from .mps import (
    MatrixProductState,
    SchmidtSpectrum,
    energy,
    entropy_bits,
    from_dense,
    overlap,
    random_mps,
    renyi0_bits,
    schmidt,
    to_dense,
    truncate,
)
from .oneshot import (
    ExtractionBudget,
    RankMinimumResult,
    feasible_final_rank,
    majorizes,
    min_energy_at_rank,
    toy_cost,
)
from .tradeoff import (
    ParetoFront,
    SamplerConfig,
    TradeoffPoint,
    ent_temperature,
    find_ground,
    imaginary_step,
    near_ground_coefficients,
    pareto_front,
    perturb_top_weight,
    sample_tradeoff,
    sharpen,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
