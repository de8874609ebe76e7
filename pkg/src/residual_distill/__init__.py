"""Sequential distillation: private randomness from the residual states of key distillation."""
from .dw_rates import (
    CqEnsemble,
    DwRates,
    dw_rates_from_state,
    isotropic_dw_rand,
    key_threshold,
    randomness_curve,
    toy1_yields,
)
from .entropy import binary_entropy, conditional_entropy_AB, mutual_info_cq, shannon, von_neumann
from .gl_protocol import (
    bbpssw_pipeline,
    gl_pipeline,
    local_randomness,
    step_b,
    step_p,
    theta_step,
)
from .oracle import exact_step_b, exact_step_p, mc_step_b
from .qstate import (
    BellDiagonalState,
    fidelity,
    isotropic,
    partial_trace,
    purify,
    to_density_matrix,
    trace_distance,
)
from .rug import build_graph, enumerate_paths, is_chordal_urug, levels, load_graph

__version__ = "0.1.0"
