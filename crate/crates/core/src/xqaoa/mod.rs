//! Bias-aware QAOA for knapsack: mixers, the one-layer circuit, exact metrics
//! and the classical parameter search.

mod circuit;
mod mixers;
mod optimize;

pub use circuit::{
    qkp_exact_metrics, qkp_run, qkp_state, wrap_angle, CircuitParams, Landscape, Mixer, MixerKind, Objective,
    QkpCircuit, QkpMetrics, QkpRun,
};
pub use mixers::{
    apply_copula_pair, apply_hourglass_mixer, apply_ring_copula, bias_angle, copula_hamiltonian, copula_unitary,
    hourglass_matrix, hourglass_unitary, r_p12_gate, CopulaJoint, RingCopula,
};
pub use optimize::{
    grid_search, nelder_mead_max, optimize_params, refine, OptimizerSettings, Optimized, PointOptimum, RefineSettings,
    SearchResult,
};
