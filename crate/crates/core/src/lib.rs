//! Bias-aware QAOA for the 0/1 knapsack problem.
//!
//! The crate bundles the instance model, the hard-instance generators, the
//! classical baselines (greedy, annealing, exact), a small statevector
//! simulator and the biased QAOA circuits with their parameter search.
//! [`campaign`] ties them together into the benchmark tables.

pub mod bias;
pub mod campaign;
pub mod classical;
pub mod error;
pub mod exact;
pub mod generators;
pub mod knapsack;
pub mod qsim;
pub mod rng;
pub mod stats;
pub mod xqaoa;

pub use bias::{constant_bias, lazy_greedy_bias, logistic_bias, BiasProvenance, BiasVector};
pub use classical::{gsa_protocol, lazy_greedy, sa_protocol, very_greedy, GreedyResult};
pub use error::{Error, Result};
pub use exact::{brute_force_opt, dp_opt, Optimum};
pub use generators::{sample_corpus, sample_instance, DistributionKind, GeneratorConfig};
pub use knapsack::{read_instances, write_instances, Bitstring, KnapsackInstance, Ratio};
pub use qsim::{Gate1Q, Gate2Q, StateVector};
pub use rng::RandomStream;
pub use stats::ValueDistribution;
pub use campaign::{run_campaign, sweep_k_theta, CampaignManifest, CampaignResult, Metric, SolverReport, SolverTag};
pub use xqaoa::{CircuitParams, Mixer, MixerKind, Objective, QkpCircuit, QkpMetrics};

/// `|p⟩ = ⊗_i (√(1-p_i)|0⟩ + √p_i|1⟩)` for a bias vector.
pub fn prepare_biased_state(bias: &BiasVector) -> Result<StateVector> {
    StateVector::biased(&bias.p)
}
