use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::mixers::{bias_angle, copula_from_r, r_p12_gate, CopulaJoint, RingCopula};
use crate::bias::{logistic_bias, BiasVector};
use crate::classical::{lazy_greedy, very_greedy};
use crate::error::{Error, Result};
use crate::exact::{brute_force_opt, dp_opt, MAX_BRUTE_FORCE_ITEMS};
use crate::knapsack::{Bitstring, KnapsackInstance};
use crate::qsim::{basis_costs, Gate1Q, Gate2Q, StateVector, MAX_QUBITS};
use crate::rng::{derive_seed, mix64, RandomStream};
use crate::stats::{best_of_mean, best_of_prob, ValueClasses, ValueDistribution};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Mixer {
    Hourglass,
    /// Partitioned ring of pair copulas over the ratio-sorted items.
    Copula { theta: f64 },
}

impl fmt::Display for Mixer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mixer::Hourglass => f.write_str("hourglass"),
            Mixer::Copula { theta } => write!(f, "copula(theta={theta})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MixerKind {
    Hourglass,
    Copula,
}

impl MixerKind {
    pub fn with_theta(self, theta: f64) -> Mixer {
        match self {
            MixerKind::Hourglass => Mixer::Hourglass,
            MixerKind::Copula => Mixer::Copula { theta },
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            MixerKind::Hourglass => "hourglass",
            MixerKind::Copula => "copula",
        }
    }
}

impl fmt::Display for MixerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for MixerKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hourglass" | "zx" => Ok(MixerKind::Hourglass),
            "copula" | "cop" => Ok(MixerKind::Copula),
            other => Err(Error::invalid(format!("unknown mixer '{other}'"))),
        }
    }
}

/// One-layer circuit parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CircuitParams {
    pub beta: f64,
    pub gamma: f64,
    /// Logistic bias steepness.
    pub k: f64,
    pub mixer: Mixer,
}

impl CircuitParams {
    pub fn new(beta: f64, gamma: f64, k: f64, mixer: Mixer) -> Result<Self> {
        let params = Self { beta, gamma, k, mixer };
        params.validate()?;
        Ok(params)
    }

    /// Checks `β ∈ [0, π)`, `γ ∈ [0, 2π)`, `k > 0` and `θ ∈ [-1, 1]`.
    pub fn validate(&self) -> Result<()> {
        if !(0.0..PI).contains(&self.beta) {
            return Err(Error::invalid(format!("beta = {} outside [0, pi)", self.beta)));
        }
        if !(0.0..2.0 * PI).contains(&self.gamma) {
            return Err(Error::invalid(format!("gamma = {} outside [0, 2pi)", self.gamma)));
        }
        if !(self.k > 0.0 && self.k.is_finite()) {
            return Err(Error::invalid(format!("k = {} must be positive", self.k)));
        }
        if let Mixer::Copula { theta } = self.mixer {
            if !(-1.0..=1.0).contains(&theta) {
                return Err(Error::invalid(format!("theta = {theta} outside [-1, 1]")));
            }
        }
        Ok(())
    }
}

/// Reduces an angle into `[0, period)`.
pub fn wrap_angle(x: f64, period: f64) -> f64 {
    let r = x.rem_euclid(period);
    if r >= period {
        0.0
    } else {
        r
    }
}

/// Exact single-instance metrics for one parameter set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QkpMetrics {
    pub expected_value: f64,
    pub expected_best_of: f64,
    pub p_opt_single: f64,
    pub p_opt_best_of: f64,
    pub p_beat_lg: f64,
    pub p_beat_vg: f64,
}

/// A measured run: the best of `shots` samples.
#[derive(Debug, Clone, PartialEq)]
pub struct QkpRun {
    pub best: Bitstring,
    pub value: u64,
    pub samples: Vec<Bitstring>,
}

/// Per-instance data shared by every circuit evaluation.
///
/// Internally qubits are relabelled into descending ratio order so ring
/// neighbours are adjacent; basis values are label independent, so the
/// relabelling is invisible in distributions and metrics.
#[derive(Debug, Clone)]
pub struct QkpCircuit {
    inst: KnapsackInstance,
    order: Vec<usize>,
    sorted_values: Vec<u64>,
    classes: ValueClasses,
    optimum: u64,
    lg_value: u64,
    vg_value: u64,
}

impl QkpCircuit {
    pub fn new(inst: &KnapsackInstance) -> Result<Self> {
        if inst.is_trivial() {
            return Err(Error::TrivialInstance);
        }
        if inst.n() > MAX_QUBITS {
            return Err(Error::CapacityExceeded {
                what: "qubits",
                requested: inst.n() as u128,
                limit: MAX_QUBITS as u128,
            });
        }
        let order = inst.ratios().order;
        let sorted_values: Vec<u64> = order.iter().map(|&i| inst.values()[i]).collect();
        let sorted_weights: Vec<u64> = order.iter().map(|&i| inst.weights()[i]).collect();
        let sorted_costs = basis_costs(&sorted_values);
        let sorted_load = basis_costs(&sorted_weights);
        let objective: Vec<u64> = sorted_costs
            .iter()
            .zip(&sorted_load)
            .map(|(&v, &w)| if w <= inst.capacity() { v } else { 0 })
            .collect();
        let optimum = match dp_opt(inst) {
            Ok(opt) => opt.value,
            Err(_) if inst.n() <= MAX_BRUTE_FORCE_ITEMS => brute_force_opt(inst)?.value,
            Err(e) => return Err(e),
        };
        Ok(Self {
            inst: inst.clone(),
            order,
            sorted_values,
            classes: ValueClasses::new(&objective),
            optimum,
            lg_value: lazy_greedy(inst).value,
            vg_value: very_greedy(inst).value,
        })
    }

    pub fn instance(&self) -> &KnapsackInstance {
        &self.inst
    }

    /// Item indices in descending ratio order; the copula ring follows it.
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn optimum(&self) -> u64 {
        self.optimum
    }

    pub fn lazy_greedy_value(&self) -> u64 {
        self.lg_value
    }

    pub fn very_greedy_value(&self) -> u64 {
        self.vg_value
    }

    pub fn bias(&self, k: f64) -> Result<BiasVector> {
        logistic_bias(&self.inst, k)
    }

    /// The copula ring in item labels.
    pub fn ring(&self, theta: f64) -> Result<RingCopula> {
        RingCopula::new(self.order.clone(), vec![theta; self.inst.n()])
    }

    /// Full statevector in item labels, built gate by gate.
    pub fn state(&self, params: &CircuitParams) -> Result<StateVector> {
        params.validate()?;
        let p = self.bias(params.k)?.p;
        let mut state = StateVector::biased(&p)?;
        state.apply_cost_phase(params.gamma, self.inst.values())?;
        match params.mixer {
            Mixer::Hourglass => super::mixers::apply_hourglass_mixer(&mut state, &p, params.beta)?,
            Mixer::Copula { theta } => self.ring(theta)?.apply(&mut state, &p, params.beta)?,
        }
        Ok(state)
    }

    pub fn landscape(&self, k: f64, mixer: Mixer) -> Result<Landscape<'_>> {
        Landscape::new(self, k, mixer)
    }

    pub fn distribution(&self, params: &CircuitParams) -> Result<ValueDistribution> {
        params.validate()?;
        let mut land = self.landscape(params.k, params.mixer)?;
        land.masses(params.beta, params.gamma);
        Ok(land.distribution())
    }

    pub fn metrics(&self, params: &CircuitParams, shots: u32) -> Result<QkpMetrics> {
        Ok(self.metrics_of(&self.distribution(params)?, shots))
    }

    pub fn metrics_of(&self, dist: &ValueDistribution, shots: u32) -> QkpMetrics {
        let p_opt_single = dist.prob_at_least(self.optimum);
        QkpMetrics {
            expected_value: dist.mean(),
            expected_best_of: dist.best_of_mean(shots),
            p_opt_single,
            p_opt_best_of: best_of_prob(p_opt_single, shots),
            p_beat_lg: best_of_prob(dist.prob_greater(self.lg_value), shots),
            p_beat_vg: best_of_prob(dist.prob_greater(self.vg_value), shots),
        }
    }

    /// Samples `shots` bitstrings and keeps the first one of highest value.
    pub fn run(&self, params: &CircuitParams, shots: usize, stream: &mut RandomStream) -> Result<QkpRun> {
        if shots == 0 {
            return Err(Error::invalid("shots must be positive"));
        }
        let samples = self.state(params)?.sample(shots, stream);
        let mut best = 0;
        let mut value = self.inst.objective_value(&samples[0])?;
        for (i, x) in samples.iter().enumerate().skip(1) {
            let v = self.inst.objective_value(x)?;
            if v > value {
                (best, value) = (i, v);
            }
        }
        Ok(QkpRun {
            best: samples[best].clone(),
            value,
            samples,
        })
    }
}

pub fn qkp_state(inst: &KnapsackInstance, params: &CircuitParams) -> Result<StateVector> {
    QkpCircuit::new(inst)?.state(params)
}

pub fn qkp_run(inst: &KnapsackInstance, params: &CircuitParams, shots: usize, seed: u64) -> Result<QkpRun> {
    QkpCircuit::new(inst)?.run(params, shots, &mut RandomStream::new(seed))
}

pub fn qkp_exact_metrics(inst: &KnapsackInstance, params: &CircuitParams, shots: u32) -> Result<QkpMetrics> {
    QkpCircuit::new(inst)?.metrics(params, shots)
}

/// How a parameter point is scored.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum Objective {
    /// Exact expected best-of-`shots` value.
    Expectation,
    /// One simulated best-of-`shots` draw. The draw is a deterministic
    /// function of `(seed, β, γ)`.
    Sampled { seed: u64 },
}

/// Fast evaluator of the value distribution over `(β, γ)` for fixed bias and
/// mixer. Buffers are reused between calls.
pub struct Landscape<'a> {
    circuit: &'a QkpCircuit,
    mixer: Mixer,
    /// Marginals in sorted labels.
    p: Vec<f64>,
    ry: Vec<Gate1Q>,
    /// `R_p12` per ring pair in sorted labels.
    pair_r: Vec<Gate2Q>,
    state: StateVector,
    probs: Vec<f64>,
    masses: Vec<f64>,
}

impl<'a> Landscape<'a> {
    fn new(circuit: &'a QkpCircuit, k: f64, mixer: Mixer) -> Result<Self> {
        let bias = circuit.bias(k)?;
        let p: Vec<f64> = circuit.order.iter().map(|&i| bias.p[i]).collect();
        let n = p.len();
        let pair_r = match mixer {
            Mixer::Hourglass => Vec::new(),
            Mixer::Copula { theta } => {
                // validates the shape and theta
                RingCopula::uniform(n, theta)?;
                (0..n)
                    .map(|t| Ok(r_p12_gate(&CopulaJoint::new(p[t], p[(t + 1) % n], theta)?)))
                    .collect::<Result<_>>()?
            }
        };
        Ok(Self {
            circuit,
            mixer,
            ry: p.iter().map(|&q| Gate1Q::ry(bias_angle(q))).collect(),
            p,
            pair_r,
            state: StateVector::from_raw(vec![Complex64::new(0.0, 0.0); 1 << n]),
            probs: vec![0.0; 1 << n],
            masses: Vec::new(),
        })
    }

    pub fn mixer(&self) -> Mixer {
        self.mixer
    }

    pub fn class_values(&self) -> &[u64] {
        self.circuit.classes.values()
    }

    /// Biased single-qubit state after the cost phase.
    fn phased_local(&self, q: usize, gamma: f64) -> [Complex64; 2] {
        let p = self.p[q];
        [
            Complex64::new((1.0 - p).sqrt(), 0.0),
            Complex64::from_polar(p.sqrt(), -gamma * self.circuit.sorted_values[q] as f64),
        ]
    }

    /// Probability mass on each value class at `(β, γ)`.
    pub fn masses(&mut self, beta: f64, gamma: f64) -> &[f64] {
        match self.mixer {
            Mixer::Hourglass => self.hourglass_probs(beta, gamma),
            // an uncorrelated ring is the hourglass mixer at twice the angle
            Mixer::Copula { theta: 0.0 } => self.hourglass_probs(2.0 * beta, gamma),
            Mixer::Copula { .. } => self.copula_probs(beta, gamma),
        }
        self.circuit.classes.bin(&self.probs, &mut self.masses);
        &self.masses
    }

    fn hourglass_probs(&mut self, beta: f64, gamma: f64) {
        // the circuit is a product state, so only the marginals matter
        let rz = Gate1Q::rz(-2.0 * beta);
        let ones: Vec<f64> = (0..self.p.len())
            .map(|q| {
                let u = self.ry[q].then_after(&rz).then_after(&self.ry[q].adjoint());
                u.apply_to(self.phased_local(q, gamma))[1].norm_sqr()
            })
            .collect();
        let probs = &mut self.probs;
        probs.truncate(1);
        probs[0] = 1.0;
        for one in ones {
            let half = probs.len();
            probs.extend_from_within(..);
            for (b, x) in probs.iter_mut().enumerate() {
                *x *= if b >= half { one } else { 1.0 - one };
            }
        }
    }

    fn copula_probs(&mut self, beta: f64, gamma: f64) {
        let n = self.p.len();
        // odd layer acts on disjoint adjacent pairs of a product state
        let mut pair_states = Vec::with_capacity(n / 2);
        for t in (0..n).step_by(2) {
            let (a, b) = (self.phased_local(t, gamma), self.phased_local(t + 1, gamma));
            let v = [a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]];
            pair_states.push(copula_from_r(&self.pair_r[t], beta).apply_to(v));
        }
        let amps = self.state.amps_mut();
        amps.truncate(1);
        amps[0] = Complex64::new(1.0, 0.0);
        for w in &pair_states {
            let len = amps.len();
            amps.resize(4 * len, Complex64::new(0.0, 0.0));
            // chunk bits (b_t, b_{t+1}) = (c & 1, c >> 1) map to pair index 2·b_t + b_{t+1}
            for (c, pair_idx) in [(3usize, 3usize), (2, 1), (1, 2)] {
                let (src, dst) = amps.split_at_mut(c * len);
                for (d, s) in dst[..len].iter_mut().zip(&src[..len]) {
                    *d = *s * w[pair_idx];
                }
            }
            for a in &mut amps[..len] {
                *a *= w[0];
            }
        }
        for t in (1..n).step_by(2) {
            let gate = copula_from_r(&self.pair_r[t], beta);
            self.state
                .apply_2q(t, (t + 1) % n, &gate)
                .expect("ring pair indices are in range");
        }
        for (p, a) in self.probs.iter_mut().zip(self.state.amplitudes()) {
            *p = a.norm_sqr();
        }
    }

    /// Distribution from the most recent [`Landscape::masses`] call.
    pub fn distribution(&self) -> ValueDistribution {
        ValueDistribution::from_pairs(self.class_values().iter().copied().zip(self.masses.iter().copied()))
    }

    /// Score of `(β, γ)` under `objective`.
    pub fn objective(&mut self, beta: f64, gamma: f64, shots: u32, objective: Objective) -> f64 {
        self.masses(beta, gamma);
        let values = self.circuit.classes.values();
        match objective {
            Objective::Expectation => best_of_mean(values, &self.masses, shots),
            Objective::Sampled { seed } => {
                let key = mix64(beta.to_bits()) ^ gamma.to_bits();
                let mut stream = RandomStream::new(derive_seed(seed, key));
                let u_max = (0..shots).map(|_| stream.gen::<f64>()).fold(0.0, f64::max);
                // the best of `shots` draws is the quantile at the largest uniform
                let total: f64 = self.masses.iter().sum();
                let mut cdf = 0.0;
                for (&v, &m) in values.iter().zip(&self.masses) {
                    cdf += m / total;
                    if u_max < cdf {
                        return v as f64;
                    }
                }
                *values.last().expect("at least one value class") as f64
            }
        }
    }

    pub fn metrics(&mut self, beta: f64, gamma: f64, shots: u32) -> QkpMetrics {
        self.masses(beta, gamma);
        self.circuit.metrics_of(&self.distribution(), shots)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{sample_corpus, DistributionKind, GeneratorConfig};
    use crate::xqaoa::mixers::{apply_hourglass_mixer, hourglass_unitary};
    use approx::assert_abs_diff_eq;

    fn instances() -> Vec<KnapsackInstance> {
        DistributionKind::ALL
            .into_iter()
            .flat_map(|k| sample_corpus(&GeneratorConfig::new(k, 10, 77), 3).unwrap())
            .filter(|i| !i.is_trivial())
            .collect()
    }

    fn assert_same(a: &ValueDistribution, b: &ValueDistribution, tol: f64) {
        for (v, p) in a.iter() {
            assert_abs_diff_eq!(p, b.mass_at(v), epsilon = tol);
        }
        for (v, p) in b.iter() {
            assert_abs_diff_eq!(p, a.mass_at(v), epsilon = tol);
        }
    }

    fn generic_distribution(c: &QkpCircuit, params: &CircuitParams) -> ValueDistribution {
        let state = c.state(params).unwrap();
        crate::qsim::exact_objective_stats(&state, c.instance()).unwrap().distribution
    }

    #[test]
    fn landscape_matches_generic_circuit() {
        let mut rng = RandomStream::new(3);
        for inst in instances() {
            let c = QkpCircuit::new(&inst).unwrap();
            for mixer in [Mixer::Hourglass, Mixer::Copula { theta: -1.0 }, Mixer::Copula { theta: 0.4 }, Mixer::Copula { theta: 0.0 }] {
                let params = CircuitParams::new(rng.gen::<f64>() * PI, rng.gen::<f64>() * 2.0 * PI, 12.0, mixer).unwrap();
                let fast = c.distribution(&params).unwrap();
                assert_same(&fast, &generic_distribution(&c, &params), 1e-10);
            }
        }
    }

    #[test]
    fn copula_theta_zero_equals_hourglass_at_double_beta() {
        let inst = &instances()[0];
        let c = QkpCircuit::new(inst).unwrap();
        let beta = 0.4;
        let a = c.distribution(&CircuitParams::new(beta, 1.1, 15.0, Mixer::Copula { theta: 0.0 }).unwrap()).unwrap();
        let b = c.distribution(&CircuitParams::new(2.0 * beta, 1.1, 15.0, Mixer::Hourglass).unwrap()).unwrap();
        assert_same(&a, &b, 1e-10);
    }

    #[test]
    fn zero_gamma_keeps_the_bernoulli_product() {
        for inst in instances().into_iter().take(5) {
            let c = QkpCircuit::new(&inst).unwrap();
            let p = c.bias(15.0).unwrap().p;
            let product = StateVector::biased(&p).unwrap();
            for beta in [0.0, 0.7, 2.2] {
                let s = c.state(&CircuitParams::new(beta, 0.0, 15.0, Mixer::Hourglass).unwrap()).unwrap();
                assert!(s.tv_distance(&product) < 1e-10);
            }
        }
    }

    #[test]
    fn uniform_bias_is_standard_qaoa() {
        // independent reference: |+⟩^n, cost phase, then exp(+iβX) per qubit
        let inst = KnapsackInstance::new(vec![3, 5, 2, 7], vec![2, 4, 1, 5], 6).unwrap();
        let (beta, gamma) = (0.83, 2.1);
        let mut reference = StateVector::zero(4).unwrap();
        for q in 0..4 {
            reference.apply_1q(q, &Gate1Q::h()).unwrap();
        }
        reference.apply_cost_phase(gamma, inst.values()).unwrap();
        for q in 0..4 {
            reference.apply_1q(q, &Gate1Q::rx(-2.0 * beta)).unwrap();
        }
        let mut s = StateVector::biased(&[0.5; 4]).unwrap();
        s.apply_cost_phase(gamma, inst.values()).unwrap();
        apply_hourglass_mixer(&mut s, &[0.5; 4], beta).unwrap();
        assert!(s.distance(&reference) < 1e-12);
        assert!(hourglass_unitary(0.5, beta).distance(&Gate1Q::rx(-2.0 * beta)) < 1e-14);
    }

    #[test]
    fn mirror_symmetry() {
        let inst = &instances()[2];
        let c = QkpCircuit::new(inst).unwrap();
        for mixer in [Mixer::Hourglass, Mixer::Copula { theta: -0.5 }] {
            let mut land = c.landscape(10.0, mixer).unwrap();
            let (beta, gamma) = (0.9, 1.7);
            let a = land.objective(beta, gamma, 10, Objective::Expectation);
            let b = land.objective(PI - beta, 2.0 * PI - gamma, 10, Objective::Expectation);
            assert_abs_diff_eq!(a, b, epsilon = 1e-12 * a);
        }
    }

    #[test]
    fn metrics_are_consistent() {
        for inst in instances().into_iter().take(6) {
            let c = QkpCircuit::new(&inst).unwrap();
            let m = c.metrics(&CircuitParams::new(0.3, 0.2, 15.0, Mixer::Copula { theta: -1.0 }).unwrap(), 10).unwrap();
            assert!(m.expected_best_of >= m.expected_value - 1e-9);
            assert!(m.expected_best_of <= c.optimum() as f64 + 1e-9);
            assert!(m.p_opt_best_of >= m.p_opt_single);
            assert!(m.p_beat_lg >= m.p_beat_vg - 1e-12 || c.very_greedy_value() < c.lazy_greedy_value());
            for x in [m.p_opt_single, m.p_opt_best_of, m.p_beat_lg, m.p_beat_vg] {
                assert!((0.0..=1.0 + 1e-12).contains(&x));
            }
        }
    }

    #[test]
    fn sampled_objective_is_deterministic_and_attainable() {
        let inst = &instances()[1];
        let c = QkpCircuit::new(inst).unwrap();
        let mut land = c.landscape(15.0, Mixer::Hourglass).unwrap();
        let obj = Objective::Sampled { seed: 9 };
        let a = land.objective(0.4, 1.0, 10, obj);
        let b = land.objective(0.4, 1.0, 10, obj);
        assert_eq!(a, b);
        assert!(land.class_values().contains(&(a as u64)));
    }

    #[test]
    fn run_returns_first_best_sample() {
        let inst = &instances()[3];
        let c = QkpCircuit::new(inst).unwrap();
        let params = CircuitParams::new(0.5, 0.5, 15.0, Mixer::Hourglass).unwrap();
        let run = c.run(&params, 10, &mut RandomStream::new(4)).unwrap();
        let values: Vec<u64> = run.samples.iter().map(|x| inst.objective_value(x).unwrap()).collect();
        let max = *values.iter().max().unwrap();
        assert_eq!(run.value, max);
        let first = values.iter().position(|&v| v == max).unwrap();
        assert_eq!(run.best, run.samples[first]);
    }

    #[test]
    fn rejects_bad_params_and_shapes() {
        assert!(CircuitParams::new(PI, 0.0, 1.0, Mixer::Hourglass).is_err());
        assert!(CircuitParams::new(0.0, 2.0 * PI, 1.0, Mixer::Hourglass).is_err());
        assert!(CircuitParams::new(0.0, 0.0, 0.0, Mixer::Hourglass).is_err());
        assert!(CircuitParams::new(0.0, 0.0, 1.0, Mixer::Copula { theta: -2.0 }).is_err());
        let odd = KnapsackInstance::new(vec![3, 4, 5], vec![2, 3, 4], 5).unwrap();
        let c = QkpCircuit::new(&odd).unwrap();
        assert!(matches!(c.landscape(5.0, Mixer::Copula { theta: -1.0 }), Err(Error::UnsupportedShape(_))));
        let trivial = KnapsackInstance::new(vec![1, 1], vec![1, 1], 5).unwrap();
        assert!(matches!(QkpCircuit::new(&trivial), Err(Error::TrivialInstance)));
    }

    #[test]
    fn wrap_angle_into_range() {
        assert_abs_diff_eq!(wrap_angle(-0.5, PI), PI - 0.5);
        assert_abs_diff_eq!(wrap_angle(7.0, 2.0 * PI), 7.0 - 2.0 * PI);
        assert!(wrap_angle(-1e-18, PI) < PI);
    }
}
