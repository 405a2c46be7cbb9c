//! Dense statevector simulation.
//!
//! # Qubit ordering
//!
//! Basis index `b` encodes the bitstring `x` little-endian: qubit `i` is bit
//! `i` of `b`, so `x_i = (b >> i) & 1`. This is the only place the convention
//! is defined; [`Bitstring::from_index`] and [`Bitstring::to_index`] follow it.
//!
//! Two-qubit gates act on an ordered pair `(first, second)` with local index
//! `2·x_first + x_second` (see [`Gate2Q`]).

mod gates;

pub use gates::{Gate1Q, Gate2Q};

use num_complex::Complex64;
use rand::distributions::{Distribution, WeightedIndex};

use crate::error::{Error, Result};
use crate::knapsack::{Bitstring, KnapsackInstance};
use crate::rng::RandomStream;
use crate::stats::ValueDistribution;

/// Statevectors above this many qubits are refused.
pub const MAX_QUBITS: usize = 26;

pub(crate) const NORM_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

fn check_qubits(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::invalid("a state needs at least one qubit"));
    }
    if n > MAX_QUBITS {
        return Err(Error::CapacityExceeded {
            what: "statevector qubits",
            requested: n as u128,
            limit: MAX_QUBITS as u128,
        });
    }
    Ok(())
}

impl StateVector {
    /// `|0…0⟩`.
    pub fn zero(n_qubits: usize) -> Result<Self> {
        check_qubits(n_qubits)?;
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
        amps[0] = Complex64::new(1.0, 0.0);
        Ok(Self { n_qubits, amps })
    }

    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let len = amps.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::invalid(format!("{len} amplitudes is not 2^n for n >= 1")));
        }
        let n_qubits = len.trailing_zeros() as usize;
        check_qubits(n_qubits)?;
        let state = Self { n_qubits, amps };
        if (state.norm_sqr() - 1.0).abs() > NORM_TOL {
            return Err(Error::invalid("amplitudes are not normalized"));
        }
        Ok(state)
    }

    /// Product state `⊗_i (√(1-p_i)|0⟩ + √p_i|1⟩)`.
    pub fn biased(p: &[f64]) -> Result<Self> {
        check_qubits(p.len())?;
        if let Some(bad) = p.iter().find(|q| !(0.0..=1.0).contains(*q)) {
            return Err(Error::invalid(format!("marginal {bad} outside [0, 1]")));
        }
        let locals: Vec<[Complex64; 2]> = p
            .iter()
            .map(|&q| [Complex64::new((1.0 - q).sqrt(), 0.0), Complex64::new(q.sqrt(), 0.0)])
            .collect();
        Ok(Self::product(&locals))
    }

    /// Tensor product of single-qubit states; `locals[i]` is qubit `i`.
    pub(crate) fn product(locals: &[[Complex64; 2]]) -> Self {
        let n_qubits = locals.len();
        let mut amps = Vec::with_capacity(1 << n_qubits);
        amps.push(Complex64::new(1.0, 0.0));
        for local in locals {
            let half = amps.len();
            amps.extend_from_within(..);
            for (b, a) in amps.iter_mut().enumerate() {
                *a *= local[usize::from(b >= half)];
            }
        }
        Self { n_qubits, amps }
    }

    /// Wraps amplitudes already known to be normalized.
    pub(crate) fn from_raw(amps: Vec<Complex64>) -> Self {
        debug_assert!(amps.len().is_power_of_two());
        Self {
            n_qubits: amps.len().trailing_zeros() as usize,
            amps,
        }
    }

    pub(crate) fn amps_mut(&mut self) -> &mut Vec<Complex64> {
        &mut self.amps
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, x: &Bitstring) -> Complex64 {
        self.amps[x.to_index() as usize]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    fn check_index(&self, q: usize) -> Result<()> {
        if q >= self.n_qubits {
            return Err(Error::invalid(format!(
                "qubit {q} out of range for {} qubits",
                self.n_qubits
            )));
        }
        Ok(())
    }

    pub fn apply_1q(&mut self, qubit: usize, gate: &Gate1Q) -> Result<()> {
        self.check_index(qubit)?;
        let m = gate.matrix();
        let stride = 1usize << qubit;
        for block in self.amps.chunks_exact_mut(2 * stride) {
            let (lo, hi) = block.split_at_mut(stride);
            for (a0, a1) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x0, x1) = (*a0, *a1);
                *a0 = m[0][0] * x0 + m[0][1] * x1;
                *a1 = m[1][0] * x0 + m[1][1] * x1;
            }
        }
        Ok(())
    }

    /// Applies `gate` to the ordered pair `(first, second)`.
    pub fn apply_2q(&mut self, first: usize, second: usize, gate: &Gate2Q) -> Result<()> {
        self.check_index(first)?;
        self.check_index(second)?;
        if first == second {
            return Err(Error::invalid("two-qubit gate on a single qubit"));
        }
        let m = gate.matrix();
        let (bf, bs) = (1usize << first, 1usize << second);
        let (lo, hi) = (bf.min(bs), bf.max(bs));
        // offsets of |01⟩, |10⟩ in gate order relative to the |00⟩ index
        let (o1, o2) = (bs, bf);
        for outer in (0..self.amps.len()).step_by(2 * hi) {
            for mid in (outer..outer + hi).step_by(2 * lo) {
                for base in mid..mid + lo {
                    let v = [
                        self.amps[base],
                        self.amps[base + o1],
                        self.amps[base + o2],
                        self.amps[base + o1 + o2],
                    ];
                    for (r, off) in [0, o1, o2, o1 + o2].into_iter().enumerate() {
                        self.amps[base + off] = m[r][0] * v[0] + m[r][1] * v[1] + m[r][2] * v[2] + m[r][3] * v[3];
                    }
                }
            }
        }
        Ok(())
    }

    /// `amp(x) ← amp(x)·exp(-iγ·v·x)`.
    pub fn apply_cost_phase(&mut self, gamma: f64, values: &[u64]) -> Result<()> {
        if values.len() != self.n_qubits {
            return Err(Error::invalid(format!(
                "{} values for {} qubits",
                values.len(),
                self.n_qubits
            )));
        }
        let costs = basis_costs(values);
        self.apply_diagonal_phase(|b| -gamma * costs[b] as f64);
        Ok(())
    }

    /// `amp(b) ← amp(b)·exp(i·angle(b))`.
    pub fn apply_diagonal_phase(&mut self, angle: impl Fn(usize) -> f64) {
        for (b, a) in self.amps.iter_mut().enumerate() {
            *a *= Complex64::from_polar(1.0, angle(b));
        }
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// `Pr[x_qubit = 1]`.
    pub fn marginal(&self, qubit: usize) -> Result<f64> {
        self.check_index(qubit)?;
        Ok(self
            .amps
            .iter()
            .enumerate()
            .filter(|(b, _)| b >> qubit & 1 == 1)
            .map(|(_, a)| a.norm_sqr())
            .sum())
    }

    /// I.i.d. computational-basis measurements.
    pub fn sample(&self, shots: usize, stream: &mut RandomStream) -> Vec<Bitstring> {
        if shots == 0 {
            return Vec::new();
        }
        let dist = WeightedIndex::new(self.probabilities()).expect("normalized state has positive mass");
        (0..shots)
            .map(|_| Bitstring::from_index(dist.sample(stream) as u64, self.n_qubits))
            .collect()
    }

    /// Euclidean distance between amplitude vectors.
    pub fn distance(&self, other: &StateVector) -> f64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// `|⟨self|other⟩|`.
    pub fn overlap(&self, other: &StateVector) -> f64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum::<Complex64>()
            .norm()
    }

    /// Total variation distance between the measurement distributions.
    pub fn tv_distance(&self, other: &StateVector) -> f64 {
        0.5 * self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a.norm_sqr() - b.norm_sqr()).abs())
            .sum::<f64>()
    }
}

/// `v·x` for every basis index `x`.
pub fn basis_costs(values: &[u64]) -> Vec<u64> {
    let mut costs = Vec::with_capacity(1 << values.len());
    costs.push(0);
    for &v in values {
        let half = costs.len();
        for b in 0..half {
            costs.push(costs[b] + v);
        }
    }
    costs
}

/// Expected objective and the distribution of objective values under
/// measurement of `state`. Infeasible outcomes count as value 0.
#[derive(Debug, Clone, PartialEq)]
pub struct ObjectiveStats {
    pub expected: f64,
    pub distribution: ValueDistribution,
}

pub fn exact_objective_stats(state: &StateVector, inst: &KnapsackInstance) -> Result<ObjectiveStats> {
    if state.n_qubits() != inst.n() {
        return Err(Error::invalid(format!(
            "state has {} qubits, instance has {} items",
            state.n_qubits(),
            inst.n()
        )));
    }
    let probs = state.probabilities();
    let distribution = ValueDistribution::from_pairs(
        probs
            .iter()
            .enumerate()
            .map(|(b, &p)| (inst.objective_of_mask(b as u64), p)),
    );
    Ok(ObjectiveStats {
        expected: distribution.mean(),
        distribution,
    })
}
