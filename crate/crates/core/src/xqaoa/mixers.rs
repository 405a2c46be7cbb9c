//! Bias-preserving mixers.
//!
//! # Sign convention
//!
//! The hourglass operator is taken with its leading minus,
//! `ZX_p = -(1-2p)·Z - 2√(p(1-p))·X = -R_Y(φ_p)·Z·R_Y(φ_p)†` with
//! `φ_p = 2·asin(√p)`, so that `|p⟩` is its `-1` eigenvector. Consequently
//!
//! ```text
//! exp(-iβ·ZX_p) = R_Y(φ_p) · exp(+iβZ) · R_Y(φ_p)†
//! ```
//!
//! and likewise the pair copula `Cop = R·(-Z₁ - Z₂)·R†` evolves as
//! `R·exp(+iβZ₁)exp(+iβZ₂)·R†`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qsim::{Gate1Q, Gate2Q, StateVector};

/// `φ_p = 2·asin(√p)`, the `R_Y` angle taking `|0⟩` to `|p⟩`.
pub fn bias_angle(p: f64) -> f64 {
    2.0 * p.clamp(0.0, 1.0).sqrt().asin()
}

fn check_probability(name: &str, p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::invalid(format!("{name} = {p} outside [0, 1]")));
    }
    Ok(())
}

/// `-(1-2p)·Z - 2√(p(1-p))·X`: Hermitian with `|p⟩` at eigenvalue `-1` and
/// `|p^⊥⟩` at `+1`.
pub fn hourglass_matrix(p: f64) -> Result<Gate1Q> {
    check_probability("p", p)?;
    let z = -(1.0 - 2.0 * p);
    let x = -2.0 * (p * (1.0 - p)).sqrt();
    Gate1Q::new([
        [Complex64::new(z, 0.0), Complex64::new(x, 0.0)],
        [Complex64::new(x, 0.0), Complex64::new(-z, 0.0)],
    ])
}

/// `exp(-iβ·ZX_p)`.
pub fn hourglass_unitary(p: f64, beta: f64) -> Gate1Q {
    let ry = Gate1Q::ry(bias_angle(p));
    ry.then_after(&Gate1Q::rz(-2.0 * beta)).then_after(&ry.adjoint())
}

/// Applies `exp(-iβ·ZX_{p_i})` to every qubit `i`.
pub fn apply_hourglass_mixer(state: &mut StateVector, p: &[f64], beta: f64) -> Result<()> {
    if p.len() != state.n_qubits() {
        return Err(Error::invalid(format!(
            "{} marginals for {} qubits",
            p.len(),
            state.n_qubits()
        )));
    }
    for (i, &q) in p.iter().enumerate() {
        check_probability("p", q)?;
        state.apply_1q(i, &hourglass_unitary(q, beta))?;
    }
    Ok(())
}

/// Two-bit joint distribution with given marginals and FGM-style covariance
/// `Δ = θ·p1·p2·(1-p1)·(1-p2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CopulaJoint {
    pub p1: f64,
    pub p2: f64,
    pub theta: f64,
    pub delta: f64,
    /// `c(x1, x2)` at index `2·x1 + x2`.
    pub probs: [f64; 4],
}

impl CopulaJoint {
    pub fn new(p1: f64, p2: f64, theta: f64) -> Result<Self> {
        check_probability("p1", p1)?;
        check_probability("p2", p2)?;
        if !(-1.0..=1.0).contains(&theta) {
            return Err(Error::invalid(format!("theta = {theta} outside [-1, 1]")));
        }
        let delta = theta * p1 * p2 * (1.0 - p1) * (1.0 - p2);
        let probs = [
            (1.0 - p1) * (1.0 - p2) + delta,
            (1.0 - p1) * p2 - delta,
            p1 * (1.0 - p2) - delta,
            p1 * p2 + delta,
        ];
        Ok(Self {
            p1,
            p2,
            theta,
            delta,
            probs,
        })
    }

    pub fn prob(&self, x1: bool, x2: bool) -> f64 {
        self.probs[2 * usize::from(x1) + usize::from(x2)]
    }

    /// `Pr[X2 = 1 | X1 = 1]`; 0 on the impossible branch `p1 = 0`.
    pub fn p2_given_1(&self) -> f64 {
        if self.p1 > 0.0 {
            (self.probs[3] / self.p1).clamp(0.0, 1.0)
        } else {
            0.0
        }
    }

    /// `Pr[X2 = 1 | X1 = 0]`; 0 on the impossible branch `p1 = 1`.
    pub fn p2_given_0(&self) -> f64 {
        if self.p1 < 1.0 {
            (self.probs[1] / (1.0 - self.p1)).clamp(0.0, 1.0)
        } else {
            0.0
        }
    }
}

/// Real orthogonal gate with `R|00⟩ = Σ √c(x1,x2)·|x1 x2⟩`: `R_Y(φ_{p1})` on
/// the first qubit, then `R_Y(φ_{p2|1})` / `R_Y(φ_{p2|¬1})` on the second,
/// controlled on the first being 1 / 0.
pub fn r_p12_gate(joint: &CopulaJoint) -> Gate2Q {
    let first = Gate1Q::ry(bias_angle(joint.p1)).kron(&Gate1Q::identity());
    let conditional = Gate2Q::controlled_pair(
        &Gate1Q::ry(bias_angle(joint.p2_given_0())),
        &Gate1Q::ry(bias_angle(joint.p2_given_1())),
    );
    conditional.then_after(&first)
}

/// `exp(-iβ·Cop(p1, p2, θ)) = R·diag(e^{2iβ}, 1, 1, e^{-2iβ})·R†`.
pub fn copula_unitary(p1: f64, p2: f64, theta: f64, beta: f64) -> Result<Gate2Q> {
    let r = r_p12_gate(&CopulaJoint::new(p1, p2, theta)?);
    Ok(copula_from_r(&r, beta))
}

/// `R·diag(e^{2iβ}, 1, 1, e^{-2iβ})·Rᵀ` for a real orthogonal `R`.
pub(crate) fn copula_from_r(r: &Gate2Q, beta: f64) -> Gate2Q {
    let phase = Complex64::from_polar(1.0, 2.0 * beta);
    let m = r.matrix();
    let d = [phase, Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0), phase.conj()];
    let mut out = [[Complex64::new(0.0, 0.0); 4]; 4];
    for (a, row) in out.iter_mut().enumerate() {
        for (b, e) in row.iter_mut().enumerate() {
            *e = (0..4).map(|k| d[k] * (m[a][k].re * m[b][k].re)).sum();
        }
    }
    Gate2Q::from_matrix_unchecked(out)
}

/// The Hermitian generator `Cop(p1, p2, θ) = -R·(Z₁ + Z₂)·R†` as a matrix.
pub fn copula_hamiltonian(p1: f64, p2: f64, theta: f64) -> Result<[[f64; 4]; 4]> {
    let r = r_p12_gate(&CopulaJoint::new(p1, p2, theta)?);
    let d = [-2.0, 0.0, 0.0, 2.0];
    let m = r.matrix();
    let mut h = [[0.0; 4]; 4];
    for (a, row) in h.iter_mut().enumerate() {
        for (b, out) in row.iter_mut().enumerate() {
            *out = (0..4).map(|k| m[a][k].re * d[k] * m[b][k].re).sum();
        }
    }
    Ok(h)
}

pub fn apply_copula_pair(
    state: &mut StateVector,
    i: usize,
    j: usize,
    p_i: f64,
    p_j: f64,
    theta: f64,
    beta: f64,
) -> Result<()> {
    state.apply_2q(i, j, &copula_unitary(p_i, p_j, theta, beta)?)
}

/// A cycle of qubits with one correlation parameter per neighbouring pair.
///
/// Pair `t` couples `order[t]` and `order[(t + 1) % n]` with `thetas[t]`.
/// The odd layer holds pairs `t = 0, 2, 4, …` and the even layer
/// `t = 1, 3, …, n-1`, the last of which wraps around to `order[0]`.
#[derive(Debug, Clone, PartialEq)]
pub struct RingCopula {
    pub order: Vec<usize>,
    pub thetas: Vec<f64>,
}

impl RingCopula {
    pub fn new(order: Vec<usize>, thetas: Vec<f64>) -> Result<Self> {
        let n = order.len();
        if n < 2 || n % 2 == 1 {
            return Err(Error::UnsupportedShape(format!(
                "ring copula mixer needs an even number of qubits, got {n}"
            )));
        }
        if thetas.len() != n {
            return Err(Error::invalid(format!("{} thetas for {n} ring pairs", thetas.len())));
        }
        let mut seen = vec![false; n];
        for &q in &order {
            if q >= n || std::mem::replace(&mut seen[q], true) {
                return Err(Error::invalid("ring order is not a permutation"));
            }
        }
        if let Some(t) = thetas.iter().find(|t| !(-1.0..=1.0).contains(*t)) {
            return Err(Error::invalid(format!("theta = {t} outside [-1, 1]")));
        }
        Ok(Self { order, thetas })
    }

    /// Natural qubit order with the same `theta` on every pair.
    pub fn uniform(n: usize, theta: f64) -> Result<Self> {
        Self::new((0..n).collect(), vec![theta; n])
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    fn pair(&self, t: usize) -> (usize, usize) {
        (self.order[t], self.order[(t + 1) % self.order.len()])
    }

    /// `(first, second, gate)` for each pair of one layer; layer 0 is odd.
    pub fn layer_gates(&self, layer: usize, p: &[f64], beta: f64) -> Result<Vec<(usize, usize, Gate2Q)>> {
        (layer..self.len())
            .step_by(2)
            .map(|t| {
                let (a, b) = self.pair(t);
                Ok((a, b, copula_unitary(p[a], p[b], self.thetas[t], beta)?))
            })
            .collect()
    }

    /// `exp(-iβ·Cop_even)·exp(-iβ·Cop_odd)`.
    pub fn apply(&self, state: &mut StateVector, p: &[f64], beta: f64) -> Result<()> {
        if p.len() != state.n_qubits() || self.len() != state.n_qubits() {
            return Err(Error::invalid(format!(
                "ring of {} over {} marginals and {} qubits",
                self.len(),
                p.len(),
                state.n_qubits()
            )));
        }
        for layer in 0..2 {
            for (a, b, gate) in self.layer_gates(layer, p, beta)? {
                state.apply_2q(a, b, &gate)?;
            }
        }
        Ok(())
    }
}

/// Partitioned ring-copula mixer over qubits `0, 1, …, n-1` with a shared `theta`.
pub fn apply_ring_copula(state: &mut StateVector, p: &[f64], theta: f64, beta: f64) -> Result<()> {
    RingCopula::uniform(state.n_qubits(), theta)?.apply(state, p, beta)
}
