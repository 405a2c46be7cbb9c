//! Per-item marginal probabilities used to bias the initial state and mixer.
//!
//! Three families are provided. The constant bias puts `c / Σw` on every item
//! so the expected weight equals the capacity. The Lazy Greedy bias is the
//! deterministic 0/1 step at `r_stop`. The logistic bias interpolates between
//! them:
//!
//! ```text
//! p_i = 1 / (1 + C·exp(-k·(r_i - r*)))    with r* = r_stop, C = Σw/c - 1
//! ```
//!
//! As `k → 0` it tends to the constant bias, and as `k → ∞` to the Lazy
//! Greedy step (items exactly at `r_stop` tend to `1/(1 + C)` instead).

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::classical::lazy_greedy;
use crate::error::{Error, Result};
use crate::knapsack::{KnapsackInstance, Ratio};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum BiasProvenance {
    Constant,
    LazyGreedy,
    Logistic { k: f64 },
}

impl fmt::Display for BiasProvenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BiasProvenance::Constant => f.write_str("constant"),
            BiasProvenance::LazyGreedy => f.write_str("lg"),
            BiasProvenance::Logistic { k } => write!(f, "logistic(k={k})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BiasVector {
    pub p: Vec<f64>,
    pub provenance: BiasProvenance,
    /// Inflection ratio (`r_stop`) for the Lazy Greedy and logistic families.
    pub r_star: Option<Ratio>,
    /// Logistic constant `C`.
    pub c_logistic: Option<f64>,
}

impl BiasVector {
    /// Bias with arbitrary marginals, checked to lie in `[0, 1]`.
    pub fn from_probabilities(p: Vec<f64>) -> Result<Self> {
        if p.is_empty() {
            return Err(Error::invalid("bias vector is empty"));
        }
        if let Some(bad) = p.iter().find(|q| !(0.0..=1.0).contains(*q)) {
            return Err(Error::invalid(format!("marginal {bad} outside [0, 1]")));
        }
        Ok(Self {
            p,
            provenance: BiasProvenance::Constant,
            r_star: None,
            c_logistic: None,
        })
    }

    pub fn uniform(n: usize) -> Self {
        Self::from_probabilities(vec![0.5; n]).expect("1/2 is a valid marginal")
    }

    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }
}

fn non_trivial(inst: &KnapsackInstance) -> Result<()> {
    if inst.is_trivial() {
        Err(Error::TrivialInstance)
    } else {
        Ok(())
    }
}

pub fn constant_bias(inst: &KnapsackInstance) -> Result<BiasVector> {
    non_trivial(inst)?;
    let q = inst.capacity() as f64 / inst.total_weight() as f64;
    Ok(BiasVector {
        p: vec![q; inst.n()],
        provenance: BiasProvenance::Constant,
        r_star: None,
        c_logistic: None,
    })
}

pub fn lazy_greedy_bias(inst: &KnapsackInstance) -> Result<BiasVector> {
    let r_stop = lazy_greedy(inst).r_stop.ok_or(Error::TrivialInstance)?;
    let p = inst
        .ratios()
        .ratios
        .iter()
        .map(|&r| if r > r_stop { 1.0 } else { 0.0 })
        .collect();
    Ok(BiasVector {
        p,
        provenance: BiasProvenance::LazyGreedy,
        r_star: Some(r_stop),
        c_logistic: None,
    })
}

/// The logistic constant `C = Σw/c - 1`.
pub fn logistic_constant(inst: &KnapsackInstance) -> f64 {
    inst.total_weight() as f64 / inst.capacity() as f64 - 1.0
}

/// Half-width of the ratio band around `r*` outside which the logistic at
/// steepness `k` is within `tol` of the 0/1 step.
pub fn steep_boundary_band(c: f64, k: f64, tol: f64) -> f64 {
    ((1.0 / tol).ln() + c.ln().abs()) / k
}

/// `1 / (1 + C·exp(-k·(r - r*)))`, evaluated without overflow.
pub fn logistic(r: f64, r_star: f64, k: f64, c: f64) -> f64 {
    let exponent = -k * (r - r_star) + c.ln();
    if exponent > 0.0 {
        let e = (-exponent).exp();
        e / (1.0 + e)
    } else {
        1.0 / (1.0 + exponent.exp())
    }
}

pub fn logistic_bias(inst: &KnapsackInstance, k: f64) -> Result<BiasVector> {
    if k.is_nan() || k <= 0.0 || !k.is_finite() {
        return Err(Error::invalid(format!("logistic steepness k = {k} must be a positive finite number")));
    }
    let r_stop = lazy_greedy(inst).r_stop.ok_or(Error::TrivialInstance)?;
    let c = logistic_constant(inst);
    let r_star = r_stop.as_f64();
    let p = inst
        .ratios()
        .as_f64()
        .into_iter()
        .map(|r| logistic(r, r_star, k, c))
        .collect();
    Ok(BiasVector {
        p,
        provenance: BiasProvenance::Logistic { k },
        r_star: Some(r_stop),
        c_logistic: Some(c),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{sample_corpus, DistributionKind, GeneratorConfig};
    use approx::assert_abs_diff_eq;

    fn corpus() -> Vec<KnapsackInstance> {
        DistributionKind::ALL
            .into_iter()
            .flat_map(|k| sample_corpus(&GeneratorConfig::new(k, 10, 21), 10).unwrap())
            .collect()
    }

    #[test]
    fn glover_constant() {
        let b = constant_bias(&KnapsackInstance::glover()).unwrap();
        for &p in &b.p {
            assert_abs_diff_eq!(p, 51.0 / 52.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn symmetric_constant() {
        let inst = KnapsackInstance::new(vec![1, 2, 3, 4], vec![1; 4], 2).unwrap();
        assert_eq!(constant_bias(&inst).unwrap().p, vec![0.5; 4]);
    }

    #[test]
    fn constant_bias_hits_capacity_in_expectation() {
        for inst in corpus() {
            let b = constant_bias(&inst).unwrap();
            let expected: f64 = b.p.iter().zip(inst.weights()).map(|(p, &w)| p * w as f64).sum();
            assert_abs_diff_eq!(expected, inst.capacity() as f64, epsilon = 1e-12 * inst.capacity() as f64);
        }
    }

    #[test]
    fn trivial_instances_short_circuit() {
        let inst = KnapsackInstance::new(vec![1, 2], vec![1, 1], 2).unwrap();
        assert!(matches!(constant_bias(&inst), Err(Error::TrivialInstance)));
        assert!(matches!(lazy_greedy_bias(&inst), Err(Error::TrivialInstance)));
        assert!(matches!(logistic_bias(&inst, 10.0), Err(Error::TrivialInstance)));
    }

    #[test]
    fn glover_lazy_greedy_bias() {
        let b = lazy_greedy_bias(&KnapsackInstance::glover()).unwrap();
        assert_eq!(b.r_star, Some(Ratio::new(100, 51)));
        assert_eq!(b.p, vec![1.0, 0.0]);
    }

    #[test]
    fn identical_ratios_give_all_zero() {
        let inst = KnapsackInstance::new(vec![2, 4, 6], vec![1, 2, 3], 3).unwrap();
        assert_eq!(lazy_greedy_bias(&inst).unwrap().p, vec![0.0; 3]);
    }

    #[test]
    fn logistic_at_inflection() {
        // C = 1 when Σw = 2c; the item at r_stop gets 1/(1+C) = 1/2 for any k
        let inst = KnapsackInstance::new(vec![4, 2], vec![2, 2], 2).unwrap();
        assert_abs_diff_eq!(logistic_constant(&inst), 1.0);
        for k in [0.1, 1.0, 50.0] {
            let b = logistic_bias(&inst, k).unwrap();
            assert_abs_diff_eq!(b.p[1], 0.5, epsilon = 1e-15);
        }
    }

    #[test]
    fn logistic_limits() {
        for inst in corpus() {
            let flat = logistic_bias(&inst, 1e-9).unwrap();
            let constant = constant_bias(&inst).unwrap();
            for (a, b) in flat.p.iter().zip(&constant.p) {
                assert_abs_diff_eq!(a, b, epsilon = 1e-6);
            }
            let steep = logistic_bias(&inst, 1e4).unwrap();
            let step = lazy_greedy_bias(&inst).unwrap();
            let r_stop = step.r_star.unwrap().as_f64();
            let band = steep_boundary_band(logistic_constant(&inst), 1e4, 1e-6);
            for (i, r) in inst.ratios().as_f64().into_iter().enumerate() {
                if (r - r_stop).abs() >= band {
                    assert_abs_diff_eq!(steep.p[i], step.p[i], epsilon = 1e-6);
                }
            }
        }
    }

    #[test]
    fn boundary_band_is_tight_enough() {
        for c in [0.2, 1.0, 3.0] {
            let band = steep_boundary_band(c, 1e4, 1e-6);
            assert!(logistic(band, 0.0, 1e4, c) > 1.0 - 1e-6);
            assert!(logistic(-band, 0.0, 1e4, c) < 1e-6);
        }
    }

    #[test]
    fn logistic_is_monotone_in_ratio() {
        for inst in corpus() {
            let b = logistic_bias(&inst, 15.0).unwrap();
            let r = inst.ratios().as_f64();
            for i in 0..inst.n() {
                for j in 0..inst.n() {
                    if r[i] > r[j] {
                        assert!(b.p[i] >= b.p[j]);
                    }
                }
            }
        }
    }

    #[test]
    fn logistic_strictly_increasing_for_moderate_k() {
        let (c, r_star, k) = (1.5, 2.0, 0.8);
        let mut prev = 0.0;
        for step in 0..200 {
            let p = logistic(step as f64 * 0.05, r_star, k, c);
            assert!(p > prev);
            prev = p;
        }
    }

    #[test]
    fn inflection_by_finite_differences() {
        let (c, r_star, k) = (2.0, 1.3, 3.0);
        // the inflection of 1/(1 + C e^{-k(r-r*)}) is at r* + ln(C)/k in general,
        // and at r* exactly when C = 1
        let second = |f: &dyn Fn(f64) -> f64, r: f64| {
            let h = 1e-3;
            (f(r + h) - 2.0 * f(r) + f(r - h)) / (h * h)
        };
        let f1 = |r: f64| logistic(r, r_star, k, 1.0);
        assert!(second(&f1, r_star - 0.05) > 0.0);
        assert!(second(&f1, r_star + 0.05) < 0.0);
        let fc = |r: f64| logistic(r, r_star, k, c);
        let shifted = r_star + c.ln() / k;
        assert!(second(&fc, shifted - 0.05) > 0.0);
        assert!(second(&fc, shifted + 0.05) < 0.0);
    }

    #[test]
    fn rejects_bad_k() {
        let g = KnapsackInstance::glover();
        assert!(logistic_bias(&g, 0.0).is_err());
        assert!(logistic_bias(&g, -1.0).is_err());
        assert!(logistic_bias(&g, f64::NAN).is_err());
    }

    #[test]
    fn from_probabilities_checks_range() {
        assert!(BiasVector::from_probabilities(vec![0.2, 1.1]).is_err());
        assert!(BiasVector::from_probabilities(vec![]).is_err());
        assert_eq!(BiasVector::uniform(3).p, vec![0.5; 3]);
    }
}
