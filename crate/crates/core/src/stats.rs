//! Distributions over objective values and best-of-n order statistics.

use std::collections::BTreeMap;

/// Probability mass over distinct objective values, sorted ascending.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ValueDistribution {
    values: Vec<u64>,
    probs: Vec<f64>,
}

impl ValueDistribution {
    pub fn from_pairs(pairs: impl IntoIterator<Item = (u64, f64)>) -> Self {
        let mut map: BTreeMap<u64, f64> = BTreeMap::new();
        for (v, p) in pairs {
            *map.entry(v).or_default() += p;
        }
        let (values, probs) = map.into_iter().unzip();
        Self { values, probs }
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, f64)> + '_ {
        self.values.iter().copied().zip(self.probs.iter().copied())
    }

    pub fn to_map(&self) -> BTreeMap<u64, f64> {
        self.iter().collect()
    }

    pub fn total_mass(&self) -> f64 {
        self.probs.iter().sum()
    }

    pub fn mass_at(&self, value: u64) -> f64 {
        self.values
            .binary_search(&value)
            .map_or(0.0, |i| self.probs[i])
    }

    pub fn mean(&self) -> f64 {
        self.iter().map(|(v, p)| v as f64 * p).sum()
    }

    /// `Pr[value > threshold]` for a single draw.
    pub fn prob_greater(&self, threshold: u64) -> f64 {
        let start = self.values.partition_point(|&v| v <= threshold);
        self.probs[start..].iter().sum()
    }

    /// `Pr[value >= threshold]` for a single draw.
    pub fn prob_at_least(&self, threshold: u64) -> f64 {
        let start = self.values.partition_point(|&v| v < threshold);
        self.probs[start..].iter().sum()
    }

    /// `E[max of `shots` i.i.d. draws]` = `Σ_v v·(F(v)^N − F(v⁻)^N)`.
    pub fn best_of_mean(&self, shots: u32) -> f64 {
        best_of_mean(&self.values, &self.probs, shots)
    }
}

/// Probability that at least one of `shots` draws succeeds.
pub fn best_of_prob(single: f64, shots: u32) -> f64 {
    1.0 - (1.0 - single.clamp(0.0, 1.0)).powi(shots as i32)
}

pub(crate) fn best_of_mean(values: &[u64], probs: &[f64], shots: u32) -> f64 {
    let total: f64 = probs.iter().sum();
    let mut cdf = 0.0;
    let mut prev_pow = 0.0;
    let mut mean = 0.0;
    for (&v, &p) in values.iter().zip(probs) {
        cdf += p;
        let f = (cdf / total).min(1.0);
        let pow = f.powi(shots as i32);
        mean += v as f64 * (pow - prev_pow);
        prev_pow = pow;
    }
    mean
}

/// Objective value of every basis state, grouped into sorted value classes so
/// a probability vector can be binned without sorting.
#[derive(Debug, Clone)]
pub struct ValueClasses {
    class_of: Vec<u32>,
    values: Vec<u64>,
}

impl ValueClasses {
    pub fn new(objective: &[u64]) -> Self {
        let mut values = objective.to_vec();
        values.sort_unstable();
        values.dedup();
        let class_of = objective
            .iter()
            .map(|v| values.binary_search(v).expect("value present") as u32)
            .collect();
        Self { class_of, values }
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    /// Mass per class; `buf` is resized and overwritten.
    pub fn bin(&self, probs: &[f64], buf: &mut Vec<f64>) {
        buf.clear();
        buf.resize(self.values.len(), 0.0);
        for (&c, &p) in self.class_of.iter().zip(probs) {
            buf[c as usize] += p;
        }
    }

    pub fn distribution(&self, probs: &[f64]) -> ValueDistribution {
        let mut masses = Vec::new();
        self.bin(probs, &mut masses);
        ValueDistribution {
            values: self.values.clone(),
            probs: masses,
        }
    }

    pub fn index_of(&self, value: u64) -> Option<usize> {
        self.values.binary_search(&value).ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn aggregation() {
        let d = ValueDistribution::from_pairs([(2, 0.25), (0, 0.25), (100, 0.25), (0, 0.25)]);
        assert_eq!(d.values(), &[0, 2, 100]);
        assert_abs_diff_eq!(d.mass_at(0), 0.5);
        assert_abs_diff_eq!(d.mean(), 25.5);
        assert_abs_diff_eq!(d.prob_greater(2), 0.25);
        assert_abs_diff_eq!(d.prob_at_least(2), 0.5);
        assert_eq!(d.mass_at(7), 0.0);
    }

    #[test]
    fn one_shot_is_the_mean() {
        let d = ValueDistribution::from_pairs([(1, 0.2), (5, 0.5), (9, 0.3)]);
        assert_abs_diff_eq!(d.best_of_mean(1), d.mean(), epsilon = 1e-15);
    }

    /// Brute-force enumeration over all pairs of draws.
    #[test]
    fn best_of_two_by_enumeration() {
        let pairs = [(1u64, 0.2), (5, 0.5), (9, 0.3)];
        let d = ValueDistribution::from_pairs(pairs);
        let mut expect = 0.0;
        for &(a, pa) in &pairs {
            for &(b, pb) in &pairs {
                expect += pa * pb * a.max(b) as f64;
            }
        }
        assert_abs_diff_eq!(d.best_of_mean(2), expect, epsilon = 1e-14);
    }

    #[test]
    fn point_mass() {
        let d = ValueDistribution::from_pairs([(42, 1.0)]);
        assert_abs_diff_eq!(d.best_of_mean(10), 42.0);
        assert_abs_diff_eq!(best_of_prob(1.0, 10), 1.0);
        assert_abs_diff_eq!(best_of_prob(0.25, 2), 7.0 / 16.0);
    }

    #[test]
    fn classes_bin_like_from_pairs() {
        let objective = [0, 2, 100, 0, 7, 2];
        let probs = [0.1, 0.2, 0.3, 0.15, 0.05, 0.2];
        let classes = ValueClasses::new(&objective);
        let a = classes.distribution(&probs);
        let b = ValueDistribution::from_pairs(objective.iter().copied().zip(probs));
        assert_eq!(a.values(), b.values());
        for (x, y) in a.probs().iter().zip(b.probs()) {
            assert_abs_diff_eq!(x, y, epsilon = 1e-15);
        }
        assert_eq!(classes.index_of(7), Some(2));
        assert_eq!(classes.index_of(8), None);
    }
}
