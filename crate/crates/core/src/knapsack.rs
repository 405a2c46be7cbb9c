//! 0/1 knapsack instances, solutions, and value-per-weight ratios.

use std::cmp::Ordering;
use std::fmt;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An instance `(n, v, w, c)`: maximize `v·x` subject to `w·x <= c`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawInstance")]
pub struct KnapsackInstance {
    n: usize,
    values: Vec<u64>,
    weights: Vec<u64>,
    capacity: u64,
}

#[derive(Deserialize)]
struct RawInstance {
    n: usize,
    values: Vec<u64>,
    weights: Vec<u64>,
    capacity: u64,
}

impl TryFrom<RawInstance> for KnapsackInstance {
    type Error = Error;

    fn try_from(raw: RawInstance) -> Result<Self> {
        if raw.n != raw.values.len() || raw.n != raw.weights.len() {
            return Err(Error::Schema(format!(
                "n = {} but {} values and {} weights",
                raw.n,
                raw.values.len(),
                raw.weights.len()
            )));
        }
        KnapsackInstance::new(raw.values, raw.weights, raw.capacity)
    }
}

impl KnapsackInstance {
    pub fn new(values: Vec<u64>, weights: Vec<u64>, capacity: u64) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::invalid("instance needs at least one item"));
        }
        if values.len() != weights.len() {
            return Err(Error::invalid(format!(
                "{} values but {} weights",
                values.len(),
                weights.len()
            )));
        }
        if values.contains(&0) {
            return Err(Error::invalid("values must be >= 1"));
        }
        if weights.contains(&0) {
            return Err(Error::invalid("weights must be >= 1"));
        }
        if capacity == 0 {
            return Err(Error::invalid("capacity must be >= 1"));
        }
        Ok(Self {
            n: values.len(),
            values,
            weights,
            capacity,
        })
    }

    /// The two-item example where ratio order picks the worse item:
    /// maximize `2a + 100b` subject to `a + 51b <= 51`.
    pub fn glover() -> Self {
        Self::new(vec![2, 100], vec![1, 51], 51).expect("valid literal")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn capacity(&self) -> u64 {
        self.capacity
    }

    pub fn total_weight(&self) -> u64 {
        self.weights.iter().sum()
    }

    pub fn total_value(&self) -> u64 {
        self.values.iter().sum()
    }

    /// All items fit at once, so `1^n` is optimal.
    pub fn is_trivial(&self) -> bool {
        self.total_weight() <= self.capacity
    }

    fn check_len(&self, x: &Bitstring) -> Result<()> {
        if x.len() != self.n {
            return Err(Error::invalid(format!(
                "bitstring has {} bits, instance has {} items",
                x.len(),
                self.n
            )));
        }
        Ok(())
    }

    pub fn weight_of(&self, x: &Bitstring) -> Result<u64> {
        self.check_len(x)?;
        Ok(x.dot(&self.weights))
    }

    pub fn is_feasible(&self, x: &Bitstring) -> Result<bool> {
        Ok(self.weight_of(x)? <= self.capacity)
    }

    /// `v·x` when feasible, `0` otherwise.
    pub fn objective_value(&self, x: &Bitstring) -> Result<u64> {
        self.check_len(x)?;
        Ok(if x.dot(&self.weights) <= self.capacity {
            x.dot(&self.values)
        } else {
            0
        })
    }

    /// Objective of the basis state `index` (bit `i` of `index` is item `i`).
    pub(crate) fn objective_of_mask(&self, index: u64) -> u64 {
        let (mut w, mut v) = (0u64, 0u64);
        for i in 0..self.n {
            if index >> i & 1 == 1 {
                w += self.weights[i];
                v += self.values[i];
            }
        }
        if w <= self.capacity {
            v
        } else {
            0
        }
    }

    pub fn ratios(&self) -> RatioProfile {
        RatioProfile::new(self)
    }

    /// Same items with every value multiplied by `factor`.
    pub fn scale_values(&self, factor: u64) -> Result<Self> {
        Self::new(
            self.values.iter().map(|v| v * factor).collect(),
            self.weights.clone(),
            self.capacity,
        )
    }
}

/// A candidate solution `x ∈ {0,1}^n`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Bitstring(Vec<bool>);

impl Bitstring {
    pub fn zeros(n: usize) -> Self {
        Self(vec![false; n])
    }

    pub fn ones(n: usize) -> Self {
        Self(vec![true; n])
    }

    pub fn from_bits(bits: &[u8]) -> Self {
        Self(bits.iter().map(|&b| b != 0).collect())
    }

    /// Little-endian decoding: bit `i` of `index` is `x_i`.
    pub fn from_index(index: u64, n: usize) -> Self {
        Self((0..n).map(|i| index >> i & 1 == 1).collect())
    }

    pub fn to_index(&self) -> u64 {
        self.0
            .iter()
            .enumerate()
            .fold(0u64, |acc, (i, &b)| acc | (u64::from(b) << i))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> bool {
        self.0[i]
    }

    pub fn set(&mut self, i: usize, bit: bool) {
        self.0[i] = bit;
    }

    pub fn flip(&mut self, i: usize) {
        self.0[i] = !self.0[i];
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn count_ones(&self) -> usize {
        self.0.iter().filter(|&&b| b).count()
    }

    pub fn dot(&self, coeffs: &[u64]) -> u64 {
        self.0
            .iter()
            .zip(coeffs)
            .filter(|(&b, _)| b)
            .map(|(_, &c)| c)
            .sum()
    }
}

impl fmt::Display for Bitstring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Bitstring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Bitstring({self})")
    }
}

/// Exact non-negative rational `num/den`, compared by cross-multiplication.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Ratio {
    pub num: u64,
    pub den: u64,
}

impl Ratio {
    pub fn new(num: u64, den: u64) -> Self {
        assert!(den > 0, "ratio with zero denominator");
        Self { num, den }
    }

    pub fn as_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl PartialEq for Ratio {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Ratio {}

impl PartialOrd for Ratio {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ratio {
    fn cmp(&self, other: &Self) -> Ordering {
        (u128::from(self.num) * u128::from(other.den))
            .cmp(&(u128::from(other.num) * u128::from(self.den)))
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// Per-item ratios `r_i = v_i / w_i` and the descending ratio order.
///
/// Ties are broken by ascending item index.
#[derive(Debug, Clone)]
pub struct RatioProfile {
    pub ratios: Vec<Ratio>,
    pub order: Vec<usize>,
}

impl RatioProfile {
    fn new(inst: &KnapsackInstance) -> Self {
        let ratios: Vec<Ratio> = inst
            .values
            .iter()
            .zip(&inst.weights)
            .map(|(&v, &w)| Ratio::new(v, w))
            .collect();
        let mut order: Vec<usize> = (0..ratios.len()).collect();
        // stable sort keeps index order among equal ratios
        order.sort_by(|&a, &b| ratios[b].cmp(&ratios[a]));
        Self { ratios, order }
    }

    pub fn as_f64(&self) -> Vec<f64> {
        self.ratios.iter().map(|r| r.as_f64()).collect()
    }

    pub fn sorted(&self) -> impl Iterator<Item = Ratio> + '_ {
        self.order.iter().map(move |&i| self.ratios[i])
    }
}

/// Reads instances from JSON: a single object, a JSON array of objects, or
/// newline-delimited objects.
pub fn read_instances<R: BufRead>(mut reader: R) -> Result<Vec<KnapsackInstance>> {
    let mut text = String::new();
    reader.read_to_string(&mut text)?;
    let trimmed = text.trim_start();
    if trimmed.starts_with('[') {
        return Ok(serde_json::from_str(trimmed)?);
    }
    let mut out = Vec::new();
    for item in serde_json::Deserializer::from_str(trimmed).into_iter::<KnapsackInstance>() {
        out.push(item?);
    }
    if out.is_empty() {
        return Err(Error::Schema("no instances found".into()));
    }
    Ok(out)
}

/// Writes one instance per line.
pub fn write_instances<W: Write>(mut writer: W, instances: &[KnapsackInstance]) -> Result<()> {
    for inst in instances {
        serde_json::to_writer(&mut writer, inst)?;
        writer.write_all(b"\n")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bits(b: &[u8]) -> Bitstring {
        Bitstring::from_bits(b)
    }

    #[test]
    fn glover_feasibility() {
        let g = KnapsackInstance::glover();
        assert!(!g.is_feasible(&bits(&[1, 1])).unwrap());
        assert!(g.is_feasible(&bits(&[0, 0])).unwrap());
        assert!(g.is_feasible(&bits(&[0, 1])).unwrap());
    }

    #[test]
    fn glover_objective() {
        let g = KnapsackInstance::glover();
        assert_eq!(g.objective_value(&bits(&[0, 1])).unwrap(), 100);
        assert_eq!(g.objective_value(&bits(&[1, 1])).unwrap(), 0);
        assert_eq!(g.objective_value(&bits(&[0, 0])).unwrap(), 0);
    }

    #[test]
    fn length_mismatch_is_rejected() {
        let g = KnapsackInstance::glover();
        assert!(matches!(
            g.is_feasible(&bits(&[1])),
            Err(Error::InvalidArgument(_))
        ));
        assert!(g.objective_value(&bits(&[1, 0, 0])).is_err());
    }

    #[test]
    fn invalid_instances() {
        assert!(KnapsackInstance::new(vec![], vec![], 1).is_err());
        assert!(KnapsackInstance::new(vec![0], vec![1], 1).is_err());
        assert!(KnapsackInstance::new(vec![1], vec![0], 1).is_err());
        assert!(KnapsackInstance::new(vec![1], vec![1], 0).is_err());
        assert!(KnapsackInstance::new(vec![1, 2], vec![1], 1).is_err());
    }

    #[test]
    fn glover_ratios() {
        let r = KnapsackInstance::glover().ratios();
        assert_eq!(r.ratios[0], Ratio::new(2, 1));
        assert_eq!(r.ratios[1], Ratio::new(100, 51));
        assert_eq!(r.order, vec![0, 1]);
    }

    #[test]
    fn ratio_ties_keep_index_order() {
        let inst = KnapsackInstance::new(vec![3, 3], vec![1, 1], 1).unwrap();
        let r = inst.ratios();
        assert_eq!(r.order, vec![0, 1]);
        assert_eq!(r.ratios[0], r.ratios[1]);

        let inst = KnapsackInstance::new(vec![5, 7, 9], vec![5, 7, 9], 3).unwrap();
        assert!(inst.ratios().ratios.iter().all(|&q| q == Ratio::new(1, 1)));
    }

    #[test]
    fn exact_ratio_comparison() {
        // 1/3 vs 333333333333/1000000000000 differ only beyond f64-friendly digits
        assert!(Ratio::new(1, 3) > Ratio::new(333_333_333_333, 1_000_000_000_000));
        assert_eq!(Ratio::new(2, 4), Ratio::new(1, 2));
    }

    #[test]
    fn index_round_trip() {
        let x = bits(&[1, 0, 1, 1]);
        assert_eq!(x.to_index(), 0b1101);
        assert_eq!(Bitstring::from_index(0b1101, 4), x);
    }

    #[test]
    fn json_formats() {
        let json = r#"{"n": 2, "values": [2, 100], "weights": [1, 51], "capacity": 51}"#;
        let one = read_instances(json.as_bytes()).unwrap();
        assert_eq!(one, vec![KnapsackInstance::glover()]);

        let nd = format!("{json}\n{json}\n");
        assert_eq!(read_instances(nd.as_bytes()).unwrap().len(), 2);

        let arr = format!("[{json}, {json}]");
        assert_eq!(read_instances(arr.as_bytes()).unwrap().len(), 2);

        let mut buf = Vec::new();
        write_instances(&mut buf, &one).unwrap();
        assert_eq!(read_instances(buf.as_slice()).unwrap(), one);
    }

    #[test]
    fn json_schema_errors() {
        let bad_n = r#"{"n": 3, "values": [2, 100], "weights": [1, 51], "capacity": 51}"#;
        assert!(read_instances(bad_n.as_bytes()).is_err());
        let zero_w = r#"{"n": 1, "values": [2], "weights": [0], "capacity": 51}"#;
        assert!(read_instances(zero_w.as_bytes()).is_err());
        assert!(read_instances("".as_bytes()).is_err());
    }
}
