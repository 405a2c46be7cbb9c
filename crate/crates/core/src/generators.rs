//! Seeded generators for five hard knapsack families.
//!
//! All families draw item weights and values first, then a capacity
//! `c = ceil(alpha * sum(w) / 100)` with `alpha` uniform on `{25, ..., 75}`.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::knapsack::KnapsackInstance;
use crate::rng::RandomStream;

const SPAN_SIZE: usize = 20;

/// Default fixed charge added to each strongly correlated item.
pub const DEFAULT_STRONG_OFFSET: u64 = 1000;

fn default_strong_offset() -> u64 {
    DEFAULT_STRONG_OFFSET
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DistributionKind {
    /// `w ~ U{1..1000}`, `v = w + offset` with `offset = 1000` by default.
    Strong,
    /// `v ~ U{1..1000}`, `w ~ U{v+98 .. v+102}`.
    InvStrong,
    /// `w ~ U{1..1000}`, `v = 3·ceil(w/3)`.
    Profit,
    StrongSpanner,
    ProfitSpanner,
}

impl DistributionKind {
    pub const ALL: [DistributionKind; 5] = [
        DistributionKind::Strong,
        DistributionKind::InvStrong,
        DistributionKind::Profit,
        DistributionKind::StrongSpanner,
        DistributionKind::ProfitSpanner,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            DistributionKind::Strong => "strong",
            DistributionKind::InvStrong => "inv-strong",
            DistributionKind::Profit => "profit",
            DistributionKind::StrongSpanner => "strong-spanner",
            DistributionKind::ProfitSpanner => "profit-spanner",
        }
    }
}

impl fmt::Display for DistributionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DistributionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        DistributionKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::invalid(format!("unknown distribution `{s}`")))
    }
}

/// How inverse-strong weights are drawn around `v + 100`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InvStrongWeights {
    /// Uniform on the integers `v+98, ..., v+102`.
    #[default]
    Interval,
    /// Uniform on the two endpoints `{v+98, v+102}`.
    Endpoints,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorConfig {
    pub kind: DistributionKind,
    pub n_items: usize,
    pub seed: u64,
    #[serde(default)]
    pub inv_strong_weights: InvStrongWeights,
    /// `v - w` for strongly correlated items (also the spanner base items).
    #[serde(default = "default_strong_offset")]
    pub strong_offset: u64,
}

impl GeneratorConfig {
    pub fn new(kind: DistributionKind, n_items: usize, seed: u64) -> Self {
        Self {
            kind,
            n_items,
            seed,
            inv_strong_weights: InvStrongWeights::Interval,
            strong_offset: DEFAULT_STRONG_OFFSET,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.n_items == 0 {
            return Err(Error::invalid("n_items must be >= 1"));
        }
        Ok(())
    }
}

fn ceil_div(a: u64, b: u64) -> u64 {
    a.div_ceil(b)
}

fn strong_item(rng: &mut impl Rng, offset: u64) -> (u64, u64) {
    let w = rng.gen_range(1..=1000);
    (w + offset, w)
}

fn profit_item(rng: &mut impl Rng) -> (u64, u64) {
    let w = rng.gen_range(1..=1000);
    (3 * ceil_div(w, 3), w)
}

fn inv_strong_item(rng: &mut impl Rng, mode: InvStrongWeights) -> (u64, u64) {
    let v: u64 = rng.gen_range(1..=1000);
    let w = match mode {
        InvStrongWeights::Interval => rng.gen_range(v + 98..=v + 102),
        InvStrongWeights::Endpoints => {
            if rng.gen::<bool>() {
                v + 102
            } else {
                v + 98
            }
        }
    };
    (v, w)
}

fn spanner_items<R: Rng>(
    rng: &mut R,
    n: usize,
    mut base: impl FnMut(&mut R) -> (u64, u64),
) -> Vec<(u64, u64)> {
    let span: Vec<(u64, u64)> = (0..SPAN_SIZE)
        .map(|_| {
            let (v, w) = base(rng);
            (ceil_div(2 * v, 3), ceil_div(2 * w, 3))
        })
        .collect();
    (0..n)
        .map(|_| {
            let (v, w) = span[rng.gen_range(0..SPAN_SIZE)];
            let s = rng.gen_range(1..=3u64);
            (s * v, s * w)
        })
        .collect()
}

/// Draws one instance from `stream`.
pub fn sample_instance(cfg: &GeneratorConfig, stream: &mut RandomStream) -> Result<KnapsackInstance> {
    cfg.validate()?;
    let n = cfg.n_items;
    let items: Vec<(u64, u64)> = match cfg.kind {
        DistributionKind::Strong => (0..n).map(|_| strong_item(stream, cfg.strong_offset)).collect(),
        DistributionKind::InvStrong => (0..n)
            .map(|_| inv_strong_item(stream, cfg.inv_strong_weights))
            .collect(),
        DistributionKind::Profit => (0..n).map(|_| profit_item(stream)).collect(),
        DistributionKind::StrongSpanner => spanner_items(stream, n, |r| strong_item(r, cfg.strong_offset)),
        DistributionKind::ProfitSpanner => spanner_items(stream, n, profit_item),
    };
    let (values, weights): (Vec<u64>, Vec<u64>) = items.into_iter().unzip();
    let total: u64 = weights.iter().sum();
    let alpha: u64 = stream.gen_range(25..=75);
    let capacity = ceil_div(alpha * total, 100);
    KnapsackInstance::new(values, weights, capacity)
}

/// `count` instances; instance `i` is drawn from `RandomStream::new(seed).substream(i)`.
pub fn sample_corpus(cfg: &GeneratorConfig, count: usize) -> Result<Vec<KnapsackInstance>> {
    cfg.validate()?;
    if count == 0 {
        return Err(Error::invalid("count must be >= 1"));
    }
    let root = RandomStream::new(cfg.seed);
    (0..count as u64)
        .into_par_iter()
        .map(|i| sample_instance(cfg, &mut root.substream(i)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn corpus(kind: DistributionKind, count: usize) -> Vec<KnapsackInstance> {
        sample_corpus(&GeneratorConfig::new(kind, 10, 99), count).unwrap()
    }

    fn capacity_in_range(inst: &KnapsackInstance) -> bool {
        let total = inst.total_weight();
        ceil_div(25 * total, 100) <= inst.capacity() && inst.capacity() <= ceil_div(75 * total, 100)
    }

    #[test]
    fn strong_items() {
        for inst in corpus(DistributionKind::Strong, 50) {
            assert_eq!(inst.n(), 10);
            for (&v, &w) in inst.values().iter().zip(inst.weights()) {
                assert_eq!(v - w, 1000);
                assert!((1..=1000).contains(&w));
            }
            assert!(capacity_in_range(&inst));
        }
    }

    #[test]
    fn strong_offset_is_configurable() {
        let cfg = GeneratorConfig {
            strong_offset: 100,
            ..GeneratorConfig::new(DistributionKind::Strong, 10, 99)
        };
        for inst in sample_corpus(&cfg, 20).unwrap() {
            assert!(inst.values().iter().zip(inst.weights()).all(|(&v, &w)| v - w == 100));
        }
        let json = r#"{"kind":"strong","n_items":10,"seed":1}"#;
        let parsed: GeneratorConfig = serde_json::from_str(json).unwrap();
        assert_eq!(parsed.strong_offset, DEFAULT_STRONG_OFFSET);
    }

    #[test]
    fn strong_ratio_order_is_weight_order() {
        for inst in corpus(DistributionKind::Strong, 50) {
            let order = inst.ratios().order;
            let mut by_weight: Vec<usize> = (0..inst.n()).collect();
            by_weight.sort_by_key(|&i| inst.weights()[i]);
            let ws = |o: &[usize]| o.iter().map(|&i| inst.weights()[i]).collect::<Vec<_>>();
            assert_eq!(ws(&order), ws(&by_weight));
        }
    }

    #[test]
    fn profit_items() {
        for inst in corpus(DistributionKind::Profit, 50) {
            for (&v, &w) in inst.values().iter().zip(inst.weights()) {
                assert_eq!(v % 3, 0);
                assert!(v >= w && v - w <= 2);
            }
            assert!(capacity_in_range(&inst));
        }
    }

    #[test]
    fn inv_strong_items() {
        for inst in corpus(DistributionKind::InvStrong, 50) {
            for (&v, &w) in inst.values().iter().zip(inst.weights()) {
                assert!((1..=1000).contains(&v));
                assert!((v + 98..=v + 102).contains(&w));
            }
        }
        let mut cfg = GeneratorConfig::new(DistributionKind::InvStrong, 10, 5);
        cfg.inv_strong_weights = InvStrongWeights::Endpoints;
        for inst in sample_corpus(&cfg, 20).unwrap() {
            for (&v, &w) in inst.values().iter().zip(inst.weights()) {
                assert!(w == v + 98 || w == v + 102);
            }
        }
    }

    /// Each spanner item must be `s·(v', w')` for a scaled strong/profit base item.
    #[test]
    fn spanner_items_are_multiples_of_span_elements() {
        let is_scaled_strong = |v: u64, w: u64| {
            (1..=1000u64).any(|w0| ceil_div(2 * w0, 3) == w && ceil_div(2 * (w0 + 1000), 3) == v)
        };
        let is_scaled_profit = |v: u64, w: u64| {
            (1..=1000u64)
                .any(|w0| ceil_div(2 * w0, 3) == w && ceil_div(2 * 3 * ceil_div(w0, 3), 3) == v)
        };
        for (kind, base) in [
            (DistributionKind::StrongSpanner, &is_scaled_strong as &dyn Fn(u64, u64) -> bool),
            (DistributionKind::ProfitSpanner, &is_scaled_profit),
        ] {
            for inst in corpus(kind, 10) {
                for (&v, &w) in inst.values().iter().zip(inst.weights()) {
                    let ok = (1..=3u64)
                        .any(|s| v % s == 0 && w % s == 0 && base(v / s, w / s));
                    assert!(ok, "{kind}: item (v={v}, w={w}) is not a span multiple");
                }
                assert!(capacity_in_range(&inst));
            }
        }
    }

    #[test]
    fn deterministic() {
        let cfg = GeneratorConfig::new(DistributionKind::ProfitSpanner, 10, 1234);
        let a = sample_instance(&cfg, &mut RandomStream::new(9)).unwrap();
        let b = sample_instance(&cfg, &mut RandomStream::new(9)).unwrap();
        assert_eq!(a, b);
        assert_eq!(sample_corpus(&cfg, 5).unwrap(), sample_corpus(&cfg, 5).unwrap());
    }

    #[test]
    fn singleton_corpus_uses_substream_zero() {
        let cfg = GeneratorConfig::new(DistributionKind::Strong, 10, 77);
        let corpus = sample_corpus(&cfg, 1).unwrap();
        let direct = sample_instance(&cfg, &mut RandomStream::new(77).substream(0)).unwrap();
        assert_eq!(corpus, vec![direct]);
    }

    #[test]
    fn kinds_differ_under_same_seed() {
        let a = sample_corpus(&GeneratorConfig::new(DistributionKind::Strong, 10, 3), 5).unwrap();
        let b = sample_corpus(&GeneratorConfig::new(DistributionKind::Profit, 10, 3), 5).unwrap();
        assert_ne!(a, b);
    }

    #[test]
    fn hundred_strong_capacity_ratio() {
        for inst in corpus(DistributionKind::Strong, 100) {
            let pct = 100.0 * inst.capacity() as f64 / inst.total_weight() as f64;
            assert!((25.0..=76.0).contains(&pct), "{pct}");
        }
    }

    #[test]
    fn rejects_bad_config() {
        let cfg = GeneratorConfig::new(DistributionKind::Strong, 0, 1);
        assert!(sample_instance(&cfg, &mut RandomStream::new(1)).is_err());
        let cfg = GeneratorConfig::new(DistributionKind::Strong, 3, 1);
        assert!(sample_corpus(&cfg, 0).is_err());
    }

    #[test]
    fn kind_names_round_trip() {
        for k in DistributionKind::ALL {
            assert_eq!(k.as_str().parse::<DistributionKind>().unwrap(), k);
        }
        assert!("uncorrelated".parse::<DistributionKind>().is_err());
    }
}
