//! Greedy and annealing heuristics, plus the warm-started annealing protocols.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::knapsack::{Bitstring, KnapsackInstance, Ratio};
use crate::rng::RandomStream;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GreedyResult {
    pub x: Bitstring,
    pub value: u64,
    /// Ratio of the first item Lazy Greedy rejected; `None` when everything fits.
    pub r_stop: Option<Ratio>,
}

/// Takes items in descending ratio order and stops at the first one that does
/// not fit. In sorted coordinates the result is a prefix of ones.
pub fn lazy_greedy(inst: &KnapsackInstance) -> GreedyResult {
    let profile = inst.ratios();
    let mut x = Bitstring::zeros(inst.n());
    let (mut weight, mut value) = (0u64, 0u64);
    let mut r_stop = None;
    for &i in &profile.order {
        let w = inst.weights()[i];
        if weight + w > inst.capacity() {
            r_stop = Some(profile.ratios[i]);
            break;
        }
        x.set(i, true);
        weight += w;
        value += inst.values()[i];
    }
    GreedyResult { x, value, r_stop }
}

/// Scans the whole ratio-sorted list, adding every item that still fits.
pub fn very_greedy(inst: &KnapsackInstance) -> GreedyResult {
    let profile = inst.ratios();
    let mut x = Bitstring::zeros(inst.n());
    let (mut weight, mut value) = (0u64, 0u64);
    let mut r_stop = None;
    for &i in &profile.order {
        let w = inst.weights()[i];
        if weight + w <= inst.capacity() {
            x.set(i, true);
            weight += w;
            value += inst.values()[i];
        } else if r_stop.is_none() {
            r_stop = Some(profile.ratios[i]);
        }
    }
    GreedyResult { x, value, r_stop }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnnealConfig {
    pub steps: usize,
    pub temperature: f64,
}

impl AnnealConfig {
    pub fn new(steps: usize, temperature: f64) -> Result<Self> {
        if temperature.is_nan() || temperature <= 0.0 {
            return Err(Error::invalid("temperature must be > 0"));
        }
        Ok(Self { steps, temperature })
    }
}

/// Settings of the warm-start / temperature-sweep / final-run protocol.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProtocolConfig {
    /// Walk length for both the sweep runs and the final run.
    pub steps: usize,
    pub temperatures: Vec<f64>,
    /// Runs averaged per candidate temperature.
    pub runs_per_temperature: usize,
}

impl Default for ProtocolConfig {
    /// `T ∈ {100, 200, ..., 2000}`, ten runs each, ten-step walks.
    fn default() -> Self {
        Self {
            steps: 10,
            temperatures: (1..=20).map(|t| f64::from(t) * 100.0).collect(),
            runs_per_temperature: 10,
        }
    }
}

impl ProtocolConfig {
    fn validate(&self) -> Result<()> {
        if self.temperatures.is_empty() {
            return Err(Error::invalid("temperature sweep is empty"));
        }
        if self.temperatures.iter().any(|&t| t.is_nan() || t <= 0.0) {
            return Err(Error::invalid("temperatures must be > 0"));
        }
        if self.runs_per_temperature == 0 {
            return Err(Error::invalid("runs_per_temperature must be >= 1"));
        }
        Ok(())
    }
}

fn accept(delta: i64, temperature: f64, rng: &mut impl Rng) -> bool {
    delta > 0 || rng.gen::<f64>() < (delta as f64 / temperature).exp()
}

/// Random walk over feasible states using single-bit-flip moves. Returns the
/// best objective value seen on the walk, including the start.
pub fn simulated_annealing(
    inst: &KnapsackInstance,
    cfg: &AnnealConfig,
    start: &Bitstring,
    stream: &mut RandomStream,
) -> Result<u64> {
    if !inst.is_feasible(start)? {
        return Err(Error::invalid("simulated annealing needs a feasible start"));
    }
    let mut x = start.clone();
    let mut weight = inst.weight_of(&x)?;
    let mut value = x.dot(inst.values());
    let mut best = value;
    let mut moves = Vec::with_capacity(inst.n());
    for _ in 0..cfg.steps {
        moves.clear();
        moves.extend((0..inst.n()).filter(|&i| x.get(i) || weight + inst.weights()[i] <= inst.capacity()));
        // x = 0 with no item fitting: nothing to propose, stay put
        if moves.is_empty() {
            continue;
        }
        let i = moves[stream.gen_range(0..moves.len())];
        let (dw, dv) = (inst.weights()[i], inst.values()[i]);
        let (new_weight, new_value) = if x.get(i) {
            (weight - dw, value - dv)
        } else {
            (weight + dw, value + dv)
        };
        if accept(new_value as i64 - value as i64, cfg.temperature, stream) {
            x.flip(i);
            weight = new_weight;
            value = new_value;
            best = best.max(value);
        }
    }
    Ok(best)
}

/// Like [`simulated_annealing`], but each proposal flips every bit
/// independently with probability `1/n` and may leave the feasible region;
/// infeasible states score 0.
pub fn global_simulated_annealing(
    inst: &KnapsackInstance,
    cfg: &AnnealConfig,
    start: &Bitstring,
    stream: &mut RandomStream,
) -> Result<u64> {
    let n = inst.n();
    let mut x = start.clone();
    let mut score = inst.objective_value(&x)?;
    let mut best = score;
    let flip_p = 1.0 / n as f64;
    for _ in 0..cfg.steps {
        let mut y = x.clone();
        for i in 0..n {
            if stream.gen::<f64>() < flip_p {
                y.flip(i);
            }
        }
        let new_score = inst.objective_value(&y)?;
        if accept(new_score as i64 - score as i64, cfg.temperature, stream) {
            x = y;
            score = new_score;
            best = best.max(score);
        }
    }
    Ok(best)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AnnealKind {
    Local,
    Global,
}

/// Outcome of one protocol run.
#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolRun {
    pub value: u64,
    pub temperature: f64,
}

/// Lazy Greedy warm start, temperature chosen by best mean over the sweep,
/// then one fresh run at that temperature.
///
/// Sweep run `j` at temperature index `t` uses `stream.substream_path([t, j])`;
/// the final run uses `stream.substream(u64::MAX)`.
pub fn anneal_protocol(
    inst: &KnapsackInstance,
    kind: AnnealKind,
    cfg: &ProtocolConfig,
    stream: &RandomStream,
) -> Result<ProtocolRun> {
    cfg.validate()?;
    let start = lazy_greedy(inst).x;
    let walk = |temperature: f64, s: &mut RandomStream| {
        let anneal = AnnealConfig::new(cfg.steps, temperature)?;
        match kind {
            AnnealKind::Local => simulated_annealing(inst, &anneal, &start, s),
            AnnealKind::Global => global_simulated_annealing(inst, &anneal, &start, s),
        }
    };

    let mut best_t = cfg.temperatures[0];
    let mut best_mean = f64::NEG_INFINITY;
    for (t_idx, &t) in cfg.temperatures.iter().enumerate() {
        let mut total = 0u64;
        for j in 0..cfg.runs_per_temperature {
            total += walk(t, &mut stream.substream_path(&[t_idx as u64, j as u64]))?;
        }
        let mean = total as f64 / cfg.runs_per_temperature as f64;
        if mean > best_mean {
            best_mean = mean;
            best_t = t;
        }
    }
    let value = walk(best_t, &mut stream.substream(u64::MAX))?;
    Ok(ProtocolRun {
        value,
        temperature: best_t,
    })
}

pub fn sa_protocol(inst: &KnapsackInstance, stream: &RandomStream) -> Result<u64> {
    Ok(anneal_protocol(inst, AnnealKind::Local, &ProtocolConfig::default(), stream)?.value)
}

pub fn gsa_protocol(inst: &KnapsackInstance, stream: &RandomStream) -> Result<u64> {
    Ok(anneal_protocol(inst, AnnealKind::Global, &ProtocolConfig::default(), stream)?.value)
}
