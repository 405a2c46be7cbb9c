//! Benchmark campaigns: corpus generation, every solver on every instance,
//! the four aggregate metrics and the `(k, θ)` sweep.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classical::{anneal_protocol, lazy_greedy, very_greedy, AnnealKind, ProtocolConfig};
use crate::error::{Error, Result};
use crate::exact::dp_opt;
use crate::generators::{sample_corpus, DistributionKind, GeneratorConfig, InvStrongWeights, DEFAULT_STRONG_OFFSET};
use crate::knapsack::KnapsackInstance;
use crate::rng::{derive_seed, RandomStream};
use crate::xqaoa::{optimize_params, CircuitParams, MixerKind, OptimizerSettings, PointOptimum, QkpCircuit};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolverTag {
    Lg,
    Vg,
    Sa,
    Gsa,
    QkpZx,
    QkpCop,
}

impl SolverTag {
    pub const ALL: [SolverTag; 6] = [
        SolverTag::Lg,
        SolverTag::Vg,
        SolverTag::Sa,
        SolverTag::Gsa,
        SolverTag::QkpZx,
        SolverTag::QkpCop,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SolverTag::Lg => "lg",
            SolverTag::Vg => "vg",
            SolverTag::Sa => "sa",
            SolverTag::Gsa => "gsa",
            SolverTag::QkpZx => "qkp-zx",
            SolverTag::QkpCop => "qkp-cop",
        }
    }

    pub fn is_quantum(self) -> bool {
        matches!(self, SolverTag::QkpZx | SolverTag::QkpCop)
    }
}

impl fmt::Display for SolverTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SolverTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SolverTag::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| Error::invalid(format!("unknown solver `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Metric {
    POptimal,
    PBeatLg,
    PBeatVg,
    ApproxRatio,
}

impl Metric {
    pub const ALL: [Metric; 4] = [Metric::POptimal, Metric::PBeatLg, Metric::PBeatVg, Metric::ApproxRatio];

    pub fn as_str(self) -> &'static str {
        match self {
            Metric::POptimal => "p_optimal",
            Metric::PBeatLg => "p_beat_lg",
            Metric::PBeatVg => "p_beat_vg",
            Metric::ApproxRatio => "approx_ratio",
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Everything needed to reproduce a campaign bit for bit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignManifest {
    pub tool_version: String,
    pub preset: Option<String>,
    pub seed: u64,
    pub distributions: Vec<DistributionKind>,
    pub instances_per_distribution: usize,
    pub n_items: usize,
    pub strong_offset: u64,
    pub inv_strong_weights: InvStrongWeights,
    pub solvers: Vec<SolverTag>,
    pub optimizer: OptimizerSettings,
    pub anneal: ProtocolConfig,
    /// Protocol repetitions used to estimate SA/GSA probabilities.
    pub sa_repetitions: usize,
}

impl CampaignManifest {
    pub fn paper(seed: u64) -> Self {
        Self {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            preset: Some("paper".into()),
            seed,
            distributions: DistributionKind::ALL.to_vec(),
            instances_per_distribution: 100,
            n_items: 10,
            strong_offset: DEFAULT_STRONG_OFFSET,
            inv_strong_weights: InvStrongWeights::Interval,
            solvers: SolverTag::ALL.to_vec(),
            optimizer: OptimizerSettings::paper(),
            anneal: ProtocolConfig::default(),
            sa_repetitions: 100,
        }
    }

    pub fn ci(seed: u64) -> Self {
        Self {
            preset: Some("ci".into()),
            instances_per_distribution: 20,
            optimizer: OptimizerSettings::ci(),
            ..Self::paper(seed)
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |m: &str| Err(Error::Schema(m.to_string()));
        if self.distributions.is_empty() {
            return fail("manifest lists no distributions");
        }
        if self.instances_per_distribution == 0 {
            return fail("instances_per_distribution must be >= 1");
        }
        if self.n_items == 0 {
            return fail("n_items must be >= 1");
        }
        if self.solvers.is_empty() {
            return fail("manifest lists no solvers");
        }
        let has = |t| self.solvers.contains(&t);
        if (has(SolverTag::Sa) || has(SolverTag::Gsa)) && self.sa_repetitions == 0 {
            return fail("sa_repetitions must be >= 1");
        }
        if has(SolverTag::QkpZx) || has(SolverTag::QkpCop) {
            let o = &self.optimizer;
            if o.k_values.is_empty() || o.n_beta == 0 || o.n_gamma == 0 || o.shots == 0 {
                return fail("optimizer needs k values, a non-empty grid and shots >= 1");
            }
            if has(SolverTag::QkpCop) && o.thetas.is_empty() {
                return fail("copula solver needs at least one theta");
            }
        }
        Ok(())
    }

    pub fn generator(&self, kind: DistributionKind) -> GeneratorConfig {
        GeneratorConfig {
            inv_strong_weights: self.inv_strong_weights,
            strong_offset: self.strong_offset,
            ..GeneratorConfig::new(kind, self.n_items, derive_seed(self.seed, kind_index(kind)))
        }
    }

    pub fn corpus(&self, kind: DistributionKind) -> Result<Vec<KnapsackInstance>> {
        sample_corpus(&self.generator(kind), self.instances_per_distribution)
    }

    fn solver_stream(&self, kind: DistributionKind, instance: usize, solver: SolverTag) -> RandomStream {
        RandomStream::new(self.seed).substream_path(&[1 + kind_index(kind), instance as u64, solver as u64])
    }
}

fn kind_index(kind: DistributionKind) -> u64 {
    DistributionKind::ALL.iter().position(|&k| k == kind).expect("listed kind") as u64
}

/// One solver's metrics on one instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverReport {
    pub distribution: DistributionKind,
    pub instance_id: usize,
    pub solver: SolverTag,
    pub p_optimal: f64,
    pub p_beat_lg: f64,
    pub p_beat_vg: f64,
    pub approx_ratio: f64,
    /// Chosen circuit parameters for the quantum solvers.
    pub params: Option<CircuitParams>,
}

impl SolverReport {
    pub fn metric(&self, m: Metric) -> f64 {
        match m {
            Metric::POptimal => self.p_optimal,
            Metric::PBeatLg => self.p_beat_lg,
            Metric::PBeatVg => self.p_beat_vg,
            Metric::ApproxRatio => self.approx_ratio,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceRecord {
    pub distribution: DistributionKind,
    pub instance_id: usize,
    pub optimum: u64,
    pub lg_value: u64,
    pub vg_value: u64,
    pub trivial: bool,
    pub reports: Vec<SolverReport>,
    /// Per-`(k, θ)` optima of the quantum solvers, keyed by mixer.
    pub traces: Vec<(MixerKind, Vec<PointOptimum>)>,
}

/// Mean of one metric for one solver over one distribution's corpus.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateRow {
    pub metric: Metric,
    pub solver: SolverTag,
    pub distribution: DistributionKind,
    pub value: f64,
}

/// Mean optimized approximation ratio at a fixed `(k, θ)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub distribution: DistributionKind,
    pub mixer: MixerKind,
    pub k: f64,
    pub theta: Option<f64>,
    pub mean_approx_ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignResult {
    pub manifest: CampaignManifest,
    pub records: Vec<InstanceRecord>,
    pub aggregates: Vec<AggregateRow>,
    pub sweep: Vec<SweepRow>,
}

impl CampaignResult {
    pub fn aggregate(&self, metric: Metric, solver: SolverTag, distribution: DistributionKind) -> Option<f64> {
        self.aggregates
            .iter()
            .find(|r| r.metric == metric && r.solver == solver && r.distribution == distribution)
            .map(|r| r.value)
    }

    /// Rows of the four solver-by-distribution tables: one row per
    /// `(metric, solver)`, one column per manifest distribution.
    pub fn wide_tables(&self) -> Vec<(Metric, SolverTag, Vec<Option<f64>>)> {
        let mut rows = Vec::new();
        for metric in Metric::ALL {
            for &solver in &self.manifest.solvers {
                let cells = self
                    .manifest
                    .distributions
                    .iter()
                    .map(|&d| self.aggregate(metric, solver, d))
                    .collect();
                rows.push((metric, solver, cells));
            }
        }
        rows
    }

    /// Violated output invariants; empty when the campaign is consistent.
    pub fn invariant_violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        for rec in &self.records {
            let tag = format!("{}#{}", rec.distribution, rec.instance_id);
            if rec.vg_value < rec.lg_value {
                out.push(format!("{tag}: VG value {} below LG value {}", rec.vg_value, rec.lg_value));
            }
            if rec.lg_value > rec.optimum || rec.vg_value > rec.optimum {
                out.push(format!("{tag}: greedy value above the optimum {}", rec.optimum));
            }
            if rec.distribution == DistributionKind::Strong && rec.vg_value != rec.lg_value {
                out.push(format!("{tag}: VG differs from LG on a strongly correlated instance"));
            }
            for r in &rec.reports {
                for m in Metric::ALL {
                    let v = r.metric(m);
                    if !(0.0..=1.0 + 1e-9).contains(&v) {
                        out.push(format!("{tag}: {} {} = {v} outside [0, 1]", r.solver, m));
                    }
                }
                if r.solver.is_quantum() && !rec.trivial && (r.approx_ratio.is_nan() || r.approx_ratio <= 0.0) {
                    out.push(format!("{tag}: {} approximation ratio is not positive", r.solver));
                }
            }
        }
        for a in &self.aggregates {
            if !(0.0..=1.0 + 1e-9).contains(&a.value) {
                out.push(format!("aggregate {} {} {} = {} outside [0, 1]", a.metric, a.solver, a.distribution, a.value));
            }
        }
        out
    }
}

fn deterministic_report(
    rec: (DistributionKind, usize),
    solver: SolverTag,
    value: u64,
    optimum: u64,
    lg: u64,
    vg: u64,
) -> SolverReport {
    let ind = |b: bool| f64::from(u8::from(b));
    SolverReport {
        distribution: rec.0,
        instance_id: rec.1,
        solver,
        p_optimal: ind(value == optimum),
        p_beat_lg: ind(value > lg),
        p_beat_vg: ind(value > vg),
        approx_ratio: ratio(value as f64, optimum),
        params: None,
    }
}

fn ratio(value: f64, optimum: u64) -> f64 {
    if optimum == 0 {
        1.0
    } else {
        value / optimum as f64
    }
}

/// Runs every manifest solver on one instance.
pub fn run_instance(
    manifest: &CampaignManifest,
    distribution: DistributionKind,
    instance_id: usize,
    inst: &KnapsackInstance,
) -> Result<InstanceRecord> {
    let optimum = dp_opt(inst)?.value;
    let lg = lazy_greedy(inst).value;
    let vg = very_greedy(inst).value;
    let trivial = inst.is_trivial();
    let key = (distribution, instance_id);
    let mut reports = Vec::new();
    let mut traces = Vec::new();
    let circuit = if trivial { None } else { Some(QkpCircuit::new(inst)?) };
    for &solver in &manifest.solvers {
        let report = match solver {
            SolverTag::Lg => deterministic_report(key, solver, lg, optimum, lg, vg),
            SolverTag::Vg => deterministic_report(key, solver, vg, optimum, lg, vg),
            _ if trivial => deterministic_report(key, solver, optimum, optimum, lg, vg),
            SolverTag::Sa | SolverTag::Gsa => {
                let kind = if solver == SolverTag::Sa { AnnealKind::Local } else { AnnealKind::Global };
                let stream = manifest.solver_stream(distribution, instance_id, solver);
                let reps = manifest.sa_repetitions;
                let (mut hits, mut beat_lg, mut beat_vg, mut total) = (0usize, 0usize, 0usize, 0.0);
                for r in 0..reps {
                    let value = anneal_protocol(inst, kind, &manifest.anneal, &stream.substream(r as u64))?.value;
                    hits += usize::from(value == optimum);
                    beat_lg += usize::from(value > lg);
                    beat_vg += usize::from(value > vg);
                    total += ratio(value as f64, optimum);
                }
                let n = reps as f64;
                SolverReport {
                    distribution,
                    instance_id,
                    solver,
                    p_optimal: hits as f64 / n,
                    p_beat_lg: beat_lg as f64 / n,
                    p_beat_vg: beat_vg as f64 / n,
                    approx_ratio: total / n,
                    params: None,
                }
            }
            SolverTag::QkpZx | SolverTag::QkpCop => {
                let circuit = circuit.as_ref().expect("non-trivial instance has a circuit");
                let mixer = if solver == SolverTag::QkpZx { MixerKind::Hourglass } else { MixerKind::Copula };
                let opt = optimize_params(circuit, mixer, &manifest.optimizer)?;
                let m = circuit.metrics(&opt.params, manifest.optimizer.shots)?;
                traces.push((mixer, opt.trace));
                SolverReport {
                    distribution,
                    instance_id,
                    solver,
                    p_optimal: m.p_opt_best_of,
                    p_beat_lg: m.p_beat_lg,
                    p_beat_vg: m.p_beat_vg,
                    approx_ratio: ratio(m.expected_best_of, optimum),
                    params: Some(opt.params),
                }
            }
        };
        reports.push(report);
    }
    Ok(InstanceRecord {
        distribution,
        instance_id,
        optimum,
        lg_value: lg,
        vg_value: vg,
        trivial,
        reports,
        traces,
    })
}

pub fn run_campaign(manifest: &CampaignManifest) -> Result<CampaignResult> {
    run_campaign_with_progress(manifest, |_, _| {})
}

/// As [`run_campaign`], calling `progress(done, total)` after each instance.
pub fn run_campaign_with_progress(
    manifest: &CampaignManifest,
    progress: impl Fn(usize, usize) + Sync,
) -> Result<CampaignResult> {
    manifest.validate()?;
    let mut jobs = Vec::new();
    for &kind in &manifest.distributions {
        for (i, inst) in manifest.corpus(kind)?.into_iter().enumerate() {
            jobs.push((kind, i, inst));
        }
    }
    let total = jobs.len();
    let done = std::sync::atomic::AtomicUsize::new(0);
    let records: Vec<InstanceRecord> = jobs
        .par_iter()
        .map(|(kind, i, inst)| {
            let rec = run_instance(manifest, *kind, *i, inst);
            progress(done.fetch_add(1, std::sync::atomic::Ordering::Relaxed) + 1, total);
            rec
        })
        .collect::<Result<_>>()?;
    Ok(CampaignResult {
        aggregates: aggregate(manifest, &records),
        sweep: sweep_k_theta(manifest, &records),
        manifest: manifest.clone(),
        records,
    })
}

/// Per-distribution means of every metric for every solver.
pub fn aggregate(manifest: &CampaignManifest, records: &[InstanceRecord]) -> Vec<AggregateRow> {
    let mut sums: BTreeMap<(Metric, SolverTag, DistributionKind), (f64, usize)> = BTreeMap::new();
    for rec in records {
        for r in &rec.reports {
            for m in Metric::ALL {
                let e = sums.entry((m, r.solver, rec.distribution)).or_default();
                e.0 += r.metric(m);
                e.1 += 1;
            }
        }
    }
    let mut rows = Vec::new();
    for m in Metric::ALL {
        for &s in &manifest.solvers {
            for &d in &manifest.distributions {
                if let Some(&(sum, n)) = sums.get(&(m, s, d)) {
                    rows.push(AggregateRow {
                        metric: m,
                        solver: s,
                        distribution: d,
                        value: sum / n as f64,
                    });
                }
            }
        }
    }
    rows
}

/// Mean approximation ratio per `(distribution, mixer, k, θ)` from the
/// optimizer traces. Trivial instances count with ratio 1.
pub fn sweep_k_theta(manifest: &CampaignManifest, records: &[InstanceRecord]) -> Vec<SweepRow> {
    type Key = (DistributionKind, MixerKind, u64, Option<u64>);
    let mut sums: BTreeMap<Key, (f64, usize)> = BTreeMap::new();
    let mut trivial: BTreeMap<DistributionKind, usize> = BTreeMap::new();
    for rec in records {
        if rec.trivial {
            *trivial.entry(rec.distribution).or_default() += 1;
            continue;
        }
        for (mixer, trace) in &rec.traces {
            for p in trace {
                let e = sums
                    .entry((rec.distribution, *mixer, p.k.to_bits(), p.theta.map(f64::to_bits)))
                    .or_default();
                e.0 += ratio(p.value, rec.optimum);
                e.1 += 1;
            }
        }
    }
    let mut rows: Vec<SweepRow> = sums
        .into_iter()
        .map(|((d, mixer, k, theta), (sum, n))| {
            let t = trivial.get(&d).copied().unwrap_or(0);
            SweepRow {
                distribution: d,
                mixer,
                k: f64::from_bits(k),
                theta: theta.map(f64::from_bits),
                mean_approx_ratio: (sum + t as f64) / (n + t) as f64,
            }
        })
        .collect();
    let dist_pos = |d: DistributionKind| manifest.distributions.iter().position(|&x| x == d);
    rows.sort_by(|a, b| {
        dist_pos(a.distribution)
            .cmp(&dist_pos(b.distribution))
            .then(a.mixer.as_str().cmp(b.mixer.as_str()).reverse())
            .then(a.k.total_cmp(&b.k))
            .then(b.theta.unwrap_or(0.0).total_cmp(&a.theta.unwrap_or(0.0)))
    });
    rows
}
