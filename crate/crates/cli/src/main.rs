use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use xqkp_core::campaign::{run_campaign_with_progress, CampaignManifest, CampaignResult};
use xqkp_core::classical::{anneal_protocol, AnnealKind, ProtocolConfig};
use xqkp_core::generators::DEFAULT_STRONG_OFFSET;
use xqkp_core::xqaoa::{optimize_params, OptimizerSettings, RefineSettings};
use xqkp_core::{
    brute_force_opt, constant_bias, dp_opt, lazy_greedy, lazy_greedy_bias, logistic_bias, read_instances,
    sample_corpus, very_greedy, write_instances, DistributionKind, GeneratorConfig, KnapsackInstance, MixerKind,
    Objective, QkpCircuit, RandomStream,
};

#[derive(Parser)]
#[command(name = "xqkp", version, about = "Biased QAOA knapsack benchmarks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a corpus of hard instances as newline-delimited JSON.
    Gen(GenArgs),
    /// Run one classical solver over a corpus.
    Solve(SolveArgs),
    /// Tabulate the initial-state bias of one instance.
    Bias(BiasArgs),
    /// Optimize and evaluate the biased QAOA circuit on a corpus.
    Qkp(QkpArgs),
    /// Run a full benchmark campaign.
    Bench(BenchArgs),
}

#[derive(clap::Args)]
struct GenArgs {
    #[arg(long)]
    dist: String,
    #[arg(long, default_value_t = 10)]
    n: usize,
    #[arg(long, default_value_t = 100)]
    count: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Value offset `v = w + offset` of the strongly correlated families.
    #[arg(long, default_value_t = DEFAULT_STRONG_OFFSET)]
    strong_offset: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum Algo {
    Lg,
    Vg,
    Sa,
    Gsa,
    Bf,
    Dp,
}

#[derive(clap::Args)]
struct SolveArgs {
    #[arg(long, value_enum)]
    algo: Algo,
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum BiasKind {
    Constant,
    Lg,
    Logistic,
}

#[derive(clap::Args)]
struct BiasArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Which instance of a multi-instance file to use.
    #[arg(long, default_value_t = 0)]
    index: usize,
    #[arg(long, value_enum)]
    kind: BiasKind,
    #[arg(long, default_value_t = 15.0)]
    k: f64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum ObjectiveArg {
    Expect,
    Sampled,
}

#[derive(clap::Args)]
struct QkpArgs {
    #[arg(long)]
    mixer: MixerKind,
    #[arg(long = "in")]
    input: PathBuf,
    /// Inclusive integer range `lo:hi` or `lo:hi:step`.
    #[arg(long, default_value = "10:24")]
    k_range: String,
    #[arg(long, default_value = "0,-0.5,-1", allow_hyphen_values = true)]
    theta: String,
    #[arg(long, default_value = "50x50")]
    grid: String,
    #[arg(long, default_value_t = 10)]
    shots: u32,
    #[arg(long, value_enum, default_value = "expect")]
    objective: ObjectiveArg,
    /// Keep the grid optimum without local refinement.
    #[arg(long)]
    no_refine: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum Preset {
    Paper,
    Ci,
}

#[derive(clap::Args)]
struct BenchArgs {
    #[arg(long, value_enum, default_value = "ci")]
    preset: Preset,
    /// `all` or a comma-separated list of distributions.
    #[arg(long, default_value = "all")]
    dist: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Override the preset's instances per distribution.
    #[arg(long)]
    instances: Option<usize>,
    /// Rerun a saved manifest; other campaign flags are ignored.
    #[arg(long)]
    manifest: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Gen(a) => gen(a).map(|_| true),
        Command::Solve(a) => solve(a).map(|_| true),
        Command::Bias(a) => bias(a).map(|_| true),
        Command::Qkp(a) => qkp(a).map(|_| true),
        Command::Bench(a) => bench(a),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn load(path: &Path) -> Result<Vec<KnapsackInstance>> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let insts = read_instances(BufReader::new(file)).with_context(|| format!("reading {}", path.display()))?;
    if insts.is_empty() {
        bail!("{} holds no instances", path.display());
    }
    Ok(insts)
}

fn csv_writer(path: &Path) -> Result<csv::Writer<File>> {
    csv::Writer::from_path(path).with_context(|| format!("creating {}", path.display()))
}

fn gen(a: GenArgs) -> Result<()> {
    let kind: DistributionKind = a.dist.parse()?;
    let cfg = GeneratorConfig {
        strong_offset: a.strong_offset,
        ..GeneratorConfig::new(kind, a.n, a.seed)
    };
    let insts = sample_corpus(&cfg, a.count)?;
    let mut out = BufWriter::new(File::create(&a.out).with_context(|| format!("creating {}", a.out.display()))?);
    write_instances(&mut out, &insts)?;
    out.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct SolveRow {
    instance_id: usize,
    algo: &'static str,
    value: u64,
    optimum: u64,
    approx_ratio: f64,
    solution: String,
    temperature: Option<f64>,
}

fn solve(a: SolveArgs) -> Result<()> {
    let insts = load(&a.input)?;
    let root = RandomStream::new(a.seed);
    let mut w = csv_writer(&a.out)?;
    for (i, inst) in insts.iter().enumerate() {
        let optimum = dp_opt(inst)?.value;
        let (name, value, solution, temperature) = match a.algo {
            Algo::Lg => {
                let r = lazy_greedy(inst);
                ("lg", r.value, r.x.to_string(), None)
            }
            Algo::Vg => {
                let r = very_greedy(inst);
                ("vg", r.value, r.x.to_string(), None)
            }
            Algo::Bf => {
                let r = brute_force_opt(inst)?;
                ("bf", r.value, r.x.to_string(), None)
            }
            Algo::Dp => {
                let r = dp_opt(inst)?;
                ("dp", r.value, r.x.to_string(), None)
            }
            Algo::Sa | Algo::Gsa => {
                let (name, kind) = match a.algo {
                    Algo::Sa => ("sa", AnnealKind::Local),
                    _ => ("gsa", AnnealKind::Global),
                };
                let r = anneal_protocol(inst, kind, &ProtocolConfig::default(), &root.substream(i as u64))?;
                (name, r.value, String::new(), Some(r.temperature))
            }
        };
        w.serialize(SolveRow {
            instance_id: i,
            algo: name,
            value,
            optimum,
            approx_ratio: if optimum == 0 { 1.0 } else { value as f64 / optimum as f64 },
            solution,
            temperature,
        })?;
    }
    w.flush()?;
    Ok(())
}

fn bias(a: BiasArgs) -> Result<()> {
    let insts = load(&a.input)?;
    let inst = insts
        .get(a.index)
        .with_context(|| format!("instance {} requested, file holds {}", a.index, insts.len()))?;
    let b = match a.kind {
        BiasKind::Constant => constant_bias(inst)?,
        BiasKind::Lg => lazy_greedy_bias(inst)?,
        BiasKind::Logistic => logistic_bias(inst, a.k)?,
    };
    let mut w = csv_writer(&a.out)?;
    w.write_record(["i", "r_i", "p_i"])?;
    for (i, (r, p)) in inst.ratios().as_f64().into_iter().zip(&b.p).enumerate() {
        w.write_record([i.to_string(), r.to_string(), p.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

fn parse_k_range(s: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    let num = |t: &str| t.trim().parse::<u32>().with_context(|| format!("bad k bound `{t}`"));
    let (lo, hi, step) = match parts.as_slice() {
        [one] => (num(one)?, num(one)?, 1),
        [lo, hi] => (num(lo)?, num(hi)?, 1),
        [lo, hi, step] => (num(lo)?, num(hi)?, num(step)?),
        _ => bail!("k range `{s}` is not lo:hi[:step]"),
    };
    if lo == 0 || hi < lo || step == 0 {
        bail!("k range `{s}` must satisfy 0 < lo <= hi and step > 0");
    }
    Ok((lo..=hi).step_by(step as usize).map(f64::from).collect())
}

fn parse_thetas(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|t| {
            let v: f64 = t.trim().parse().with_context(|| format!("bad theta `{t}`"))?;
            if !(-1.0..=1.0).contains(&v) {
                bail!("theta {v} outside [-1, 1]");
            }
            Ok(v)
        })
        .collect()
}

fn parse_grid(s: &str) -> Result<(usize, usize)> {
    let (b, g) = s.split_once(['x', 'X']).with_context(|| format!("grid `{s}` is not NxM"))?;
    let (b, g): (usize, usize) = (b.trim().parse()?, g.trim().parse()?);
    if b == 0 || g == 0 {
        bail!("grid `{s}` must be non-empty");
    }
    Ok((b, g))
}

#[derive(Serialize)]
struct QkpRow {
    instance_id: usize,
    mixer: &'static str,
    k: Option<f64>,
    theta: Option<f64>,
    beta: Option<f64>,
    gamma: Option<f64>,
    objective: f64,
    optimum: u64,
    expected_best_of: f64,
    approx_ratio: f64,
    p_optimal: f64,
    p_beat_lg: f64,
    p_beat_vg: f64,
    sampled_value: u64,
}

fn qkp(a: QkpArgs) -> Result<()> {
    let insts = load(&a.input)?;
    let (n_beta, n_gamma) = parse_grid(&a.grid)?;
    if a.shots == 0 {
        bail!("shots must be positive");
    }
    let settings = OptimizerSettings {
        k_values: parse_k_range(&a.k_range)?,
        thetas: parse_thetas(&a.theta)?,
        n_beta,
        n_gamma,
        shots: a.shots,
        objective: match a.objective {
            ObjectiveArg::Expect => Objective::Expectation,
            ObjectiveArg::Sampled => Objective::Sampled { seed: a.seed },
        },
        refine: (!a.no_refine).then(RefineSettings::default),
    };
    let root = RandomStream::new(a.seed);
    let mut w = csv_writer(&a.out)?;
    for (i, inst) in insts.iter().enumerate() {
        if inst.is_trivial() {
            let all = inst.total_value();
            w.serialize(QkpRow {
                instance_id: i,
                mixer: a.mixer.as_str(),
                k: None,
                theta: None,
                beta: None,
                gamma: None,
                objective: all as f64,
                optimum: all,
                expected_best_of: all as f64,
                approx_ratio: 1.0,
                p_optimal: 1.0,
                p_beat_lg: 0.0,
                p_beat_vg: 0.0,
                sampled_value: all,
            })?;
            continue;
        }
        let circuit = QkpCircuit::new(inst)?;
        let opt = optimize_params(&circuit, a.mixer, &settings)?;
        let m = circuit.metrics(&opt.params, a.shots)?;
        let run = circuit.run(&opt.params, a.shots as usize, &mut root.substream(i as u64))?;
        let theta = match opt.params.mixer {
            xqkp_core::Mixer::Copula { theta } => Some(theta),
            xqkp_core::Mixer::Hourglass => None,
        };
        w.serialize(QkpRow {
            instance_id: i,
            mixer: a.mixer.as_str(),
            k: Some(opt.params.k),
            theta,
            beta: Some(opt.params.beta),
            gamma: Some(opt.params.gamma),
            objective: opt.value,
            optimum: circuit.optimum(),
            expected_best_of: m.expected_best_of,
            approx_ratio: m.expected_best_of / circuit.optimum() as f64,
            p_optimal: m.p_opt_best_of,
            p_beat_lg: m.p_beat_lg,
            p_beat_vg: m.p_beat_vg,
            sampled_value: run.value,
        })?;
    }
    w.flush()?;
    Ok(())
}

fn bench_manifest(a: &BenchArgs) -> Result<CampaignManifest> {
    if let Some(path) = &a.manifest {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        return Ok(serde_json::from_str(&text)?);
    }
    let mut m = match a.preset {
        Preset::Paper => CampaignManifest::paper(a.seed),
        Preset::Ci => CampaignManifest::ci(a.seed),
    };
    if a.dist != "all" {
        m.distributions = a
            .dist
            .split(',')
            .map(|d| d.trim().parse::<DistributionKind>())
            .collect::<xqkp_core::Result<_>>()?;
    }
    if let Some(n) = a.instances {
        m.instances_per_distribution = n;
    }
    Ok(m)
}

fn write_tables(result: &CampaignResult, path: &Path) -> Result<()> {
    let mut w = csv_writer(path)?;
    let mut header = vec!["metric".to_string(), "solver".to_string()];
    header.extend(result.manifest.distributions.iter().map(|d| d.to_string()));
    w.write_record(&header)?;
    for (metric, solver, cells) in result.wide_tables() {
        let mut rec = vec![metric.to_string(), solver.to_string()];
        rec.extend(cells.iter().map(|c| c.map(|v| format!("{v:.6}")).unwrap_or_default()));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

fn write_sweep(result: &CampaignResult, path: &Path) -> Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record(["distribution", "mixer", "k", "theta", "mean_approx_ratio"])?;
    for r in &result.sweep {
        w.write_record([
            r.distribution.to_string(),
            r.mixer.as_str().to_string(),
            r.k.to_string(),
            r.theta.map(|t| t.to_string()).unwrap_or_default(),
            format!("{:.6}", r.mean_approx_ratio),
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn write_reports(result: &CampaignResult, path: &Path) -> Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record([
        "distribution",
        "instance_id",
        "solver",
        "p_optimal",
        "p_beat_lg",
        "p_beat_vg",
        "approx_ratio",
        "k",
        "beta",
        "gamma",
    ])?;
    for rec in &result.records {
        for r in &rec.reports {
            let p = r.params.as_ref();
            w.write_record([
                rec.distribution.to_string(),
                rec.instance_id.to_string(),
                r.solver.to_string(),
                r.p_optimal.to_string(),
                r.p_beat_lg.to_string(),
                r.p_beat_vg.to_string(),
                r.approx_ratio.to_string(),
                p.map(|p| p.k.to_string()).unwrap_or_default(),
                p.map(|p| p.beta.to_string()).unwrap_or_default(),
                p.map(|p| p.gamma.to_string()).unwrap_or_default(),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

fn bench(a: BenchArgs) -> Result<bool> {
    let manifest = bench_manifest(&a)?;
    fs::create_dir_all(&a.out).with_context(|| format!("creating {}", a.out.display()))?;
    let result = run_campaign_with_progress(&manifest, |done, total| {
        if done % 25 == 0 || done == total {
            eprintln!("{done}/{total} instances");
        }
    })?;
    fs::write(a.out.join("manifest.json"), serde_json::to_string_pretty(&manifest)? + "\n")?;
    write_tables(&result, &a.out.join("tables.csv"))?;
    write_sweep(&result, &a.out.join("sweep.csv"))?;
    write_reports(&result, &a.out.join("reports.csv"))?;
    let violations = result.invariant_violations();
    for v in &violations {
        eprintln!("invariant violated: {v}");
    }
    Ok(violations.is_empty())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k_ranges() {
        assert_eq!(parse_k_range("10:12").unwrap(), vec![10.0, 11.0, 12.0]);
        assert_eq!(parse_k_range("10:24:7").unwrap(), vec![10.0, 17.0, 24.0]);
        assert_eq!(parse_k_range("15").unwrap(), vec![15.0]);
        for bad in ["0:3", "5:4", "1:2:0", "a:b", "1:2:3:4"] {
            assert!(parse_k_range(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn thetas_and_grid() {
        assert_eq!(parse_thetas("0,-0.5,-1").unwrap(), vec![0.0, -0.5, -1.0]);
        assert!(parse_thetas("2").is_err());
        assert_eq!(parse_grid("50x40").unwrap(), (50, 40));
        assert!(parse_grid("50").is_err());
        assert!(parse_grid("0x3").is_err());
    }
}
