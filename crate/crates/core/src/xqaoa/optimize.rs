use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::circuit::{wrap_angle, CircuitParams, Landscape, MixerKind, Objective, QkpCircuit};
use crate::error::{Error, Result};

/// Best point found by a search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchResult {
    pub beta: f64,
    pub gamma: f64,
    pub value: f64,
    pub evaluations: usize,
}

/// Exhaustive search over `β_j = πj/N_β`, `γ_l = 2πl/N_γ`. The first strict
/// maximum in `(j, l)` order wins.
///
/// In expectation mode the landscape satisfies `f(β, γ) = f(π-β, 2π-γ)`, so
/// mirrored grid points are evaluated once.
pub fn grid_search(
    land: &mut Landscape<'_>,
    n_beta: usize,
    n_gamma: usize,
    shots: u32,
    objective: Objective,
) -> Result<SearchResult> {
    if n_beta == 0 || n_gamma == 0 {
        return Err(Error::invalid("grid needs at least one point per axis"));
    }
    let mirror = objective == Objective::Expectation;
    let mut table = vec![f64::NAN; n_beta * n_gamma];
    let mut best = SearchResult {
        beta: 0.0,
        gamma: 0.0,
        value: f64::NEG_INFINITY,
        evaluations: 0,
    };
    for j in 0..n_beta {
        for l in 0..n_gamma {
            let here = j * n_gamma + l;
            let twin = ((n_beta - j) % n_beta) * n_gamma + (n_gamma - l) % n_gamma;
            let value = if mirror && twin < here {
                table[twin]
            } else {
                best.evaluations += 1;
                let beta = PI * j as f64 / n_beta as f64;
                let gamma = 2.0 * PI * l as f64 / n_gamma as f64;
                land.objective(beta, gamma, shots, objective)
            };
            table[here] = value;
            if value > best.value {
                best.beta = PI * j as f64 / n_beta as f64;
                best.gamma = 2.0 * PI * l as f64 / n_gamma as f64;
                best.value = value;
            }
        }
    }
    Ok(best)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RefineSettings {
    pub max_evaluations: usize,
    /// Stop once the simplex spans less than this in both angles.
    pub angle_tol: f64,
    /// Stop once vertex values agree to within this.
    pub value_tol: f64,
}

impl Default for RefineSettings {
    fn default() -> Self {
        Self {
            max_evaluations: 120,
            angle_tol: 1e-6,
            value_tol: 1e-10,
        }
    }
}

/// Nelder-Mead maximization of `f` from `start` with initial steps `step`.
/// Returns the best point evaluated, which is never worse than `start`.
pub fn nelder_mead_max(
    mut f: impl FnMut(f64, f64) -> f64,
    start: (f64, f64),
    step: (f64, f64),
    settings: &RefineSettings,
) -> SearchResult {
    type Point = [f64; 2];
    let mut evaluations = 0;
    let mut best: (Point, f64) = ([start.0, start.1], f64::NEG_INFINITY);
    let mut eval = |x: Point| {
        evaluations += 1;
        let v = f(x[0], x[1]);
        if v > best.1 {
            best = (x, v);
        }
        v
    };
    let lerp = |a: Point, b: Point, t: f64| [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])];
    let s0 = [start.0, start.1];
    let mut simplex = [s0, [s0[0] + step.0, s0[1]], [s0[0], s0[1] + step.1]];
    let mut values = [0.0; 3];
    for i in 0..3 {
        values[i] = eval(simplex[i]);
    }
    let mut used = 3;
    loop {
        let mut idx = [0usize, 1, 2];
        idx.sort_by(|&a, &b| values[b].total_cmp(&values[a]));
        simplex = idx.map(|i| simplex[i]);
        values = idx.map(|i| values[i]);
        let span = |d: usize| {
            let xs = simplex.map(|p| p[d]);
            xs.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b)) - xs.iter().fold(f64::INFINITY, |a, &b| a.min(b))
        };
        if used + 2 > settings.max_evaluations
            || (span(0) < settings.angle_tol && span(1) < settings.angle_tol)
            || values[0] - values[2] < settings.value_tol
        {
            break;
        }
        let centroid = lerp(simplex[0], simplex[1], 0.5);
        let reflected = lerp(simplex[2], centroid, 2.0);
        let fr = eval(reflected);
        used += 1;
        if fr > values[0] {
            let expanded = lerp(simplex[2], centroid, 3.0);
            let fe = eval(expanded);
            used += 1;
            (simplex[2], values[2]) = if fe > fr { (expanded, fe) } else { (reflected, fr) };
        } else if fr > values[1] {
            (simplex[2], values[2]) = (reflected, fr);
        } else {
            let (contracted, reference) = if fr > values[2] {
                (lerp(centroid, reflected, 0.5), fr)
            } else {
                (lerp(centroid, simplex[2], 0.5), values[2])
            };
            let fc = eval(contracted);
            used += 1;
            if fc > reference {
                (simplex[2], values[2]) = (contracted, fc);
            } else {
                for i in 1..3 {
                    simplex[i] = lerp(simplex[0], simplex[i], 0.5);
                    values[i] = eval(simplex[i]);
                }
                used += 2;
            }
        }
    }
    let (point, value) = best;
    SearchResult {
        beta: point[0],
        gamma: point[1],
        value,
        evaluations,
    }
}

/// Nelder-Mead polish of a grid optimum. Angles are wrapped into `[0, π)` and
/// `[0, 2π)` before every evaluation.
pub fn refine(
    land: &mut Landscape<'_>,
    start: (f64, f64),
    step: (f64, f64),
    shots: u32,
    objective: Objective,
    settings: &RefineSettings,
) -> SearchResult {
    let mut r = nelder_mead_max(
        |b, g| land.objective(wrap_angle(b, PI), wrap_angle(g, 2.0 * PI), shots, objective),
        start,
        step,
        settings,
    );
    r.beta = wrap_angle(r.beta, PI);
    r.gamma = wrap_angle(r.gamma, 2.0 * PI);
    r
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizerSettings {
    pub k_values: Vec<f64>,
    /// Copula correlation values; ignored for the hourglass mixer.
    pub thetas: Vec<f64>,
    pub n_beta: usize,
    pub n_gamma: usize,
    pub shots: u32,
    pub objective: Objective,
    /// `None` keeps the grid optimum.
    pub refine: Option<RefineSettings>,
}

impl OptimizerSettings {
    pub fn paper() -> Self {
        Self {
            k_values: (10..=24).map(f64::from).collect(),
            thetas: vec![0.0, -0.5, -1.0],
            n_beta: 50,
            n_gamma: 50,
            shots: 10,
            objective: Objective::Expectation,
            refine: Some(RefineSettings::default()),
        }
    }

    pub fn ci() -> Self {
        Self {
            k_values: vec![10.0, 14.0, 18.0, 22.0],
            thetas: vec![0.0, -1.0],
            n_beta: 20,
            n_gamma: 20,
            ..Self::paper()
        }
    }

    /// Search order: ascending `k`, then `θ` by distance from 0 (positive
    /// first on equal distance). With strict improvement this makes ties go
    /// to the lowest `k` and the weakest correlation.
    fn search_order(&self, mixer: MixerKind) -> Vec<(f64, f64)> {
        let mut ks = self.k_values.clone();
        ks.sort_by(f64::total_cmp);
        let mut thetas = match mixer {
            MixerKind::Hourglass => vec![0.0],
            MixerKind::Copula => self.thetas.clone(),
        };
        thetas.sort_by(|a, b| a.abs().total_cmp(&b.abs()).then(b.total_cmp(a)));
        ks.iter().flat_map(|&k| thetas.iter().map(move |&t| (k, t))).collect()
    }
}

/// Optimum for one `(k, θ)` pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointOptimum {
    pub k: f64,
    pub theta: Option<f64>,
    pub beta: f64,
    pub gamma: f64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Optimized {
    pub params: CircuitParams,
    pub value: f64,
    pub trace: Vec<PointOptimum>,
    pub evaluations: usize,
}

/// Grid search plus optional refinement for every `(k, θ)` in `settings`.
pub fn optimize_params(circuit: &QkpCircuit, mixer: MixerKind, settings: &OptimizerSettings) -> Result<Optimized> {
    let order = settings.search_order(mixer);
    if order.is_empty() {
        return Err(Error::invalid("no k values to search"));
    }
    if mixer == MixerKind::Copula && settings.thetas.is_empty() {
        return Err(Error::invalid("no theta values to search"));
    }
    let mut trace = Vec::with_capacity(order.len());
    let mut evaluations = 0;
    let mut best: Option<(CircuitParams, f64)> = None;
    for (k, theta) in order {
        let m = mixer.with_theta(theta);
        let mut land = circuit.landscape(k, m)?;
        let grid = grid_search(&mut land, settings.n_beta, settings.n_gamma, settings.shots, settings.objective)?;
        evaluations += grid.evaluations;
        let found = match &settings.refine {
            Some(rs) => {
                let step = (0.5 * PI / settings.n_beta as f64, PI / settings.n_gamma as f64);
                let r = refine(&mut land, (grid.beta, grid.gamma), step, settings.shots, settings.objective, rs);
                evaluations += r.evaluations;
                if r.value > grid.value {
                    r
                } else {
                    grid
                }
            }
            None => grid,
        };
        trace.push(PointOptimum {
            k,
            theta: matches!(mixer, MixerKind::Copula).then_some(theta),
            beta: found.beta,
            gamma: found.gamma,
            value: found.value,
        });
        if !matches!(best, Some((_, v)) if found.value <= v) {
            best = Some((CircuitParams::new(found.beta, found.gamma, k, m)?, found.value));
        }
    }
    let (params, value) = best.expect("search order is non-empty");
    Ok(Optimized {
        params,
        value,
        trace,
        evaluations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{sample_corpus, DistributionKind, GeneratorConfig};
    use crate::knapsack::KnapsackInstance;
    use crate::xqaoa::circuit::Mixer;
    use approx::assert_abs_diff_eq;

    fn circuit() -> QkpCircuit {
        let inst = sample_corpus(&GeneratorConfig::new(DistributionKind::Profit, 10, 5), 1).unwrap().remove(0);
        QkpCircuit::new(&inst).unwrap()
    }

    #[test]
    fn nelder_mead_finds_a_smooth_peak() {
        let r = nelder_mead_max(
            |x, y| -(x - 1.2).powi(2) - 3.0 * (y + 0.4).powi(2),
            (0.0, 0.0),
            (0.3, 0.3),
            &RefineSettings {
                max_evaluations: 400,
                angle_tol: 1e-9,
                value_tol: 1e-16,
            },
        );
        assert_abs_diff_eq!(r.beta, 1.2, epsilon = 1e-4);
        assert_abs_diff_eq!(r.gamma, -0.4, epsilon = 1e-4);
        assert!(r.evaluations <= 400);
    }

    #[test]
    fn nelder_mead_never_returns_worse_than_start() {
        // start sits on the maximum; every other point is worse
        let r = nelder_mead_max(|x, y| -(x * x + y * y), (0.0, 0.0), (0.5, 0.5), &RefineSettings::default());
        assert_eq!((r.beta, r.gamma, r.value), (0.0, 0.0, 0.0));
    }

    #[test]
    fn grid_mirror_reuse_matches_full_scan() {
        let c = circuit();
        for mixer in [Mixer::Hourglass, Mixer::Copula { theta: -1.0 }] {
            let mut land = c.landscape(15.0, mixer).unwrap();
            let fast = grid_search(&mut land, 12, 10, 10, Objective::Expectation).unwrap();
            assert!(fast.evaluations < 12 * 10);
            let mut best = (f64::NEG_INFINITY, 0.0, 0.0);
            for j in 0..12 {
                for l in 0..10 {
                    let (b, g) = (PI * j as f64 / 12.0, 2.0 * PI * l as f64 / 10.0);
                    let v = land.objective(b, g, 10, Objective::Expectation);
                    if v > best.0 + 1e-9 {
                        best = (v, b, g);
                    }
                }
            }
            assert_abs_diff_eq!(fast.value, best.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn grid_sampled_mode_scans_everything() {
        let c = circuit();
        let mut land = c.landscape(15.0, Mixer::Hourglass).unwrap();
        let r = grid_search(&mut land, 4, 4, 10, Objective::Sampled { seed: 1 }).unwrap();
        assert_eq!(r.evaluations, 16);
        assert!(r.value <= c.optimum() as f64);
    }

    #[test]
    fn refine_improves_or_keeps_grid_point() {
        let c = circuit();
        let mut land = c.landscape(12.0, Mixer::Copula { theta: -0.5 }).unwrap();
        let g = grid_search(&mut land, 10, 10, 10, Objective::Expectation).unwrap();
        let r = refine(&mut land, (g.beta, g.gamma), (0.15, 0.3), 10, Objective::Expectation, &RefineSettings::default());
        assert!(r.value >= g.value);
        assert!((0.0..PI).contains(&r.beta) && (0.0..2.0 * PI).contains(&r.gamma));
        let again = land.objective(r.beta, r.gamma, 10, Objective::Expectation);
        assert_abs_diff_eq!(again, r.value, epsilon = 1e-9);
    }

    #[test]
    fn optimizer_trace_and_ties() {
        let c = circuit();
        let settings = OptimizerSettings {
            n_beta: 8,
            n_gamma: 8,
            ..OptimizerSettings::ci()
        };
        let hg = optimize_params(&c, MixerKind::Hourglass, &settings).unwrap();
        assert_eq!(hg.trace.len(), 4);
        assert!(hg.trace.iter().all(|t| t.theta.is_none() && t.value <= hg.value));
        let cop = optimize_params(&c, MixerKind::Copula, &settings).unwrap();
        assert_eq!(cop.trace.len(), 8);
        assert_eq!(cop.trace[0].theta, Some(0.0));
        let first_best = cop.trace.iter().find(|t| t.value == cop.value).unwrap();
        assert_eq!(cop.params.k, first_best.k);
        assert_eq!(cop.params.mixer, Mixer::Copula { theta: first_best.theta.unwrap() });
    }

    #[test]
    fn theta_order_prefers_weak_correlation() {
        let s = OptimizerSettings {
            k_values: vec![20.0, 10.0],
            thetas: vec![-1.0, 0.5, -0.5, 0.0],
            ..OptimizerSettings::ci()
        };
        let order = s.search_order(MixerKind::Copula);
        assert_eq!(order[..4], [(10.0, 0.0), (10.0, 0.5), (10.0, -0.5), (10.0, -1.0)]);
        assert_eq!(order[4].0, 20.0);
    }

    #[test]
    fn empty_settings_rejected() {
        let c = circuit();
        let s = OptimizerSettings {
            k_values: vec![],
            ..OptimizerSettings::ci()
        };
        assert!(optimize_params(&c, MixerKind::Hourglass, &s).is_err());
        let mut land = c.landscape(10.0, Mixer::Hourglass).unwrap();
        assert!(grid_search(&mut land, 0, 5, 10, Objective::Expectation).is_err());
        let _ = KnapsackInstance::glover();
    }
}
