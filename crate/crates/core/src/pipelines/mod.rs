//! End-to-end learners: a proper learner built on multiplicative weights, an
//! improper learner built on median boosting and sparsification, their
//! agnostic η-regression and ℓp-regression reductions, and sample-size
//! calculators.

mod complexity;
mod pool;
mod report;

use std::collections::BTreeSet;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::boosting::{default_rounds, medboost, BoostConfig};
use crate::compression::{
    compress, compressed_points, generalization_bound, reconstruct_from_points, verify_approximation, BoundKind,
};
use crate::dimensions::{greedy_cover, Cover};
use crate::error::{Error, Result};
use crate::hypothesis::{Hypothesis, WeightedEnsemble};
use crate::mw::{mw_boost, MwConfig};
use crate::oracles::HypothesisClass;
use crate::sample::{
    empirical_error, expand_pairs, inflate, robust_deviation, InflatedExample, Instance, LabeledExample, LossMode,
    PerturbationMap,
};
use crate::sparsify::{default_k, sparsify};

pub use complexity::{sample_complexity, Theorem};
pub use pool::{binomial_capped, build_pool, dual_embed, DualPointMatrix, Pool, PoolConfig, PoolMode};
pub use report::{ChainRates, GridPoint, PipelineKind, PipelineReport};

/// Knobs shared by all learners.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LearnerConfig {
    pub pool: PoolConfig,
    /// Learner draws per round.
    pub retries: usize,
    pub early_stop: bool,
    /// Multiplicative-weights step.
    pub xi: f64,
    /// Round cap for multiplicative weights.
    pub max_rounds: usize,
    pub sparsify: bool,
    pub sparsify_iters: usize,
    /// Cover rebuilds allowed when boosted members break the cover certificate.
    pub refinements: usize,
    pub delta: f64,
    pub bound_c: f64,
    /// Exponent for the ℓp error reported next to the η-ball error.
    pub p: f64,
}

impl Default for LearnerConfig {
    fn default() -> Self {
        LearnerConfig {
            pool: PoolConfig::default(),
            retries: 50,
            early_stop: true,
            xi: 0.5,
            max_rounds: 256,
            sparsify: true,
            sparsify_iters: crate::sparsify::DEFAULT_MAX_ITERS,
            refinements: 8,
            delta: 0.05,
            bound_c: 1.0,
            p: 1.0,
        }
    }
}

impl LearnerConfig {
    pub fn validate(&self) -> Result<()> {
        self.pool.validate()?;
        if self.retries == 0 {
            return Err(Error::param("retries", "must be at least 1"));
        }
        if !(self.xi > 0.0) {
            return Err(Error::param("xi", "must be positive"));
        }
        if self.max_rounds == 0 {
            return Err(Error::param("max_rounds", "must be at least 1"));
        }
        if self.sparsify_iters == 0 {
            return Err(Error::param("sparsify_iters", "must be at least 1"));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(Error::param("delta", format!("{} not in (0, 1)", self.delta)));
        }
        if !(self.bound_c > 0.0) {
            return Err(Error::param("bound_c", "must be positive"));
        }
        if !(self.p >= 1.0 && self.p.is_finite()) {
            return Err(Error::param("p", "must be at least 1"));
        }
        Ok(())
    }
}

fn check_unit(name: &'static str, v: f64, closed_top: bool) -> Result<()> {
    let ok = v > 0.0 && (v < 1.0 || (closed_top && v == 1.0));
    if ok {
        Ok(())
    } else {
        let range = if closed_top { "(0, 1]" } else { "(0, 1)" };
        Err(Error::param(name, format!("{v} not in {range}")))
    }
}

fn log_sq_ceil(eta: f64) -> f64 {
    let l = (1.0 / eta).ln();
    (l * l).ceil()
}

/// `max(1, ⌈c_d · fat(H, η·s) · ⌈ln²(1/η)⌉⌉)` for the improper learner.
pub fn default_d_improper(class: &dyn HypothesisClass, eta: f64, pool: &PoolConfig) -> usize {
    let fat = class.fat(eta * pool.improper_fat_scale) as f64;
    ((pool.c_d * fat * log_sq_ceil(eta)).ceil() as usize).max(1)
}

/// `max(1, ⌈c_d · fat(H, η·s) / ε · ⌈ln²(1/η)⌉⌉)` for the proper learner.
pub fn default_d_proper(class: &dyn HypothesisClass, eta: f64, epsilon: f64, pool: &PoolConfig) -> usize {
    let fat = class.fat(eta * pool.proper_fat_scale) as f64;
    ((pool.c_d * fat / epsilon * log_sq_ceil(eta)).ceil() as usize).max(1)
}

/// Every instance named by the perturbation map.
pub fn domain_points(u: &PerturbationMap) -> Vec<Instance> {
    let mut all = BTreeSet::new();
    for (x, set) in u.iter() {
        all.insert(x);
        all.extend(set.iter().copied());
    }
    all.into_iter().collect()
}

/// True when every member's deviation at each inflated point is within `t`
/// of its deviation at the point's cover center.
fn cover_certificate(members: &[Hypothesis], inflated: &[InflatedExample], cover: &Cover, t: f64) -> bool {
    inflated.iter().enumerate().all(|(i, p)| {
        let c = &inflated[cover.assignment[i]];
        members
            .iter()
            .all(|h| ((h.eval(p.z) - p.y).abs() - (h.eval(c.z) - c.y).abs()).abs() <= t)
    })
}

struct Fit {
    ensemble: WeightedEnsemble,
    d: usize,
    pool_size: usize,
    pool_skipped: usize,
    cover_size: usize,
    rounds: usize,
    sparsified: bool,
    sparsify_failed: bool,
}

// Pool, dual embedding and cover; returns the cover points. Columns are the
// pool members plus any boosted members added by refinement.
fn cover_points(columns: &[Hypothesis], inflated: &[InflatedExample], t: f64) -> Result<(Cover, Vec<InflatedExample>)> {
    let matrix = dual_embed(columns, inflated)?;
    let cover = greedy_cover(&matrix.rows, t);
    let pts = cover.centers.iter().map(|&c| inflated[c]).collect();
    Ok((cover, pts))
}

fn add_columns(columns: &mut Vec<Hypothesis>, members: &[Hypothesis]) -> bool {
    let mut added = false;
    for h in members {
        if !columns.contains(h) {
            columns.push(h.clone());
            added = true;
        }
    }
    added
}

fn improper_fit(
    class: &dyn HypothesisClass,
    sample: &[LabeledExample],
    u: &PerturbationMap,
    eta: f64,
    cfg: &LearnerConfig,
    rng: &mut ChaCha8Rng,
) -> Result<Fit> {
    let inflated = inflate(sample, u)?;
    let d = cfg.pool.d.unwrap_or_else(|| default_d_improper(class, eta, &cfg.pool));
    let pool = build_pool(
        sample,
        u,
        class,
        eta * cfg.pool.improper_rerm_scale,
        d,
        cfg.pool.mode,
        cfg.pool.enumerate_cap,
        rng,
    )?;
    let boost = BoostConfig {
        d,
        retries: cfg.retries,
        early_stop: cfg.early_stop,
    };
    let tube = eta / 4.0;
    let mut columns = pool.members.clone();
    let mut attempt = 0;
    let (cover_size, run) = loop {
        let (cover, pts) = cover_points(&columns, &inflated, tube)?;
        let mut rounds = default_rounds(pts.len(), cfg.pool.c_t);
        let mut run = medboost(&pts, sample, u, eta, rounds, class, &boost, rng)?;
        while !run.converged && rounds < cfg.max_rounds {
            rounds = (rounds * 2).min(cfg.max_rounds);
            run = medboost(&pts, sample, u, eta, rounds, class, &boost, rng)?;
        }
        let certified = cover_certificate(&run.ensemble.members, &inflated, &cover, tube);
        if certified || attempt >= cfg.refinements || !add_columns(&mut columns, &run.ensemble.members) {
            break (cover.len(), run);
        }
        attempt += 1;
    };

    let mut fit = Fit {
        d,
        pool_size: pool.len(),
        pool_skipped: pool.skipped,
        cover_size,
        rounds: run.rounds,
        sparsified: false,
        sparsify_failed: false,
        ensemble: run.ensemble,
    };
    if cfg.sparsify {
        let fat_star = class.dual_fat(eta).max(1);
        let k = default_k(fat_star, eta.min(0.999), cfg.pool.c_k)?;
        if k < fit.ensemble.len() {
            let pairs = expand_pairs(sample, u)?;
            match sparsify(&fit.ensemble, &pairs, eta, k, cfg.sparsify_iters, rng) {
                Ok(s) => {
                    fit.ensemble = s.ensemble;
                    fit.sparsified = true;
                }
                Err(Error::SparsifyFailed { .. }) => fit.sparsify_failed = true,
                Err(e) => return Err(e),
            }
        }
    }
    Ok(fit)
}

#[allow(clippy::too_many_arguments)]
fn finish(
    kind: PipelineKind,
    class: &dyn HypothesisClass,
    sample: &[LabeledExample],
    u: &PerturbationMap,
    eta: f64,
    epsilon: Option<f64>,
    fit: Fit,
    cfg: &LearnerConfig,
    seed: u64,
    started: Instant,
) -> Result<PipelineReport> {
    let scheme = compress(&fit.ensemble, sample, eta)?;
    let points = compressed_points(&scheme, sample)?;
    let rebuilt = reconstruct_from_points(&scheme, &points, class, u)?;
    let round_trip = domain_points(u)
        .into_iter()
        .all(|x| rebuilt.eval(x).to_bits() == fit.ensemble.eval(x).to_bits());
    if !round_trip {
        return Err(Error::AssertionFailed(
            "reconstruction differs from the learned ensemble".into(),
        ));
    }
    let h = rebuilt.to_hypothesis();
    let approx = verify_approximation(&h, sample, u, eta)?;
    let emp_lp_err = empirical_error(&h, sample, u, LossMode::Lp(cfg.p))?;
    let mut max_dev = 0.0f64;
    for ex in sample {
        max_dev = max_dev.max(robust_deviation(&h, ex, u)?);
    }
    let m = sample.len();
    let k = scheme.size();
    let bound = |kind| generalization_bound(kind, k, m, cfg.delta, approx.rate, cfg.bound_c).ok();
    Ok(PipelineReport {
        pipeline: kind,
        seed,
        eta,
        epsilon,
        p: cfg.p,
        m,
        compression_size: k,
        subset_size: fit.d,
        pool_size: fit.pool_size,
        pool_skipped: fit.pool_skipped,
        cover_size: fit.cover_size,
        rounds: fit.rounds,
        sparsified: fit.sparsified,
        sparsify_failed: fit.sparsify_failed,
        emp_eta_err: approx.rate,
        emp_lp_err,
        max_robust_dev: max_dev,
        uniform: approx.uniform,
        guarantee: approx.uniform,
        round_trip,
        bound_realizable: bound(BoundKind::Realizable),
        bound_agnostic: bound(BoundKind::Agnostic),
        chain: None,
        proper_member: None,
        fit_subset: None,
        lp_bound: None,
        selected_theta: None,
        holdout_eta_err: None,
        holdout_lp_err: None,
        grid: None,
        scheme,
        hypothesis: h,
        elapsed: started.elapsed(),
    })
}

/// Proper learner: pool of η/4-robust ERM outputs, dual cover at η/2,
/// multiplicative weights with strong learners, averaged output.
///
/// Fails with [`Error::AssertionFailed`] unless the cover, inflated-set and
/// robust-sample error rates are all at most ε.
pub fn proper_learn(
    class: &dyn HypothesisClass,
    sample: &[LabeledExample],
    u: &PerturbationMap,
    eta: f64,
    epsilon: f64,
    cfg: &LearnerConfig,
    seed: u64,
) -> Result<PipelineReport> {
    let started = Instant::now();
    check_unit("eta", eta, true)?;
    check_unit("epsilon", epsilon, true)?;
    cfg.validate()?;
    if sample.is_empty() {
        return Err(Error::EmptySample);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let inflated = inflate(sample, u)?;
    let d = cfg
        .pool
        .d
        .unwrap_or_else(|| default_d_proper(class, eta, epsilon, &cfg.pool));
    let pool = build_pool(
        sample,
        u,
        class,
        eta * cfg.pool.proper_rerm_scale,
        d,
        cfg.pool.mode,
        cfg.pool.enumerate_cap,
        &mut rng,
    )?;
    let mw = MwConfig {
        d,
        retries: cfg.retries,
        xi: cfg.xi,
        early_stop: cfg.early_stop,
        max_rounds: cfg.max_rounds,
    };
    let tube = eta / 2.0;
    let mut columns = pool.members.clone();
    let mut attempt = 0;
    let (cover_pts, cover_size, run) = loop {
        let (cover, pts) = cover_points(&columns, &inflated, tube)?;
        let rounds = default_rounds(pts.len(), cfg.pool.c_t).min(cfg.max_rounds);
        let run = mw_boost(&pts, sample, u, eta, epsilon, rounds, class, &mw, &mut rng)?;
        let certified = cover_certificate(&run.ensemble.members, &inflated, &cover, tube);
        if certified || attempt >= cfg.refinements || !add_columns(&mut columns, &run.ensemble.members) {
            break (pts, cover.len(), run);
        }
        attempt += 1;
    };
    let members = run.ensemble.members.clone();
    let fit = Fit {
        d,
        pool_size: pool.len(),
        pool_skipped: pool.skipped,
        cover_size,
        rounds: run.rounds,
        sparsified: false,
        sparsify_failed: false,
        ensemble: run.ensemble,
    };
    let mut report = finish(
        PipelineKind::Proper,
        class,
        sample,
        u,
        eta,
        Some(epsilon),
        fit,
        cfg,
        seed,
        started,
    )?;
    let h = &report.hypothesis;
    let cover_rate =
        cover_pts.iter().filter(|p| (h.eval(p.z) - p.y).abs() >= tube).count() as f64 / cover_pts.len() as f64;
    let inflated_rate =
        inflated.iter().filter(|p| (h.eval(p.z) - p.y).abs() >= eta).count() as f64 / inflated.len() as f64;
    let chain = ChainRates {
        cover: cover_rate,
        inflated: inflated_rate,
        robust: report.emp_eta_err,
    };
    for (stage, rate) in [
        ("cover", chain.cover),
        ("inflated", chain.inflated),
        ("robust", chain.robust),
    ] {
        if rate > epsilon {
            return Err(Error::AssertionFailed(format!(
                "{stage} error rate {rate:.4} exceeds epsilon {epsilon}"
            )));
        }
    }
    report.guarantee = true;
    report.chain = Some(chain);
    report.proper_member = class.fold_average(&members);
    report.elapsed = started.elapsed();
    Ok(report)
}

/// Improper learner: pool of η/8-robust ERM outputs, dual cover at η/4,
/// median boosting, sparsification and compression. ε plays no role.
pub fn improper_learn(
    class: &dyn HypothesisClass,
    sample: &[LabeledExample],
    u: &PerturbationMap,
    eta: f64,
    cfg: &LearnerConfig,
    seed: u64,
) -> Result<PipelineReport> {
    let started = Instant::now();
    check_unit("eta", eta, true)?;
    cfg.validate()?;
    if sample.is_empty() {
        return Err(Error::EmptySample);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fit = improper_fit(class, sample, u, eta, cfg, &mut rng)?;
    let mut report = finish(
        PipelineKind::Improper,
        class,
        sample,
        u,
        eta,
        None,
        fit,
        cfg,
        seed,
        started,
    )?;
    report.elapsed = started.elapsed();
    Ok(report)
}

/// Agnostic η-regression: restrict to the largest subset a single class
/// member fits at the improper learner's oracle scale
/// (`η·improper_rerm_scale`), then run the improper learner there.
/// Compression groups index the full sample.
pub fn agnostic_eta_learn(
    class: &dyn HypothesisClass,
    sample: &[LabeledExample],
    u: &PerturbationMap,
    eta: f64,
    cfg: &LearnerConfig,
    seed: u64,
) -> Result<PipelineReport> {
    let started = Instant::now();
    check_unit("eta", eta, true)?;
    cfg.validate()?;
    if sample.is_empty() {
        return Err(Error::EmptySample);
    }
    let fit_scale = eta * cfg.pool.improper_rerm_scale;
    let subset = class
        .max_fit_subset(sample, u, fit_scale)?
        .ok_or(Error::NoFittableSubset { eta: fit_scale })?;
    let sub: Vec<LabeledExample> = subset.indices.iter().map(|&i| sample[i]).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut fit = improper_fit(class, &sub, u, eta, cfg, &mut rng)?;
    for src in &mut fit.ensemble.sources {
        for i in src.iter_mut() {
            *i = subset.indices[*i];
        }
    }
    let mut report = finish(
        PipelineKind::AgnosticEta,
        class,
        sample,
        u,
        eta,
        None,
        fit,
        cfg,
        seed,
        started,
    )?;
    let m = sample.len();
    let ceiling = 1.0 - subset.indices.len() as f64 / m as f64;
    report.guarantee = report.emp_eta_err <= ceiling + 1e-12;
    report.bound_agnostic = generalization_bound(
        BoundKind::Agnostic,
        report.compression_size,
        m,
        cfg.delta,
        report.emp_eta_err,
        cfg.bound_c,
    )
    .ok();
    report.fit_subset = Some(subset.indices);
    report.elapsed = started.elapsed();
    Ok(report)
}

/// `ε₀(1 − η^p) + η^p`: the ℓp error allowed when an `ε₀` fraction of
/// points sits outside the η-tube.
pub fn reverse_markov_bound(eta_ball_err: f64, eta: f64, p: f64) -> f64 {
    let t = eta.powf(p);
    eta_ball_err * (1.0 - t) + t
}

/// Realizable ℓp regression: the improper learner at `η = ε^{1/p}`.
pub fn realizable_regression(
    class: &dyn HypothesisClass,
    sample: &[LabeledExample],
    u: &PerturbationMap,
    epsilon: f64,
    p: f64,
    cfg: &LearnerConfig,
    seed: u64,
) -> Result<PipelineReport> {
    let started = Instant::now();
    check_unit("epsilon", epsilon, false)?;
    if !(p >= 1.0 && p.is_finite()) {
        return Err(Error::param("p", "must be at least 1"));
    }
    let eta = epsilon.powf(1.0 / p);
    let cfg = LearnerConfig { p, ..cfg.clone() };
    let mut report = improper_learn(class, sample, u, eta, &cfg, seed)?;
    let bound = reverse_markov_bound(report.emp_eta_err, eta, p);
    report.pipeline = PipelineKind::RealizableRegression;
    report.epsilon = Some(epsilon);
    report.guarantee = report.emp_lp_err <= bound;
    report.lp_bound = Some(bound);
    if !report.guarantee {
        return Err(Error::AssertionFailed(format!(
            "lp error {} exceeds {bound}",
            report.emp_lp_err
        )));
    }
    report.elapsed = started.elapsed();
    Ok(report)
}

/// `{1/m, 2/m, 4/m, …}` below 1, then 1.
pub fn theta_grid(m: usize) -> Vec<f64> {
    let mut grid = Vec::new();
    let mut t = 1.0 / m.max(1) as f64;
    while t < 1.0 {
        grid.push(t);
        t *= 2.0;
    }
    grid.push(1.0);
    grid
}

/// `⌈ln(1/δ)/ε²⌉`.
pub fn min_holdout_size(epsilon: f64, delta: f64) -> usize {
    ((1.0 / delta).ln() / (epsilon * epsilon)).ceil() as usize
}

fn grid_seed(seed: u64, i: usize) -> u64 {
    seed ^ (i as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Agnostic ℓp regression: agnostic η-regression at every grid scale θ,
/// then the θ minimizing the holdout θ-ball robust error (smallest θ on
/// ties). Failing grid points are recorded and skipped.
#[allow(clippy::too_many_arguments)]
pub fn agnostic_regression(
    class: &dyn HypothesisClass,
    sample: &[LabeledExample],
    holdout: &[LabeledExample],
    u: &PerturbationMap,
    epsilon: f64,
    delta: f64,
    p: f64,
    cfg: &LearnerConfig,
    seed: u64,
) -> Result<PipelineReport> {
    let started = Instant::now();
    check_unit("epsilon", epsilon, false)?;
    check_unit("delta", delta, false)?;
    if !(p >= 1.0 && p.is_finite()) {
        return Err(Error::param("p", "must be at least 1"));
    }
    if sample.is_empty() {
        return Err(Error::EmptySample);
    }
    let need = min_holdout_size(epsilon, delta);
    if holdout.len() < need {
        return Err(Error::param(
            "holdout",
            format!("{} points, need at least {need}", holdout.len()),
        ));
    }
    let cfg = LearnerConfig { p, ..cfg.clone() };
    let mut grid = Vec::new();
    let mut best: Option<(f64, PipelineReport)> = None;
    for (i, theta) in theta_grid(sample.len()).into_iter().enumerate() {
        match agnostic_eta_learn(class, sample, u, theta, &cfg, grid_seed(seed, i)) {
            Ok(r) => {
                let err = empirical_error(&r.hypothesis, holdout, u, LossMode::EtaBall(theta))?;
                grid.push(GridPoint {
                    theta,
                    holdout_err: Some(err),
                    error: None,
                });
                if best.as_ref().is_none_or(|(b, _)| err < *b) {
                    best = Some((err, r));
                }
            }
            Err(e) if e.is_validation() => return Err(e),
            Err(e) => grid.push(GridPoint {
                theta,
                holdout_err: None,
                error: Some(e.to_string()),
            }),
        }
    }
    let (err, mut report) = best.ok_or_else(|| Error::AssertionFailed("every grid point failed".into()))?;
    let theta = report.eta;
    report.holdout_lp_err = Some(empirical_error(&report.hypothesis, holdout, u, LossMode::Lp(p))?);
    report.pipeline = PipelineKind::AgnosticRegression;
    report.seed = seed;
    report.epsilon = Some(epsilon);
    report.selected_theta = Some(theta);
    report.holdout_eta_err = Some(err);
    report.grid = Some(grid);
    report.elapsed = started.elapsed();
    Ok(report)
}
