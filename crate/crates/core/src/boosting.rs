//! Median boosting for real-valued weak learners.
//!
//! Each round draws points from the current distribution over the cover,
//! maps them back to the original sample points they were perturbed from,
//! fits an η/8-robust ERM on those originals and keeps the result if it is an
//! (η/4, 1/6)-weak learner. Learners are combined by a weighted median.

use rand::distributions::{Distribution, WeightedIndex};
use rand::Rng;

use crate::error::{Error, Result};
use crate::hypothesis::{Aggregation, Hypothesis, WeightedEnsemble};
use crate::oracles::{violating_mass, HypothesisClass, PointDistribution};
use crate::sample::{InflatedExample, LabeledExample, PerturbationMap};

/// Margin parameter of the weak learners, fixed inside the α formula.
pub const WEAK_EDGE: f64 = 1.0 / 6.0;
/// Scale of the robust ERM run on each weak learner's points, relative to η.
pub const WEAK_RERM_SCALE: f64 = 1.0 / 8.0;
/// Scale of the weak-learner and cover-approximation tests, relative to η.
pub const WEAK_CHECK_SCALE: f64 = 1.0 / 4.0;

/// Lower weighted median: the smallest value at which the cumulative
/// normalized weight reaches 1/2.
pub fn weighted_median(values: &[f64], weights: &[f64]) -> Result<f64> {
    if values.is_empty() || values.len() != weights.len() {
        return Err(Error::param("values", "need equal, nonzero lengths"));
    }
    let total: f64 = weights.iter().sum();
    if !(total > 0.0) {
        return Err(Error::DegenerateWeights);
    }
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut cum = 0.0;
    for &i in &order {
        cum += weights[i];
        if 2.0 * cum >= total {
            return Ok(values[i]);
        }
    }
    // rounding can leave the last partial sum a hair short of total/2
    Ok(values[*order.last().expect("nonempty")])
}

/// `α = ½ ln( (1 − 1/6)·P[w = +1] / ((1 + 1/6)·P[w = −1]) )`, or `+∞` when no
/// mass sits on `w = −1`.
pub fn medboost_alpha(p: &PointDistribution, w: &[i8]) -> Result<f64> {
    if w.len() != p.len() {
        return Err(Error::param("w", "one sign per point"));
    }
    let plus = p.mass_where(|i| w[i] == 1);
    let minus = p.mass_where(|i| w[i] == -1);
    if minus <= 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(0.5 * (((1.0 - WEAK_EDGE) * plus) / ((1.0 + WEAK_EDGE) * minus)).ln())
}

/// `P'(i) ∝ P(i)·exp(−α w_i)`.
pub fn medboost_reweight(p: &PointDistribution, w: &[i8], alpha: f64) -> Result<PointDistribution> {
    let scores = p
        .weights()
        .iter()
        .zip(w)
        .map(|(pi, &wi)| pi * (-alpha * f64::from(wi)).exp())
        .collect();
    PointDistribution::normalized(scores)
}

/// Draws `d` cover points i.i.d. from `p` and returns the sorted, distinct
/// original sample indices they stem from.
pub(crate) fn draw_origins<R: Rng + ?Sized>(
    p: &PointDistribution,
    cover: &[InflatedExample],
    d: usize,
    rng: &mut R,
) -> Result<Vec<usize>> {
    let dist = WeightedIndex::new(p.weights()).map_err(|_| Error::DegenerateWeights)?;
    let mut origins: Vec<usize> = (0..d).map(|_| cover[dist.sample(rng)].origin).collect();
    origins.sort_unstable();
    origins.dedup();
    Ok(origins)
}

/// Finds an (η/4, 1/6)-weak learner for `p` by sampling and verifying.
///
/// Returns the learner and the original sample indices it was fit on.
#[allow(clippy::too_many_arguments)]
pub fn find_weak_learner<R: Rng + ?Sized>(
    p: &PointDistribution,
    cover: &[InflatedExample],
    sample: &[LabeledExample],
    u: &PerturbationMap,
    eta: f64,
    class: &dyn HypothesisClass,
    d: usize,
    retries: usize,
    rng: &mut R,
) -> Result<(Hypothesis, Vec<usize>)> {
    if d == 0 {
        return Err(Error::param("d", "must be at least 1"));
    }
    if cover.is_empty() || cover.len() != p.len() {
        return Err(Error::param("cover", "nonempty, one weight per cover point"));
    }
    let threshold = 0.5 - WEAK_EDGE;
    let mut best_mass = 1.0f64;
    for _ in 0..retries.max(1) {
        let origins = draw_origins(p, cover, d, rng)?;
        let subset: Vec<LabeledExample> = origins.iter().map(|&i| sample[i]).collect();
        let h = match class.rerm(&subset, u, eta * WEAK_RERM_SCALE) {
            Ok(h) => h,
            Err(Error::Infeasible { .. }) => continue,
            Err(e) => return Err(e),
        };
        let mass = violating_mass(&h, p, cover, eta * WEAK_CHECK_SCALE);
        best_mass = best_mass.min(mass);
        if crate::oracles::weak_learner_check(&h, p, cover, eta * WEAK_CHECK_SCALE, WEAK_EDGE) {
            debug_assert!(mass < threshold);
            return Ok((h, origins));
        }
    }
    Err(Error::WeakLearnerNotFound { best_mass })
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoostConfig {
    /// Original points per weak learner draw.
    pub d: usize,
    /// Draws per round before giving up.
    pub retries: usize,
    /// Stop as soon as the median is within η/4 on every cover point.
    pub early_stop: bool,
}

impl Default for BoostConfig {
    fn default() -> Self {
        BoostConfig {
            d: 1,
            retries: 50,
            early_stop: true,
        }
    }
}

#[derive(Clone, Debug)]
pub struct MedBoostRun {
    pub ensemble: WeightedEnsemble,
    pub rounds: usize,
    /// Whether the median is within η/4 of every cover label.
    pub converged: bool,
}

/// Largest deviation of an ensemble's aggregate from the labels of `points`.
pub fn max_deviation(ensemble: &WeightedEnsemble, points: &[InflatedExample]) -> f64 {
    points
        .iter()
        .map(|p| (ensemble.eval(p.z) - p.y).abs())
        .fold(0.0, f64::max)
}

/// Median boosting over the cover for up to `rounds` rounds.
#[allow(clippy::too_many_arguments)]
pub fn medboost<R: Rng + ?Sized>(
    cover: &[InflatedExample],
    sample: &[LabeledExample],
    u: &PerturbationMap,
    eta: f64,
    rounds: usize,
    class: &dyn HypothesisClass,
    config: &BoostConfig,
    rng: &mut R,
) -> Result<MedBoostRun> {
    if rounds == 0 {
        return Err(Error::param("rounds", "must be at least 1"));
    }
    if cover.is_empty() {
        return Err(Error::param("cover", "must be nonempty"));
    }
    let tube = eta * WEAK_CHECK_SCALE;
    let mut p = PointDistribution::uniform(cover.len());
    let mut members = Vec::new();
    let mut alphas = Vec::new();
    let mut sources = Vec::new();

    for t in 0..rounds {
        let (h, src, w, alpha) = {
            let mut accepted = None;
            for _ in 0..config.retries.max(1) {
                let (h, src) = find_weak_learner(&p, cover, sample, u, eta, class, config.d, config.retries, rng)?;
                let w: Vec<i8> = cover
                    .iter()
                    .map(|c| if (h.eval(c.z) - c.y).abs() > tube { -1 } else { 1 })
                    .collect();
                let alpha = medboost_alpha(&p, &w)?;
                // a nonpositive α certifies the draw was not a weak learner
                if alpha > 0.0 {
                    accepted = Some((h, src, w, alpha));
                    break;
                }
            }
            accepted.ok_or(Error::WeakLearnerNotFound {
                best_mass: 0.5 - WEAK_EDGE,
            })?
        };

        if alpha.is_infinite() {
            let ensemble = WeightedEnsemble::new(
                vec![h; rounds],
                vec![1.0; rounds],
                vec![src; rounds],
                Aggregation::WeightedMedian,
            )?;
            return Ok(MedBoostRun {
                ensemble,
                rounds: t + 1,
                converged: true,
            });
        }

        members.push(h);
        alphas.push(alpha);
        sources.push(src);
        p = medboost_reweight(&p, &w, alpha)?;

        if config.early_stop {
            let current = WeightedEnsemble::new(
                members.clone(),
                alphas.clone(),
                sources.clone(),
                Aggregation::WeightedMedian,
            )?;
            if max_deviation(&current, cover) <= tube {
                return Ok(MedBoostRun {
                    ensemble: current,
                    rounds: t + 1,
                    converged: true,
                });
            }
        }
    }
    let ensemble = WeightedEnsemble::new(members, alphas, sources, Aggregation::WeightedMedian)?;
    let converged = max_deviation(&ensemble, cover) <= tube;
    Ok(MedBoostRun {
        ensemble,
        rounds,
        converged,
    })
}

/// Default round budget `⌈c_T · ln max(n, 2)⌉`.
pub fn default_rounds(cover_size: usize, c_t: f64) -> usize {
    ((c_t * (cover_size.max(2) as f64).ln()).ceil() as usize).max(1)
}
