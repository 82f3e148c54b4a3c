//! Multiplicative weights with strong per-round learners and an averaged
//! output. For classes closed under averaging the output is a class member.
//!
//! Note the update direction: points a learner already handles (deviation at
//! most η/2) are the ones multiplied by `e^{−ξ}`.

use rand::Rng;

use crate::boosting::draw_origins;
use crate::error::{Error, Result};
use crate::hypothesis::{Aggregation, Hypothesis, WeightedEnsemble};
use crate::oracles::{HypothesisClass, PointDistribution};
use crate::sample::{InflatedExample, LabeledExample, PerturbationMap};

/// Robust ERM scale for strong learners, relative to η.
pub const STRONG_RERM_SCALE: f64 = 1.0 / 4.0;
/// Tube of the strong-learner and cover tests, relative to η.
pub const STRONG_CHECK_SCALE: f64 = 1.0 / 2.0;

pub fn mw_update(
    p: &PointDistribution,
    h: &Hypothesis,
    cover: &[InflatedExample],
    eta: f64,
    xi: f64,
) -> Result<PointDistribution> {
    if !(xi > 0.0) {
        return Err(Error::param("xi", "must be positive"));
    }
    let down = (-xi).exp();
    let scores = p
        .weights()
        .iter()
        .zip(cover)
        .map(|(w, c)| {
            if (h.eval(c.z) - c.y).abs() <= eta * STRONG_CHECK_SCALE {
                w * down
            } else {
                *w
            }
        })
        .collect();
    PointDistribution::normalized(scores)
}

/// `P[|h(z) − y| ≥ η/2]` under `p`.
pub fn strong_error(h: &Hypothesis, p: &PointDistribution, cover: &[InflatedExample], eta: f64) -> f64 {
    p.mass_where(|i| (h.eval(cover[i].z) - cover[i].y).abs() >= eta * STRONG_CHECK_SCALE)
}

/// Finds a learner with `P[|h(z) − y| ≥ η/2] ≤ ε` by drawing `d` cover points,
/// mapping them to their originals and running an η/4-robust ERM there.
#[allow(clippy::too_many_arguments)]
pub fn find_strong_learner<R: Rng + ?Sized>(
    p: &PointDistribution,
    cover: &[InflatedExample],
    sample: &[LabeledExample],
    u: &PerturbationMap,
    eta: f64,
    epsilon: f64,
    class: &dyn HypothesisClass,
    d: usize,
    retries: usize,
    rng: &mut R,
) -> Result<(Hypothesis, Vec<usize>)> {
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(Error::param("epsilon", format!("{epsilon} not in (0, 1]")));
    }
    if d == 0 {
        return Err(Error::param("d", "must be at least 1"));
    }
    if cover.is_empty() || cover.len() != p.len() {
        return Err(Error::param("cover", "nonempty, one weight per cover point"));
    }
    let mut best_mass = 1.0f64;
    for _ in 0..retries.max(1) {
        let origins = draw_origins(p, cover, d, rng)?;
        let subset: Vec<LabeledExample> = origins.iter().map(|&i| sample[i]).collect();
        let h = match class.rerm(&subset, u, eta * STRONG_RERM_SCALE) {
            Ok(h) => h,
            Err(Error::Infeasible { .. }) => continue,
            Err(e) => return Err(e),
        };
        let mass = strong_error(&h, p, cover, eta);
        best_mass = best_mass.min(mass);
        if mass <= epsilon {
            return Ok((h, origins));
        }
    }
    Err(Error::StrongLearnerNotFound { best_mass })
}

#[derive(Clone, Debug, PartialEq)]
pub struct MwConfig {
    pub d: usize,
    pub retries: usize,
    pub xi: f64,
    /// Stop as soon as the running average meets the cover condition.
    pub early_stop: bool,
    /// Rounds are doubled until the cover condition holds or this many
    /// rounds have run.
    pub max_rounds: usize,
}

impl Default for MwConfig {
    fn default() -> Self {
        MwConfig {
            d: 1,
            retries: 50,
            xi: 0.5,
            early_stop: true,
            max_rounds: 256,
        }
    }
}

#[derive(Clone, Debug)]
pub struct MwRun {
    pub ensemble: WeightedEnsemble,
    pub rounds: usize,
    /// Fraction of cover points with `|avg − y| ≥ η/2`.
    pub cover_error: f64,
}

/// Fraction of `points` where the ensemble deviates by at least `tube`.
pub fn tube_error_rate(ensemble: &WeightedEnsemble, points: &[InflatedExample], tube: f64) -> f64 {
    if points.is_empty() {
        return 0.0;
    }
    let bad = points
        .iter()
        .filter(|p| (ensemble.eval(p.z) - p.y).abs() >= tube)
        .count();
    bad as f64 / points.len() as f64
}

/// Runs up to `rounds` rounds, then keeps doubling the round count (continuing
/// from the current distribution) until at most an ε fraction of the cover
/// sees `|avg − y| ≥ η/2`, or `max_rounds` is reached.
#[allow(clippy::too_many_arguments)]
pub fn mw_boost<R: Rng + ?Sized>(
    cover: &[InflatedExample],
    sample: &[LabeledExample],
    u: &PerturbationMap,
    eta: f64,
    epsilon: f64,
    rounds: usize,
    class: &dyn HypothesisClass,
    config: &MwConfig,
    rng: &mut R,
) -> Result<MwRun> {
    if rounds == 0 {
        return Err(Error::param("rounds", "must be at least 1"));
    }
    if cover.is_empty() {
        return Err(Error::param("cover", "must be nonempty"));
    }
    let tube = eta * STRONG_CHECK_SCALE;
    let mut p = PointDistribution::uniform(cover.len());
    let mut members = Vec::new();
    let mut sources = Vec::new();
    let mut target = rounds;
    loop {
        while members.len() < target {
            let (h, src) =
                find_strong_learner(&p, cover, sample, u, eta, epsilon, class, config.d, config.retries, rng)?;
            p = mw_update(&p, &h, cover, eta, config.xi)?;
            members.push(h);
            sources.push(src);
            if config.early_stop || members.len() == target {
                let ensemble = average_of(&members, &sources)?;
                let cover_error = tube_error_rate(&ensemble, cover, tube);
                if cover_error <= epsilon {
                    return Ok(MwRun {
                        rounds: members.len(),
                        ensemble,
                        cover_error,
                    });
                }
            }
        }
        let ensemble = average_of(&members, &sources)?;
        let cover_error = tube_error_rate(&ensemble, cover, tube);
        if cover_error <= epsilon {
            return Ok(MwRun {
                rounds: members.len(),
                ensemble,
                cover_error,
            });
        }
        if target >= config.max_rounds {
            return Err(Error::AssertionFailed(format!(
                "average misses the η/2 tube on {cover_error:.4} of the cover after {} rounds (ε = {epsilon})",
                members.len()
            )));
        }
        target = (target * 2).min(config.max_rounds);
    }
}

fn average_of(members: &[Hypothesis], sources: &[Vec<usize>]) -> Result<WeightedEnsemble> {
    WeightedEnsemble::new(
        members.to_vec(),
        vec![1.0; members.len()],
        sources.to_vec(),
        Aggregation::Average,
    )
}
