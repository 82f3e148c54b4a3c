//! Shrinks a median ensemble to `k` members drawn from its normalized
//! coefficients, redrawing until a strict majority of the draw stays inside
//! the η-tube at every check point.

use rand::distributions::{Distribution, WeightedIndex};
use rand::Rng;

use crate::error::{Error, Result};
use crate::hypothesis::{Aggregation, WeightedEnsemble};
use crate::sample::InflatedExample;

pub const DEFAULT_MAX_ITERS: usize = 200;

#[derive(Clone, Debug)]
pub struct Sparsified {
    /// Drawn members as an unweighted median ensemble.
    pub ensemble: WeightedEnsemble,
    /// Member index in the input ensemble for each draw.
    pub picks: Vec<usize>,
    /// 1-based index of the accepted draw.
    pub iterations: usize,
}

/// Categorical draw of `k` member indices with probabilities `α_t / Σα`.
pub fn draw_members<R: Rng + ?Sized>(alphas: &[f64], k: usize, rng: &mut R) -> Result<Vec<usize>> {
    let dist = WeightedIndex::new(alphas).map_err(|_| Error::DegenerateWeights)?;
    Ok((0..k).map(|_| dist.sample(rng)).collect())
}

/// True when every point sees strictly fewer than `k/2` picked members
/// with deviation above η.
pub fn majority_certificate(bad: &[Vec<bool>], picks: &[usize]) -> bool {
    violations(bad, picks) == 0
}

// Number of points where at least half of the picks are outside the tube.
fn violations(bad: &[Vec<bool>], picks: &[usize]) -> usize {
    let n = bad.first().map_or(0, Vec::len);
    (0..n)
        .filter(|&i| 2 * picks.iter().filter(|&&t| bad[t][i]).count() >= picks.len())
        .count()
}

pub fn sparsify<R: Rng + ?Sized>(
    ensemble: &WeightedEnsemble,
    points: &[InflatedExample],
    eta: f64,
    k: usize,
    max_iters: usize,
    rng: &mut R,
) -> Result<Sparsified> {
    if k == 0 {
        return Err(Error::param("k", "must be at least 1"));
    }
    if max_iters == 0 {
        return Err(Error::param("max_iters", "must be at least 1"));
    }
    let bad: Vec<Vec<bool>> = ensemble
        .members
        .iter()
        .map(|h| points.iter().map(|p| (h.eval(p.z) - p.y).abs() > eta).collect())
        .collect();
    let mut best = usize::MAX;
    for iter in 1..=max_iters {
        let picks = draw_members(&ensemble.alphas, k, rng)?;
        let v = violations(&bad, &picks);
        if v == 0 {
            let members = picks.iter().map(|&t| ensemble.members[t].clone()).collect();
            let sources = picks.iter().map(|&t| ensemble.sources[t].clone()).collect();
            let ensemble = WeightedEnsemble::new(members, vec![1.0; k], sources, Aggregation::WeightedMedian)?;
            return Ok(Sparsified {
                ensemble,
                picks,
                iterations: iter,
            });
        }
        best = best.min(v);
    }
    Err(Error::SparsifyFailed { best_violations: best })
}

/// `⌈c·f·ln²(max(f/η, 2))⌉`, rounded up to the next odd number.
pub fn default_k(fat_star: usize, eta: f64, c: f64) -> Result<usize> {
    if fat_star == 0 {
        return Err(Error::param("fat_star", "must be at least 1"));
    }
    if !(eta > 0.0 && eta < 1.0) {
        return Err(Error::param("eta", format!("{eta} not in (0, 1)")));
    }
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::param("c", "must be positive"));
    }
    let f = fat_star as f64;
    let ln = (f / eta).max(2.0).ln();
    let k = ((c * f * ln * ln).ceil() as usize).max(1);
    Ok(if k.is_multiple_of(2) { k + 1 } else { k })
}
