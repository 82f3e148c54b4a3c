//! Sample compression: ensembles encoded as groups of sample indices and
//! rebuilt by rerunning the robust ERM on each group.

use serde::{Deserialize, Serialize};

use crate::boosting::WEAK_RERM_SCALE;
use crate::error::{Error, Result};
use crate::hypothesis::{Aggregation, Hypothesis, WeightedEnsemble};
use crate::mw::STRONG_RERM_SCALE;
use crate::oracles::HypothesisClass;
use crate::sample::{robust_deviation, LabeledExample, PerturbationMap};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SchemeAggregation {
    Median,
    Average,
}

/// Groups of original sample indices, one per ensemble member, all of the
/// same length. `alphas` is `None` for unweighted medians and averages.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompressionScheme {
    pub eta: f64,
    pub aggregation: SchemeAggregation,
    pub groups: Vec<Vec<usize>>,
    pub alphas: Option<Vec<f64>>,
}

impl CompressionScheme {
    /// Number of sample points kept, `|κ(S)|`.
    pub fn size(&self) -> usize {
        self.groups.iter().map(Vec::len).sum()
    }

    pub fn group_size(&self) -> usize {
        self.groups.first().map_or(0, Vec::len)
    }

    /// Robust ERM tolerance used to rebuild each member.
    pub fn rerm_eta(&self) -> f64 {
        match self.aggregation {
            SchemeAggregation::Median => self.eta * WEAK_RERM_SCALE,
            SchemeAggregation::Average => self.eta * STRONG_RERM_SCALE,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let scheme: CompressionScheme = serde_json::from_str(text)?;
        if scheme.groups.is_empty() {
            return Err(Error::param("groups", "scheme has no groups"));
        }
        if let Some(a) = &scheme.alphas {
            if a.len() != scheme.groups.len() {
                return Err(Error::param("alphas", "one alpha per group"));
            }
        }
        Ok(scheme)
    }
}

/// Encodes an ensemble by its members' source sets, padded to a common size
/// by repeating each group's last index. Equal median weights are dropped.
pub fn compress(ensemble: &WeightedEnsemble, sample: &[LabeledExample], eta: f64) -> Result<CompressionScheme> {
    if let Some(member) = ensemble.sources.iter().position(Vec::is_empty) {
        return Err(Error::NotCompressible { member });
    }
    if ensemble.sources.iter().flatten().any(|&i| i >= sample.len()) {
        return Err(Error::param("sources", "index outside the sample"));
    }
    let d = ensemble.sources.iter().map(Vec::len).max().unwrap_or(0);
    let groups = ensemble
        .sources
        .iter()
        .map(|src| {
            let mut g = src.clone();
            let last = *g.last().expect("nonempty");
            g.resize(d, last);
            g
        })
        .collect();
    let (aggregation, alphas) = match ensemble.aggregation {
        Aggregation::WeightedMedian => {
            let first = ensemble.alphas[0];
            let equal = ensemble.alphas.iter().all(|&a| a == first);
            (SchemeAggregation::Median, (!equal).then(|| ensemble.alphas.clone()))
        }
        Aggregation::Average => (SchemeAggregation::Average, None),
    };
    Ok(CompressionScheme {
        eta,
        aggregation,
        groups,
        alphas,
    })
}

/// The labeled points a scheme keeps, group by group.
pub fn compressed_points(scheme: &CompressionScheme, sample: &[LabeledExample]) -> Result<Vec<Vec<LabeledExample>>> {
    scheme
        .groups
        .iter()
        .map(|g| {
            g.iter()
                .map(|&i| {
                    sample
                        .get(i)
                        .copied()
                        .ok_or_else(|| Error::param("groups", format!("index {i} outside the sample")))
                })
                .collect()
        })
        .collect()
}

/// Rebuilds the ensemble from the kept points alone.
pub fn reconstruct_from_points(
    scheme: &CompressionScheme,
    points: &[Vec<LabeledExample>],
    class: &dyn HypothesisClass,
    u: &PerturbationMap,
) -> Result<WeightedEnsemble> {
    if points.is_empty() {
        return Err(Error::param("groups", "scheme has no groups"));
    }
    let eta = scheme.rerm_eta();
    let mut members = Vec::with_capacity(points.len());
    for (group, pts) in points.iter().enumerate() {
        let h = class.rerm(pts, u, eta).map_err(|e| Error::ReconstructionFailed {
            group,
            source: Box::new(e),
        })?;
        members.push(h);
    }
    let n = members.len();
    let (aggregation, alphas) = match scheme.aggregation {
        SchemeAggregation::Median => (
            Aggregation::WeightedMedian,
            scheme.alphas.clone().unwrap_or_else(|| vec![1.0; n]),
        ),
        SchemeAggregation::Average => (Aggregation::Average, vec![1.0; n]),
    };
    WeightedEnsemble::new(members, alphas, scheme.groups.clone(), aggregation)
}

/// `ρ(κ(S))`.
pub fn reconstruct(
    scheme: &CompressionScheme,
    sample: &[LabeledExample],
    class: &dyn HypothesisClass,
    u: &PerturbationMap,
) -> Result<Hypothesis> {
    let points = compressed_points(scheme, sample)?;
    Ok(reconstruct_from_points(scheme, &points, class, u)?.to_hypothesis())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Approximation {
    /// Every robust deviation is at most η.
    pub uniform: bool,
    /// Fraction of points with robust deviation at least η.
    pub rate: f64,
}

pub fn verify_approximation(
    h: &Hypothesis,
    sample: &[LabeledExample],
    u: &PerturbationMap,
    eta: f64,
) -> Result<Approximation> {
    if sample.is_empty() {
        return Err(Error::EmptySample);
    }
    let mut uniform = true;
    let mut bad = 0usize;
    for ex in sample {
        let dev = robust_deviation(h, ex, u)?;
        uniform &= dev <= eta;
        bad += usize::from(dev >= eta);
    }
    Ok(Approximation {
        uniform,
        rate: bad as f64 / sample.len() as f64,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    Realizable,
    Agnostic,
    Bernstein,
}

/// Error gap of a size-`k` compression scheme on `m` points with confidence
/// `1 − δ`. With `L = k ln m + ln(1/δ)`: realizable `c·L/m`, agnostic
/// `c·√(L/m)`, Bernstein `c·(√(emp·L/m) + L/m)`. The denominator is `m`.
pub fn generalization_bound(kind: BoundKind, k: usize, m: usize, delta: f64, empirical: f64, c: f64) -> Result<f64> {
    if k == 0 || 2 * k > m {
        return Err(Error::param("k", format!("need 1 <= k <= m/2, got k = {k}, m = {m}")));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::param("delta", format!("{delta} not in (0, 1)")));
    }
    if !(0.0..=1.0).contains(&empirical) {
        return Err(Error::param("empirical", format!("{empirical} not in [0, 1]")));
    }
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::param("c", "must be positive"));
    }
    let m = m as f64;
    let l = (k as f64 * m.ln() + (1.0 / delta).ln()) / m;
    Ok(match kind {
        BoundKind::Realizable => c * l,
        BoundKind::Agnostic => c * l.sqrt(),
        BoundKind::Bernstein => c * ((empirical * l).sqrt() + l),
    })
}
