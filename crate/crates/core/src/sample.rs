//! Instances, labeled samples, perturbation maps and robust losses.
//!
//! A perturbation map assigns every instance a finite, nonempty,
//! duplicate-free list of instances that contains the instance itself. All
//! suprema over perturbation sets are therefore exact maxima.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypothesis::Hypothesis;

/// Index into a finite instance domain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Instance(pub usize);

impl fmt::Display for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0)
    }
}

/// Optional feature vectors for a finite domain. Structured classes may read
/// them; the learners only ever use instance ids.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Domain {
    pub size: usize,
    pub features: Option<Vec<Vec<f64>>>,
}

impl Domain {
    pub fn new(size: usize) -> Self {
        Domain { size, features: None }
    }

    pub fn with_features(features: Vec<Vec<f64>>) -> Result<Self> {
        if let Some(first) = features.first() {
            let dim = first.len();
            if features.iter().any(|f| f.len() != dim) {
                return Err(Error::param("features", "feature vectors differ in dimension"));
            }
        }
        Ok(Domain {
            size: features.len(),
            features: Some(features),
        })
    }

    pub fn instances(&self) -> impl Iterator<Item = Instance> {
        (0..self.size).map(Instance)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LabeledExample {
    pub x: Instance,
    pub y: f64,
}

impl LabeledExample {
    pub fn new(x: usize, y: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&y) {
            return Err(Error::InvalidLabel(y));
        }
        Ok(LabeledExample { x: Instance(x), y })
    }
}

/// A perturbed point of the inflated sample, labeled by the earliest sample
/// point whose perturbation set contains it.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct InflatedExample {
    pub z: Instance,
    pub y: f64,
    pub origin: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PerturbationMap {
    table: BTreeMap<Instance, Vec<Instance>>,
}

impl PerturbationMap {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds `U(x)`. The list must contain `x`, be nonempty and hold no
    /// duplicates. It is stored sorted by instance id.
    pub fn insert(&mut self, x: Instance, mut set: Vec<Instance>) -> Result<()> {
        if !set.contains(&x) {
            return Err(Error::InvalidPerturbation {
                instance: x,
                reason: "perturbation set must contain the instance itself".into(),
            });
        }
        set.sort_unstable();
        let before = set.len();
        set.dedup();
        if set.len() != before {
            return Err(Error::InvalidPerturbation {
                instance: x,
                reason: "duplicate entries".into(),
            });
        }
        self.table.insert(x, set);
        Ok(())
    }

    pub fn from_table(table: impl IntoIterator<Item = (Instance, Vec<Instance>)>) -> Result<Self> {
        let mut map = Self::new();
        for (x, set) in table {
            map.insert(x, set)?;
        }
        Ok(map)
    }

    pub fn identity(domain_size: usize) -> Self {
        PerturbationMap {
            table: (0..domain_size).map(|i| (Instance(i), vec![Instance(i)])).collect(),
        }
    }

    /// Ball of integer radius `radius` on the 1-D grid `0..domain_size`.
    pub fn grid_ball(domain_size: usize, radius: usize) -> Self {
        let table = (0..domain_size)
            .map(|i| {
                let lo = i.saturating_sub(radius);
                let hi = (i + radius).min(domain_size.saturating_sub(1));
                (Instance(i), (lo..=hi).map(Instance).collect())
            })
            .collect();
        PerturbationMap { table }
    }

    /// Each instance plus `k` distinct uniformly chosen other instances.
    pub fn random_k_neighbors<R: Rng + ?Sized>(domain_size: usize, k: usize, rng: &mut R) -> Self {
        let mut table = BTreeMap::new();
        for i in 0..domain_size {
            let mut others: Vec<usize> = (0..domain_size).filter(|&j| j != i).collect();
            others.shuffle(rng);
            let mut set: Vec<Instance> = others.into_iter().take(k).map(Instance).collect();
            set.push(Instance(i));
            set.sort_unstable();
            table.insert(Instance(i), set);
        }
        PerturbationMap { table }
    }

    pub fn get(&self, x: Instance) -> Result<&[Instance]> {
        self.table
            .get(&x)
            .map(Vec::as_slice)
            .ok_or(Error::MissingPerturbation(x))
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Instance, &[Instance])> {
        self.table.iter().map(|(x, s)| (*x, s.as_slice()))
    }

    pub fn max_set_size(&self) -> usize {
        self.table.values().map(Vec::len).max().unwrap_or(0)
    }
}

/// Robust loss flavours: the η-ball indicator or the ℓp power loss.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LossMode {
    EtaBall(f64),
    Lp(f64),
}

impl LossMode {
    fn validate(self) -> Result<()> {
        match self {
            LossMode::EtaBall(eta) if !(eta > 0.0 && eta <= 1.0) => {
                Err(Error::param("eta", format!("{eta} not in (0, 1]")))
            }
            LossMode::Lp(p) if !(p >= 1.0 && p.is_finite()) => {
                Err(Error::param("p", format!("{p} must be finite and >= 1")))
            }
            _ => Ok(()),
        }
    }
}

/// Inflates a sample with every perturbed point reachable from it.
///
/// Each distinct point keeps the label of the lowest-index sample point whose
/// perturbation set contains it. Output is ordered by origin, then instance.
pub fn inflate(sample: &[LabeledExample], u: &PerturbationMap) -> Result<Vec<InflatedExample>> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for (i, ex) in sample.iter().enumerate() {
        // perturbation lists are stored sorted, so per-origin order is by id
        for &z in u.get(ex.x)? {
            if seen.insert(z) {
                out.push(InflatedExample { z, y: ex.y, origin: i });
            }
        }
    }
    Ok(out)
}

/// Every `(z, y_i, i)` with `z ∈ U(x_i)`, without merging across origins.
/// This is the set on which the robust sample condition is stated.
pub fn expand_pairs(sample: &[LabeledExample], u: &PerturbationMap) -> Result<Vec<InflatedExample>> {
    let mut out = Vec::new();
    for (i, ex) in sample.iter().enumerate() {
        out.extend(u.get(ex.x)?.iter().map(|&z| InflatedExample { z, y: ex.y, origin: i }));
    }
    Ok(out)
}

/// `max_{z ∈ U(x)} |h(z) − y|`.
pub fn robust_deviation(h: &Hypothesis, ex: &LabeledExample, u: &PerturbationMap) -> Result<f64> {
    Ok(u.get(ex.x)?
        .iter()
        .map(|&z| (h.eval(z) - ex.y).abs())
        .fold(0.0, f64::max))
}

pub fn robust_loss(h: &Hypothesis, ex: &LabeledExample, u: &PerturbationMap, mode: LossMode) -> Result<f64> {
    mode.validate()?;
    let dev = robust_deviation(h, ex, u)?;
    Ok(match mode {
        LossMode::EtaBall(eta) => {
            if dev >= eta {
                1.0
            } else {
                0.0
            }
        }
        LossMode::Lp(p) => dev.powf(p),
    })
}

pub fn empirical_error(h: &Hypothesis, sample: &[LabeledExample], u: &PerturbationMap, mode: LossMode) -> Result<f64> {
    if sample.is_empty() {
        return Err(Error::EmptySample);
    }
    let mut total = 0.0;
    for ex in sample {
        total += robust_loss(h, ex, u, mode)?;
    }
    Ok(total / sample.len() as f64)
}
