use rand::seq::index;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypothesis::Hypothesis;
use crate::oracles::HypothesisClass;
use crate::sample::{InflatedExample, LabeledExample, PerturbationMap};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PoolMode {
    /// Every size-`d` subset of the sample.
    Enumerate,
    /// `N` seeded random subsets.
    Sample(usize),
    /// Enumerate when the subset count is under the cap, else sample `N`.
    Auto(usize),
}

/// Subset size, pool mode, constants and scale multipliers shared by the
/// learners. `d = None` picks the size from the class's fat-shattering
/// dimension.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PoolConfig {
    pub d: Option<usize>,
    pub mode: PoolMode,
    pub c_d: f64,
    pub c_t: f64,
    pub c_k: f64,
    pub enumerate_cap: usize,
    /// Robust ERM scale for the proper learner's pool.
    pub proper_rerm_scale: f64,
    /// Fat-shattering scale for the proper learner's subset size.
    pub proper_fat_scale: f64,
    pub improper_rerm_scale: f64,
    pub improper_fat_scale: f64,
}

impl Default for PoolConfig {
    fn default() -> Self {
        PoolConfig {
            d: None,
            mode: PoolMode::Auto(200),
            c_d: 1.0,
            c_t: 4.0,
            c_k: 1.0,
            enumerate_cap: 100_000,
            proper_rerm_scale: 1.0 / 4.0,
            proper_fat_scale: 1.0 / 32.0,
            improper_rerm_scale: 1.0 / 8.0,
            improper_fat_scale: 1.0 / 64.0,
        }
    }
}

impl PoolConfig {
    pub fn validate(&self) -> Result<()> {
        if self.d == Some(0) {
            return Err(Error::param("d", "must be at least 1"));
        }
        if matches!(self.mode, PoolMode::Sample(0) | PoolMode::Auto(0)) {
            return Err(Error::param("mode", "sample count must be at least 1"));
        }
        for (name, v) in [
            ("c_d", self.c_d),
            ("c_t", self.c_t),
            ("c_k", self.c_k),
            ("proper_rerm_scale", self.proper_rerm_scale),
            ("proper_fat_scale", self.proper_fat_scale),
            ("improper_rerm_scale", self.improper_rerm_scale),
            ("improper_fat_scale", self.improper_fat_scale),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::param(name, "must be positive"));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct Pool {
    pub members: Vec<Hypothesis>,
    /// Sample subset each member was fit on.
    pub subsets: Vec<Vec<usize>>,
    /// Infeasible subsets.
    pub skipped: usize,
}

impl Pool {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// `C(n, k)`, or `None` once it passes `cap`.
pub fn binomial_capped(n: usize, k: usize, cap: usize) -> Option<usize> {
    let k = k.min(n - k.min(n));
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > cap as u128 {
            return None;
        }
    }
    Some(acc as usize)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let Some(i) = (0..k).rev().find(|&i| idx[i] < n - k + i) else {
            return out;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// One robust ERM call per chosen size-`d` subset; infeasible subsets are
/// skipped and counted, and repeated hypotheses are kept once.
#[allow(clippy::too_many_arguments)]
pub fn build_pool<R: Rng + ?Sized>(
    sample: &[LabeledExample],
    u: &PerturbationMap,
    class: &dyn HypothesisClass,
    eta: f64,
    d: usize,
    mode: PoolMode,
    enumerate_cap: usize,
    rng: &mut R,
) -> Result<Pool> {
    let m = sample.len();
    if m == 0 {
        return Err(Error::EmptySample);
    }
    if d == 0 {
        return Err(Error::param("d", "must be at least 1"));
    }
    let subsets: Vec<Vec<usize>> = if d >= m {
        vec![(0..m).collect()]
    } else {
        let count = binomial_capped(m, d, enumerate_cap);
        let n = match (mode, count) {
            (PoolMode::Enumerate, None) => {
                return Err(Error::CapExceeded {
                    what: "pool subset count",
                    size: binomial_capped(m, d, usize::MAX).unwrap_or(usize::MAX),
                    cap: enumerate_cap,
                })
            }
            (PoolMode::Enumerate | PoolMode::Auto(_), Some(_)) => None,
            (PoolMode::Sample(n) | PoolMode::Auto(n), _) => Some(n),
        };
        match n {
            None => combinations(m, d),
            Some(n) => {
                let mut seen = std::collections::BTreeSet::new();
                let mut out = Vec::new();
                for _ in 0..n {
                    let mut s = index::sample(rng, m, d).into_vec();
                    s.sort_unstable();
                    if seen.insert(s.clone()) {
                        out.push(s);
                    }
                }
                out
            }
        }
    };

    let mut pool = Pool {
        members: Vec::new(),
        subsets: Vec::new(),
        skipped: 0,
    };
    for s in subsets {
        let pts: Vec<LabeledExample> = s.iter().map(|&i| sample[i]).collect();
        match class.rerm(&pts, u, eta) {
            Ok(h) => {
                if !pool.members.contains(&h) {
                    pool.members.push(h);
                    pool.subsets.push(s);
                }
            }
            Err(Error::Infeasible { .. }) => pool.skipped += 1,
            Err(e) => return Err(e),
        }
    }
    if pool.is_empty() {
        return Err(Error::EmptyPool { skipped: pool.skipped });
    }
    Ok(pool)
}

/// Rows are inflated points, columns pool members, entries `|h(z) − y|`.
#[derive(Clone, Debug, PartialEq)]
pub struct DualPointMatrix {
    pub rows: Vec<Vec<f64>>,
}

impl DualPointMatrix {
    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }
}

pub fn dual_embed(pool: &[Hypothesis], inflated: &[InflatedExample]) -> Result<DualPointMatrix> {
    if pool.is_empty() {
        return Err(Error::EmptyPool { skipped: 0 });
    }
    let rows = inflated
        .iter()
        .map(|p| pool.iter().map(|h| (h.eval(p.z) - p.y).abs()).collect())
        .collect();
    Ok(DualPointMatrix { rows })
}
