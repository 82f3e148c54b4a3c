//! Robust empirical risk minimizers and the weak-learner predicate.
//!
//! An η-robust ERM returns a class member whose worst-case deviation
//! `max_{z ∈ U(x)} |h(z) − y|` is at most η on every given point. Two oracles
//! are provided: exhaustive scan over a finite class matrix, and the closed
//! form for the class of all constants in `[0, 1]`.

use std::fmt;
use std::sync::Arc;

use crate::dimensions::{dual_class, fat_shattering, ShatterCaps};
use crate::error::{Error, Result};
use crate::hypothesis::Hypothesis;
use crate::sample::{InflatedExample, Instance, LabeledExample, PerturbationMap};

/// A finite hypothesis class stored as a matrix: row `h`, column `x` holds `h(x)`.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteClass {
    rows: Vec<Arc<[f64]>>,
    labels: Vec<String>,
    domain_size: usize,
}

impl FiniteClass {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::param("class_matrix", "class needs at least one row"));
        }
        let domain_size = rows[0].len();
        Self::with_domain(rows, domain_size)
    }

    /// Zero-row class over `domain_size` points. Only dimension computations
    /// accept it; every oracle call on it is infeasible.
    pub fn empty(domain_size: usize) -> Self {
        FiniteClass {
            rows: Vec::new(),
            labels: Vec::new(),
            domain_size,
        }
    }

    fn with_domain(rows: Vec<Vec<f64>>, domain_size: usize) -> Result<Self> {
        for (i, row) in rows.iter().enumerate() {
            if row.len() != domain_size {
                return Err(Error::param(
                    "class_matrix",
                    format!("row {i} has {} entries, expected {domain_size}", row.len()),
                ));
            }
            if let Some(v) = row.iter().find(|v| !(0.0..=1.0).contains(*v)) {
                return Err(Error::param(
                    "class_matrix",
                    format!("row {i} has entry {v} outside [0, 1]"),
                ));
            }
        }
        let labels = (0..rows.len()).map(|i| format!("h{i}")).collect();
        Ok(FiniteClass {
            rows: rows.into_iter().map(Arc::from).collect(),
            labels,
            domain_size,
        })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.rows.len() {
            return Err(Error::param("labels", "one label per row"));
        }
        self.labels = labels;
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn domain_size(&self) -> usize {
        self.domain_size
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn value(&self, row: usize, x: usize) -> f64 {
        self.rows[row][x]
    }

    pub fn row_values(&self, row: usize) -> &[f64] {
        &self.rows[row]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.rows.iter().map(|r| &r[..])
    }

    pub fn hypothesis(&self, row: usize) -> Hypothesis {
        Hypothesis::Row {
            index: row,
            values: Arc::clone(&self.rows[row]),
        }
    }

    /// Matrix transpose: one row per domain point, one column per hypothesis.
    pub fn transpose(&self) -> FiniteClass {
        let rows: Vec<Vec<f64>> = (0..self.domain_size)
            .map(|x| self.rows.iter().map(|r| r[x]).collect())
            .collect();
        FiniteClass {
            labels: (0..self.domain_size).map(|x| format!("g{x}")).collect(),
            rows: rows.into_iter().map(Arc::from).collect(),
            domain_size: self.rows.len(),
        }
    }
}

/// Worst-case deviation of a raw value row on `ex`.
fn row_deviation(values: &[f64], ex: &LabeledExample, u: &PerturbationMap) -> Result<f64> {
    Ok(u.get(ex.x)?
        .iter()
        .map(|z| (values[z.0] - ex.y).abs())
        .fold(0.0, f64::max))
}

fn check_eta(eta: f64) -> Result<()> {
    if eta > 0.0 && eta <= 1.0 {
        Ok(())
    } else {
        Err(Error::param("eta", format!("{eta} not in (0, 1]")))
    }
}

/// Lowest-index row of `class` that robustly fits every point within `eta`.
pub fn rerm_finite(
    class: &FiniteClass,
    subset: &[LabeledExample],
    u: &PerturbationMap,
    eta: f64,
) -> Result<Hypothesis> {
    check_eta(eta)?;
    for (i, row) in class.rows.iter().enumerate() {
        let mut worst = 0.0f64;
        for ex in subset {
            worst = worst.max(row_deviation(row, ex, u)?);
            if worst > eta {
                break;
            }
        }
        if worst <= eta {
            return Ok(class.hypothesis(i));
        }
    }
    // rows were cut short at the first violation; recompute the exact minimum
    let min_deviation = class
        .rows
        .iter()
        .map(|row| {
            subset
                .iter()
                .map(|ex| row_deviation(row, ex, u))
                .try_fold(0.0f64, |acc, d| d.map(|d| acc.max(d)))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(f64::INFINITY, f64::min);
    Err(Error::Infeasible {
        min_deviation,
        gap: min_deviation - eta,
    })
}

/// Robust ERM over the constants `c ∈ [0, 1]`: the feasible set is
/// `∩ [y − η, y + η] ∩ [0, 1]` and the midpoint is returned.
///
/// Perturbations do not matter for constants, but every point still needs a
/// perturbation entry.
pub fn rerm_constant(subset: &[LabeledExample], u: &PerturbationMap, eta: f64) -> Result<Hypothesis> {
    check_eta(eta)?;
    let mut lo = 0.0f64;
    let mut hi = 1.0f64;
    let mut min_y = f64::INFINITY;
    let mut max_y = f64::NEG_INFINITY;
    for ex in subset {
        u.get(ex.x)?;
        lo = lo.max(ex.y - eta);
        hi = hi.min(ex.y + eta);
        min_y = min_y.min(ex.y);
        max_y = max_y.max(ex.y);
    }
    if lo > hi {
        return Err(Error::Infeasible {
            min_deviation: (max_y - min_y) / 2.0,
            gap: lo - hi,
        });
    }
    Ok(Hypothesis::constant((lo + hi) / 2.0))
}

/// A probability vector over a finite point list.
#[derive(Clone, Debug, PartialEq)]
pub struct PointDistribution {
    weights: Vec<f64>,
}

impl PointDistribution {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.iter().any(|w| !(*w >= 0.0) || !w.is_finite()) {
            return Err(Error::param("weights", "weights must be finite and nonnegative"));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::param("weights", format!("weights sum to {total}, expected 1")));
        }
        Ok(PointDistribution { weights })
    }

    pub fn uniform(n: usize) -> Self {
        PointDistribution {
            weights: vec![1.0 / n as f64; n],
        }
    }

    /// Normalizes nonnegative scores into a distribution.
    pub fn normalized(scores: Vec<f64>) -> Result<Self> {
        let total: f64 = scores.iter().sum();
        if !(total > 0.0) || !total.is_finite() {
            return Err(Error::DegenerateWeights);
        }
        Ok(PointDistribution {
            weights: scores.into_iter().map(|s| s / total).collect(),
        })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Total mass of the indices where `pred` holds.
    pub fn mass_where(&self, mut pred: impl FnMut(usize) -> bool) -> f64 {
        self.weights
            .iter()
            .enumerate()
            .filter(|(i, _)| pred(*i))
            .map(|(_, w)| w)
            .sum()
    }
}

/// Slack for the strict weak-learner inequality, so that e.g. a mass of 1/3
/// does not pass `< 1/2 − 1/6` through rounding.
const STRICT_SLACK: f64 = 1e-12;

/// Mass under `p` of points where `h` deviates from the label by more than `eta`.
pub fn violating_mass(h: &Hypothesis, p: &PointDistribution, points: &[InflatedExample], eta: f64) -> f64 {
    p.mass_where(|i| (h.eval(points[i].z) - points[i].y).abs() > eta)
}

/// `(η, β)`-weak learner test: violating mass strictly below `1/2 − β`.
pub fn weak_learner_check(
    h: &Hypothesis,
    p: &PointDistribution,
    points: &[InflatedExample],
    eta: f64,
    beta: f64,
) -> bool {
    debug_assert_eq!(p.len(), points.len());
    violating_mass(h, p, points, eta) < 0.5 - beta - STRICT_SLACK
}

/// Largest subset of a sample that one class member fits within η at every
/// perturbation, the same test the robust ERM oracle applies.
#[derive(Clone, Debug, PartialEq)]
pub struct FitSubset {
    pub member: Hypothesis,
    pub indices: Vec<usize>,
}

/// A hypothesis class the learners can query.
pub trait HypothesisClass: fmt::Debug + Send + Sync {
    fn rerm(&self, subset: &[LabeledExample], u: &PerturbationMap, eta: f64) -> Result<Hypothesis>;

    /// Maximal subset on which a single member has robust deviation at most
    /// η. `None` when no member fits any point.
    fn max_fit_subset(&self, sample: &[LabeledExample], u: &PerturbationMap, eta: f64) -> Result<Option<FitSubset>>;

    /// Fat-shattering dimension at `gamma`, or an upper bound when the exact
    /// search is over its caps.
    fn fat(&self, gamma: f64) -> usize;

    /// Dual fat-shattering dimension at `gamma`, same convention as [`fat`](Self::fat).
    fn dual_fat(&self, gamma: f64) -> usize;

    /// A single class member equal to the average of `members`, when one exists.
    fn fold_average(&self, _members: &[Hypothesis]) -> Option<Hypothesis> {
        None
    }
}

fn log2_floor(n: usize) -> usize {
    if n <= 1 {
        0
    } else {
        (usize::BITS - 1 - n.leading_zeros()) as usize
    }
}

impl HypothesisClass for FiniteClass {
    fn rerm(&self, subset: &[LabeledExample], u: &PerturbationMap, eta: f64) -> Result<Hypothesis> {
        rerm_finite(self, subset, u, eta)
    }

    fn max_fit_subset(&self, sample: &[LabeledExample], u: &PerturbationMap, eta: f64) -> Result<Option<FitSubset>> {
        check_eta(eta)?;
        let mut best: Option<(usize, Vec<usize>)> = None;
        for (r, row) in self.rows.iter().enumerate() {
            let mut fit = Vec::new();
            for (i, ex) in sample.iter().enumerate() {
                if row_deviation(row, ex, u)? <= eta {
                    fit.push(i);
                }
            }
            if !fit.is_empty() && best.as_ref().is_none_or(|(_, b)| fit.len() > b.len()) {
                best = Some((r, fit));
            }
        }
        Ok(best.map(|(r, indices)| FitSubset {
            member: self.hypothesis(r),
            indices,
        }))
    }

    fn fat(&self, gamma: f64) -> usize {
        match fat_shattering(self, gamma, ShatterCaps::default()) {
            Ok(v) => v,
            Err(_) => log2_floor(self.len()).min(self.domain_size),
        }
    }

    fn dual_fat(&self, gamma: f64) -> usize {
        match fat_shattering(&dual_class(self), gamma, ShatterCaps::default()) {
            Ok(v) => v,
            Err(_) => log2_floor(self.domain_size).min(self.len()),
        }
    }

    fn fold_average(&self, members: &[Hypothesis]) -> Option<Hypothesis> {
        if members.is_empty() {
            return None;
        }
        let avg: Vec<f64> = (0..self.domain_size)
            .map(|x| members.iter().map(|h| h.eval(Instance(x))).sum::<f64>() / members.len() as f64)
            .collect();
        self.rows
            .iter()
            .position(|row| row.iter().zip(&avg).all(|(a, b)| (a - b).abs() <= 1e-12))
            .map(|r| self.hypothesis(r))
    }
}

/// All constant functions `x ↦ c`, `c ∈ [0, 1]`. Convex, so averages of
/// members are members.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ConstantClass;

fn constant_value(h: &Hypothesis) -> Option<f64> {
    match h {
        Hypothesis::Constant { value } => Some(*value),
        Hypothesis::Average { members } => {
            let vals: Option<Vec<f64>> = members.iter().map(constant_value).collect();
            vals.map(|v| v.iter().sum::<f64>() / v.len() as f64)
        }
        _ => None,
    }
}

impl HypothesisClass for ConstantClass {
    fn rerm(&self, subset: &[LabeledExample], u: &PerturbationMap, eta: f64) -> Result<Hypothesis> {
        rerm_constant(subset, u, eta)
    }

    fn max_fit_subset(&self, sample: &[LabeledExample], u: &PerturbationMap, eta: f64) -> Result<Option<FitSubset>> {
        check_eta(eta)?;
        for ex in sample {
            u.get(ex.x)?;
        }
        if sample.is_empty() {
            return Ok(None);
        }
        // a constant c fits y iff |c − y| ≤ η; the best window of labels has
        // spread at most 2η
        let mut order: Vec<usize> = (0..sample.len()).collect();
        order.sort_by(|&a, &b| sample[a].y.total_cmp(&sample[b].y).then(a.cmp(&b)));
        let ys: Vec<f64> = order.iter().map(|&i| sample[i].y).collect();
        let (mut best_lo, mut best_len) = (0, 0);
        let mut hi = 0;
        for lo in 0..ys.len() {
            hi = hi.max(lo);
            while hi + 1 < ys.len() && ys[hi + 1] - ys[lo] <= 2.0 * eta {
                hi += 1;
            }
            if hi - lo + 1 > best_len {
                best_len = hi - lo + 1;
                best_lo = lo;
            }
        }
        let c = (ys[best_lo] + ys[best_lo + best_len - 1]) / 2.0;
        let member = Hypothesis::constant(c);
        let indices: Vec<usize> = (0..sample.len()).filter(|&i| (c - sample[i].y).abs() <= eta).collect();
        Ok(Some(FitSubset { member, indices }))
    }

    fn fat(&self, gamma: f64) -> usize {
        // one point is shattered by constants r ± γ as long as 2γ ≤ 1
        usize::from(gamma > 0.0 && 2.0 * gamma <= 1.0)
    }

    fn dual_fat(&self, _gamma: f64) -> usize {
        // every dual function g_x(c) = c is the same function
        0
    }

    fn fold_average(&self, members: &[Hypothesis]) -> Option<Hypothesis> {
        let vals: Option<Vec<f64>> = members.iter().map(constant_value).collect();
        let vals = vals?;
        if vals.is_empty() {
            return None;
        }
        Some(Hypothesis::constant(vals.iter().sum::<f64>() / vals.len() as f64))
    }
}

impl<T: HypothesisClass + ?Sized> HypothesisClass for Arc<T> {
    fn rerm(&self, subset: &[LabeledExample], u: &PerturbationMap, eta: f64) -> Result<Hypothesis> {
        (**self).rerm(subset, u, eta)
    }
    fn max_fit_subset(&self, sample: &[LabeledExample], u: &PerturbationMap, eta: f64) -> Result<Option<FitSubset>> {
        (**self).max_fit_subset(sample, u, eta)
    }
    fn fat(&self, gamma: f64) -> usize {
        (**self).fat(gamma)
    }
    fn dual_fat(&self, gamma: f64) -> usize {
        (**self).dual_fat(gamma)
    }
    fn fold_average(&self, members: &[Hypothesis]) -> Option<Hypothesis> {
        (**self).fold_average(members)
    }
}
