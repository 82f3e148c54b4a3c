//! Fat-shattering and dual fat-shattering of finite classes, greedy internal
//! covers in sup-norm, and the companion bound calculators.

use crate::error::{Error, Result};
use crate::oracles::FiniteClass;

/// Comparison slack for `f ≤ r − γ` style margin tests on decimal grids.
const MARGIN_TOL: f64 = 1e-9;

/// Limits on the exponential fat-shattering search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ShatterCaps {
    pub points: usize,
    pub hypotheses: usize,
}

impl Default for ShatterCaps {
    fn default() -> Self {
        ShatterCaps {
            points: 16,
            hypotheses: 256,
        }
    }
}

/// Exact `fat(class, γ)` for a finite class over a finite domain.
///
/// A witness level `r_i` can always be raised to `v − γ`, where `v` is the
/// smallest value among the functions realizing `σ_i = +1`. So each point
/// needs only the class's own column values as witness candidates, and a
/// function is `+` at point `i` iff `f(x_i) ≥ v` and `−` iff `f(x_i) ≤ v − 2γ`.
/// Candidate sets are searched coordinate by coordinate, keeping only
/// assignments under which the surviving functions still realize every sign
/// pattern on the prefix.
pub fn fat_shattering(class: &FiniteClass, gamma: f64, caps: ShatterCaps) -> Result<usize> {
    if !(gamma > 0.0) {
        return Err(Error::param("gamma", format!("{gamma} must be positive")));
    }
    if class.is_empty() {
        return Ok(0);
    }
    if class.domain_size() > caps.points {
        return Err(Error::CapExceeded {
            what: "domain",
            size: class.domain_size(),
            cap: caps.points,
        });
    }
    if class.len() > caps.hypotheses {
        return Err(Error::CapExceeded {
            what: "class",
            size: class.len(),
            cap: caps.hypotheses,
        });
    }
    // shattering s points needs 2^s distinct functions
    let max_size = (usize::BITS - 1 - class.len().leading_zeros()) as usize;
    let max_size = max_size.min(class.domain_size());

    let columns: Vec<Vec<f64>> = (0..class.domain_size())
        .map(|x| {
            let mut vals: Vec<f64> = class.rows().map(|r| r[x]).collect();
            vals.sort_by(f64::total_cmp);
            vals.dedup();
            vals
        })
        .collect();

    let mut best = 0;
    for size in 1..=max_size {
        // shattered sets are closed under subsets, so stop at the first size
        // with no shattered set
        if !any_subset_shattered(class, &columns, gamma, size) {
            break;
        }
        best = size;
    }
    Ok(best)
}

fn any_subset_shattered(class: &FiniteClass, columns: &[Vec<f64>], gamma: f64, size: usize) -> bool {
    let n = class.domain_size();
    let mut idx: Vec<usize> = (0..size).collect();
    loop {
        let alive: Vec<(usize, u32)> = (0..class.len()).map(|r| (r, 0u32)).collect();
        if shatter_search(class, columns, gamma, &idx, 0, &alive) {
            return true;
        }
        // next combination in lexicographic order
        let Some(i) = (0..size).rev().find(|&i| idx[i] < n - size + i) else {
            return false;
        };
        idx[i] += 1;
        for j in i + 1..size {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn shatter_search(
    class: &FiniteClass,
    columns: &[Vec<f64>],
    gamma: f64,
    points: &[usize],
    depth: usize,
    alive: &[(usize, u32)],
) -> bool {
    if depth == points.len() {
        return true;
    }
    let x = points[depth];
    let needed = 1usize << (depth + 1);
    for &v in &columns[x] {
        let next: Vec<(usize, u32)> = alive
            .iter()
            .filter_map(|&(r, mask)| {
                let f = class.value(r, x);
                if f >= v {
                    Some((r, mask | (1 << depth)))
                } else if f <= v - 2.0 * gamma + MARGIN_TOL {
                    Some((r, mask))
                } else {
                    None
                }
            })
            .collect();
        if next.len() < needed {
            continue;
        }
        let mut masks: Vec<u32> = next.iter().map(|&(_, m)| m).collect();
        masks.sort_unstable();
        masks.dedup();
        if masks.len() == needed && shatter_search(class, columns, gamma, points, depth + 1, &next) {
            return true;
        }
    }
    false
}

/// The dual class: each domain point becomes a function over hypotheses.
pub fn dual_class(class: &FiniteClass) -> FiniteClass {
    class.transpose()
}

pub fn dual_fat_shattering(class: &FiniteClass, gamma: f64, caps: ShatterCaps) -> Result<usize> {
    fat_shattering(&dual_class(class), gamma, caps)
}

/// `c · (1/γ) · 2^(fat(γ/2) + 1)`, the primal-to-dual fat-shattering bound.
pub fn dual_fat_upper_bound(fat_half_scale: usize, gamma: f64, c: f64) -> f64 {
    c / gamma * 2f64.powi(fat_half_scale as i32 + 1)
}

/// An internal cover: centers are indices into the covered point set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cover {
    pub centers: Vec<usize>,
    /// Center index (into the point set) assigned to each point.
    pub assignment: Vec<usize>,
}

impl Cover {
    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }
}

pub fn sup_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Greedy internal `t`-cover in sup-norm.
///
/// Repeatedly picks the point whose `t`-ball holds the most uncovered points
/// (lowest index on ties) until everything is covered. Every point is
/// assigned to the first chosen center that covered it.
pub fn greedy_cover(points: &[Vec<f64>], t: f64) -> Cover {
    let n = points.len();
    let neighbors: Vec<Vec<usize>> = (0..n)
        .map(|i| (0..n).filter(|&j| sup_distance(&points[i], &points[j]) <= t).collect())
        .collect();
    let mut assignment = vec![usize::MAX; n];
    let mut gain: Vec<usize> = neighbors.iter().map(Vec::len).collect();
    let mut remaining = n;
    let mut centers = Vec::new();
    while remaining > 0 {
        let (best, _) = gain
            .iter()
            .enumerate()
            .fold((0, 0), |acc, (i, &g)| if g > acc.1 { (i, g) } else { acc });
        centers.push(best);
        for &j in &neighbors[best] {
            if assignment[j] == usize::MAX {
                assignment[j] = best;
                remaining -= 1;
                // j no longer counts toward any ball that contains it
                for &k in &neighbors[j] {
                    gain[k] -= 1;
                }
            }
        }
    }
    Cover { centers, assignment }
}

/// Checks that every point lies within `t` of its assigned center and that
/// every assigned center is a chosen center.
pub fn verify_cover(points: &[Vec<f64>], cover: &Cover, t: f64) -> bool {
    cover.assignment.len() == points.len()
        && cover
            .assignment
            .iter()
            .enumerate()
            .all(|(i, &c)| cover.centers.contains(&c) && sup_distance(&points[i], &points[c]) <= t)
}

/// Size of a minimum internal `t`-cover by exhaustive search over center
/// subsets in increasing size.
pub fn exact_min_cover_size(points: &[Vec<f64>], t: f64, cap: usize) -> Result<usize> {
    let n = points.len();
    if n > cap.min(24) {
        return Err(Error::CapExceeded {
            what: "point set",
            size: n,
            cap: cap.min(24),
        });
    }
    if n == 0 {
        return Ok(0);
    }
    let balls: Vec<u32> = (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| sup_distance(&points[i], &points[j]) <= t)
                .fold(0u32, |m, j| m | (1 << j))
        })
        .collect();
    let full: u32 = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    let mut best = n;
    for subset in 1u32..=full {
        let k = subset.count_ones() as usize;
        if k >= best {
            continue;
        }
        let covered = (0..n)
            .filter(|&i| subset & (1 << i) != 0)
            .fold(0u32, |m, i| m | balls[i]);
        if covered == full {
            best = k;
        }
    }
    Ok(best)
}

/// `exp(C · v · ln(n / (v t)) · ln^a(2n / v))`, the exponentiated log-cover
/// bound for a class with fat-shattering `v` on `n` points.
pub fn cover_size_bound(n: usize, t: f64, v: usize, c: f64, a: f64) -> Result<f64> {
    if !(t > 0.0 && t < 0.5) {
        return Err(Error::param("t", format!("{t} not in (0, 1/2)")));
    }
    if !(a > 0.0 && a < 1.0) {
        return Err(Error::param("a", format!("{a} not in (0, 1)")));
    }
    if v < 1 {
        return Err(Error::param("v", "must be at least 1"));
    }
    if n < v {
        return Err(Error::param("n", format!("{n} smaller than v = {v}")));
    }
    if !(c > 0.0) {
        return Err(Error::param("C", "must be positive"));
    }
    let (n, v) = (n as f64, v as f64);
    Ok((c * v * (n / (v * t)).ln() * (2.0 * n / v).ln().powf(a)).exp())
}
