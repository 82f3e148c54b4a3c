use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Learning guarantees whose sample sizes the calculator evaluates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Theorem {
    /// Proper learner, robust η-regression.
    #[serde(alias = "3.1")]
    Proper,
    /// Improper learner, realizable robust η-regression.
    #[serde(alias = "4.1")]
    Improper,
    /// Agnostic robust η-regression.
    #[serde(alias = "4.2")]
    AgnosticEta,
    /// Realizable robust ℓp regression.
    #[serde(alias = "5.1")]
    RealizableLp,
    /// Agnostic robust ℓp regression.
    #[serde(alias = "5.2")]
    AgnosticLp,
}

impl Theorem {
    /// Accepts the snake-case name or the short numeric code.
    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "proper" | "3.1" => Theorem::Proper,
            "improper" | "4.1" => Theorem::Improper,
            "agnostic_eta" | "4.2" => Theorem::AgnosticEta,
            "realizable_lp" | "5.1" => Theorem::RealizableLp,
            "agnostic_lp" | "5.2" => Theorem::AgnosticLp,
            _ => return Err(Error::param("theorem", format!("unknown theorem {s:?}"))),
        })
    }

    /// Power of `1/ε` in both terms.
    pub fn epsilon_exponent(self) -> i32 {
        match self {
            Theorem::Proper => 3,
            Theorem::Improper | Theorem::RealizableLp => 1,
            Theorem::AgnosticEta | Theorem::AgnosticLp => 2,
        }
    }

    /// Scale at which the caller should evaluate `fat` and `fat*`: η for the
    /// η-regression results, `ε^{1/p}` for the ℓp ones.
    pub fn dimension_scale(self, epsilon: f64, eta: f64, p: f64) -> f64 {
        match self {
            Theorem::RealizableLp | Theorem::AgnosticLp => epsilon.powf(1.0 / p),
            _ => eta,
        }
    }
}

/// `c·(L·fat·fat*/ε^k + ln(1/δ)/ε^k)` where `L = 1` with `suppress_logs` and
/// `ln²(max(fat·fat*/ε, e))` otherwise.
#[allow(clippy::too_many_arguments)]
pub fn sample_complexity(
    theorem: Theorem,
    fat: usize,
    fat_star: usize,
    epsilon: f64,
    delta: f64,
    eta: f64,
    p: f64,
    c: f64,
    suppress_logs: bool,
) -> Result<f64> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::param("epsilon", format!("{epsilon} not in (0, 1)")));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::param("delta", format!("{delta} not in (0, 1)")));
    }
    if !(eta > 0.0 && eta < 1.0) {
        return Err(Error::param("eta", format!("{eta} not in (0, 1)")));
    }
    if !(p >= 1.0 && p.is_finite()) {
        return Err(Error::param("p", "must be at least 1"));
    }
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::param("c", "must be positive"));
    }
    let dims = fat as f64 * fat_star as f64;
    let log_factor = if suppress_logs {
        1.0
    } else {
        let l = (dims / epsilon).max(std::f64::consts::E).ln();
        l * l
    };
    let scale = epsilon.powi(theorem.epsilon_exponent());
    Ok(c * (log_factor * dims / scale + (1.0 / delta).ln() / scale))
}
