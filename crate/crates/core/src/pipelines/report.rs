use std::io::Write;
use std::time::Duration;

use serde::Serialize;

use crate::compression::CompressionScheme;
use crate::error::Result;
use crate::hypothesis::Hypothesis;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PipelineKind {
    Proper,
    Improper,
    AgnosticEta,
    RealizableRegression,
    AgnosticRegression,
}

impl PipelineKind {
    pub fn name(self) -> &'static str {
        match self {
            PipelineKind::Proper => "proper",
            PipelineKind::Improper => "improper",
            PipelineKind::AgnosticEta => "agnostic_eta",
            PipelineKind::RealizableRegression => "realizable_regression",
            PipelineKind::AgnosticRegression => "agnostic_regression",
        }
    }
}

/// Fractions of points at or beyond η (η/2 on the cover) at each step from
/// the cover to the robust sample condition.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ChainRates {
    pub cover: f64,
    pub inflated: f64,
    pub robust: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GridPoint {
    pub theta: f64,
    /// Holdout θ-ball robust error, `None` if the run at θ failed.
    pub holdout_err: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Everything a learner run produced. Errors are recomputed from the
/// reconstructed hypothesis.
#[derive(Clone, Debug, Serialize)]
pub struct PipelineReport {
    pub pipeline: PipelineKind,
    pub seed: u64,
    pub eta: f64,
    pub epsilon: Option<f64>,
    pub p: f64,
    pub m: usize,
    pub scheme: CompressionScheme,
    pub compression_size: usize,
    pub subset_size: usize,
    pub pool_size: usize,
    pub pool_skipped: usize,
    pub cover_size: usize,
    pub rounds: usize,
    pub sparsified: bool,
    pub sparsify_failed: bool,
    /// η-ball robust error on the training sample.
    pub emp_eta_err: f64,
    /// ℓp robust error on the training sample.
    pub emp_lp_err: f64,
    pub max_robust_dev: f64,
    /// Every training point has robust deviation at most η.
    pub uniform: bool,
    /// The pipeline's own guarantee held on this run.
    pub guarantee: bool,
    pub round_trip: bool,
    pub bound_realizable: Option<f64>,
    pub bound_agnostic: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chain: Option<ChainRates>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub proper_member: Option<Hypothesis>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fit_subset: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lp_bound: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub selected_theta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub holdout_eta_err: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub holdout_lp_err: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<Vec<GridPoint>>,
    #[serde(skip)]
    pub hypothesis: Hypothesis,
    #[serde(skip)]
    pub elapsed: Duration,
}

#[derive(Serialize)]
struct ReportRow<'a> {
    pipeline: &'a str,
    seed: u64,
    m: usize,
    eta: f64,
    epsilon: Option<f64>,
    p: f64,
    emp_eta_err: f64,
    emp_lp_err: f64,
    compression_size: usize,
    cover_size: usize,
    pool_size: usize,
    rounds: usize,
    sparsified: bool,
    uniform: bool,
    guarantee: bool,
    bound_realizable: Option<f64>,
    bound_agnostic: Option<f64>,
}

impl PipelineReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    fn row(&self) -> ReportRow<'_> {
        ReportRow {
            pipeline: self.pipeline.name(),
            seed: self.seed,
            m: self.m,
            eta: self.eta,
            epsilon: self.epsilon,
            p: self.p,
            emp_eta_err: self.emp_eta_err,
            emp_lp_err: self.emp_lp_err,
            compression_size: self.compression_size,
            cover_size: self.cover_size,
            pool_size: self.pool_size,
            rounds: self.rounds,
            sparsified: self.sparsified,
            uniform: self.uniform,
            guarantee: self.guarantee,
            bound_realizable: self.bound_realizable,
            bound_agnostic: self.bound_agnostic,
        }
    }

    /// One CSV row, preceded by the header when `header` is set.
    pub fn write_csv<W: Write>(&self, out: W, header: bool) -> Result<()> {
        let mut w = csv::WriterBuilder::new().has_headers(header).from_writer(out);
        w.serialize(self.row())?;
        w.flush()?;
        Ok(())
    }
}
