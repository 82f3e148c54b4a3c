//! Synthetic instances, experiment sweeps and the command-line front end.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::compression::{generalization_bound, BoundKind};
use crate::dimensions::{dual_fat_shattering, fat_shattering, greedy_cover, ShatterCaps};
use crate::error::{Error, Result};
use crate::hypothesis::Hypothesis;
use crate::io::{load_class_csv, load_problem, Problem};
use crate::oracles::{ConstantClass, FiniteClass, HypothesisClass};
use crate::pipelines::{
    agnostic_eta_learn, agnostic_regression, dual_embed, improper_learn, proper_learn, realizable_regression,
    sample_complexity, LearnerConfig, PipelineReport, Theorem,
};
use crate::sample::{empirical_error, inflate, robust_deviation, LabeledExample, LossMode, PerturbationMap};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ClassSpec {
    /// Constants `j/(levels − 1)`.
    Constants { domain_size: usize, levels: usize },
    /// Two-level step functions `a·[x < t] + b·[x ≥ t]` over a level grid.
    Steps { domain_size: usize, levels: usize },
    /// Independent uniform entries.
    Random { domain_size: usize, rows: usize },
    /// Clamped random walks with increments in `[−step, step]`.
    RandomWalk { domain_size: usize, rows: usize, step: f64 },
    /// Every constant in `[0, 1]`.
    ConstantInterval { domain_size: usize },
}

impl ClassSpec {
    pub fn domain_size(&self) -> usize {
        match *self {
            ClassSpec::Constants { domain_size, .. }
            | ClassSpec::Steps { domain_size, .. }
            | ClassSpec::Random { domain_size, .. }
            | ClassSpec::RandomWalk { domain_size, .. }
            | ClassSpec::ConstantInterval { domain_size } => domain_size,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PerturbationSpec {
    Identity,
    GridBall { radius: usize },
    RandomKNeighbors { k: usize },
}

/// Target member and label noise. `member` indexes finite classes; `value`
/// is the target of the constant interval.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TargetSpec {
    pub member: usize,
    pub value: f64,
    /// Probability that a label is replaced by a uniform draw.
    pub noise: f64,
}

impl Default for TargetSpec {
    fn default() -> Self {
        TargetSpec {
            member: 0,
            value: 0.5,
            noise: 0.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PipelineSpec {
    Proper { eta: f64, epsilon: f64 },
    Improper { eta: f64 },
    AgnosticEta { eta: f64 },
    Regress { epsilon: f64, p: f64 },
    AgnosticRegress { epsilon: f64, delta: f64, p: f64 },
}

impl PipelineSpec {
    /// Scale at which the target must fit the sample in realizable specs.
    pub fn scale(&self) -> f64 {
        match *self {
            PipelineSpec::Proper { eta, .. } | PipelineSpec::Improper { eta } | PipelineSpec::AgnosticEta { eta } => {
                eta
            }
            PipelineSpec::Regress { epsilon, p } => epsilon.powf(1.0 / p),
            PipelineSpec::AgnosticRegress { epsilon, .. } => epsilon,
        }
    }

    pub fn epsilon(&self) -> Option<f64> {
        match *self {
            PipelineSpec::Proper { epsilon, .. }
            | PipelineSpec::Regress { epsilon, .. }
            | PipelineSpec::AgnosticRegress { epsilon, .. } => Some(epsilon),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            PipelineSpec::Proper { .. } => "proper",
            PipelineSpec::Improper { .. } => "improper",
            PipelineSpec::AgnosticEta { .. } => "agnostic_eta",
            PipelineSpec::Regress { .. } => "realizable_regression",
            PipelineSpec::AgnosticRegress { .. } => "agnostic_regression",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub class: ClassSpec,
    pub perturbation: PerturbationSpec,
    #[serde(default)]
    pub target: TargetSpec,
    pub pipeline: PipelineSpec,
    #[serde(default)]
    pub learner: LearnerConfig,
    pub m_grid: Vec<usize>,
    #[serde(default = "one")]
    pub trials: usize,
    /// Fresh points drawn for the held-out error.
    #[serde(default = "default_holdout")]
    pub holdout: usize,
    /// Largest robust deviation the target may have on an emitted clean
    /// point. Defaults to an eighth of the pipeline scale.
    #[serde(default)]
    pub fit_tol: Option<f64>,
    #[serde(default)]
    pub seed: u64,
}

fn one() -> usize {
    1
}

fn default_holdout() -> usize {
    200
}

/// Largest class matrix the harness will generate.
pub const MAX_ROWS: usize = 4096;
pub const MAX_DOMAIN: usize = 4096;

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let c: ExperimentConfig = serde_json::from_str(text)?;
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.class.domain_size();
        if n == 0 || n > MAX_DOMAIN {
            return Err(Error::param("domain_size", format!("must be in 1..={MAX_DOMAIN}")));
        }
        match self.class {
            ClassSpec::Constants { levels, .. } | ClassSpec::Steps { levels, .. } if levels < 2 => {
                return Err(Error::param("levels", "must be at least 2"));
            }
            ClassSpec::Random { rows, .. } | ClassSpec::RandomWalk { rows, .. } if rows == 0 || rows > MAX_ROWS => {
                return Err(Error::param("rows", format!("must be in 1..={MAX_ROWS}")));
            }
            ClassSpec::RandomWalk { step, .. } if !(0.0..=1.0).contains(&step) => {
                return Err(Error::param("step", "must be in [0, 1]"));
            }
            _ => {}
        }
        if let PerturbationSpec::RandomKNeighbors { k } = self.perturbation {
            if k >= n {
                return Err(Error::param("k", "must be below the domain size"));
            }
        }
        if !(0.0..=1.0).contains(&self.target.noise) {
            return Err(Error::param("noise", "must be in [0, 1]"));
        }
        if !(0.0..=1.0).contains(&self.target.value) {
            return Err(Error::param("value", "must be in [0, 1]"));
        }
        if self.m_grid.is_empty() || self.m_grid.contains(&0) {
            return Err(Error::param("m_grid", "needs positive sample sizes"));
        }
        let scale = self.pipeline.scale();
        if !(scale > 0.0 && scale <= 1.0) {
            return Err(Error::param("eta", format!("pipeline scale {scale} not in (0, 1]")));
        }
        if let Some(t) = self.fit_tol {
            if !(t >= 0.0) {
                return Err(Error::param("fit_tol", "must be nonnegative"));
            }
        }
        self.learner.validate()
    }
}

/// A generated class: a finite matrix or the constant interval.
#[derive(Clone, Debug)]
pub enum ClassInstance {
    Finite(FiniteClass),
    Constants,
}

impl ClassInstance {
    pub fn as_class(&self) -> &dyn HypothesisClass {
        match self {
            ClassInstance::Finite(c) => c,
            ClassInstance::Constants => &ConstantClass,
        }
    }

    pub fn finite(&self) -> Option<&FiniteClass> {
        match self {
            ClassInstance::Finite(c) => Some(c),
            ClassInstance::Constants => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct GeneratedInstance {
    pub class: ClassInstance,
    pub target: Hypothesis,
    pub u: PerturbationMap,
    pub sample: Vec<LabeledExample>,
    pub holdout: Vec<LabeledExample>,
    /// Domain points whose clean label the target fits robustly.
    pub admissible: Vec<usize>,
}

impl GeneratedInstance {
    pub fn problem(&self) -> Problem {
        Problem {
            domain_size: self.u.len(),
            sample: self.sample.clone(),
            holdout: self.holdout.clone(),
            u: self.u.clone(),
            class: self.class.finite().cloned(),
            learner: LearnerConfig::default(),
        }
    }
}

fn level(j: usize, levels: usize) -> f64 {
    j as f64 / (levels - 1) as f64
}

pub fn gen_class<R: Rng + ?Sized>(spec: &ClassSpec, rng: &mut R) -> Result<ClassInstance> {
    let rows: Vec<Vec<f64>> = match *spec {
        ClassSpec::Constants { domain_size, levels } => {
            (0..levels).map(|j| vec![level(j, levels); domain_size]).collect()
        }
        ClassSpec::Steps { domain_size, levels } => {
            let mut rows = Vec::new();
            for t in 1..domain_size {
                for a in 0..levels {
                    for b in 0..levels {
                        if a != b {
                            rows.push(
                                (0..domain_size)
                                    .map(|x| level(if x < t { a } else { b }, levels))
                                    .collect(),
                            );
                        }
                    }
                }
            }
            rows.extend((0..levels).map(|j| vec![level(j, levels); domain_size]));
            rows
        }
        ClassSpec::Random { domain_size, rows } => (0..rows)
            .map(|_| (0..domain_size).map(|_| rng.gen::<f64>()).collect())
            .collect(),
        ClassSpec::RandomWalk {
            domain_size,
            rows,
            step,
        } => (0..rows)
            .map(|_| {
                let mut v = rng.gen::<f64>();
                (0..domain_size)
                    .map(|_| {
                        let out = v;
                        v = (v + rng.gen_range(-step..=step)).clamp(0.0, 1.0);
                        out
                    })
                    .collect()
            })
            .collect(),
        ClassSpec::ConstantInterval { .. } => return Ok(ClassInstance::Constants),
    };
    Ok(ClassInstance::Finite(FiniteClass::new(rows)?))
}

pub fn gen_perturbation<R: Rng + ?Sized>(spec: &PerturbationSpec, n: usize, rng: &mut R) -> PerturbationMap {
    match *spec {
        PerturbationSpec::Identity => PerturbationMap::identity(n),
        PerturbationSpec::GridBall { radius } => PerturbationMap::grid_ball(n, radius),
        PerturbationSpec::RandomKNeighbors { k } => PerturbationMap::random_k_neighbors(n, k, rng),
    }
}

/// Draws a class, perturbations, `holdout` fresh points and then `m`
/// training points, so samples for one seed are nested in `m`. Points are uniform over the admissible set: instances whose clean
/// label `f(x)` the target fits with robust deviation at most `fit_tol`.
/// With noise rate `q` each label is independently replaced by a uniform
/// draw with probability `q`.
pub fn gen_instance(config: &ExperimentConfig, m: usize, seed: u64) -> Result<GeneratedInstance> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = config.class.domain_size();
    let class = gen_class(&config.class, &mut rng)?;
    let target = match &class {
        ClassInstance::Finite(c) => {
            if config.target.member >= c.len() {
                return Err(Error::param(
                    "member",
                    format!("target member {} but class has {} rows", config.target.member, c.len()),
                ));
            }
            c.hypothesis(config.target.member)
        }
        ClassInstance::Constants => Hypothesis::constant(config.target.value),
    };
    let u = gen_perturbation(&config.perturbation, n, &mut rng);
    let tol = config.fit_tol.unwrap_or(config.pipeline.scale() / 8.0);
    let mut admissible = Vec::new();
    for x in 0..n {
        let ex = LabeledExample::new(x, target.eval(crate::sample::Instance(x)))?;
        if robust_deviation(&target, &ex, &u)? <= tol {
            admissible.push(x);
        }
    }
    if admissible.is_empty() {
        return Err(Error::UnrealizableSpec(format!(
            "target fits no domain point within {tol}"
        )));
    }
    let q = config.target.noise;
    let mut draw = |count: usize| -> Result<Vec<LabeledExample>> {
        (0..count)
            .map(|_| {
                let x = *admissible.choose(&mut rng).expect("nonempty");
                let clean = target.eval(crate::sample::Instance(x));
                let y = if q > 0.0 && rng.gen_bool(q) {
                    rng.gen::<f64>()
                } else {
                    clean
                };
                LabeledExample::new(x, y)
            })
            .collect()
    };
    let holdout = draw(config.holdout)?;
    let sample = draw(m)?;
    Ok(GeneratedInstance {
        class,
        target,
        u,
        sample,
        holdout,
        admissible,
    })
}

/// Runs the configured pipeline on an instance.
pub fn run_pipeline(
    spec: &PipelineSpec,
    class: &dyn HypothesisClass,
    sample: &[LabeledExample],
    holdout: &[LabeledExample],
    u: &PerturbationMap,
    cfg: &LearnerConfig,
    seed: u64,
) -> Result<PipelineReport> {
    match *spec {
        PipelineSpec::Proper { eta, epsilon } => proper_learn(class, sample, u, eta, epsilon, cfg, seed),
        PipelineSpec::Improper { eta } => improper_learn(class, sample, u, eta, cfg, seed),
        PipelineSpec::AgnosticEta { eta } => agnostic_eta_learn(class, sample, u, eta, cfg, seed),
        PipelineSpec::Regress { epsilon, p } => realizable_regression(class, sample, u, epsilon, p, cfg, seed),
        PipelineSpec::AgnosticRegress { epsilon, delta, p } => {
            agnostic_regression(class, sample, holdout, u, epsilon, delta, p, cfg, seed)
        }
    }
}

pub const CSV_HEADER: &str = "m,trial,pipeline,eta,epsilon,emp_robust_err,holdout_robust_err,compression_size,cover_size,bound_realizable,bound_agnostic,seed,status";

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentRow {
    pub m: usize,
    pub trial: usize,
    pub pipeline: String,
    pub eta: Option<f64>,
    pub epsilon: Option<f64>,
    pub emp_robust_err: Option<f64>,
    pub holdout_robust_err: Option<f64>,
    pub compression_size: Option<usize>,
    pub cover_size: Option<usize>,
    pub bound_realizable: Option<f64>,
    pub bound_agnostic: Option<f64>,
    pub seed: u64,
    pub status: String,
}

/// Seed of one trial. Shared across the m grid, so every sample size in a
/// trial sees the same class, perturbations and holdout.
pub fn trial_seed(seed: u64, trial: usize) -> u64 {
    let mut s = (seed ^ 0xD1B5_4A32_D192_ED03 ^ trial as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    s ^= s >> 29;
    s
}

fn run_row(config: &ExperimentConfig, m: usize, trial: usize) -> ExperimentRow {
    let seed = trial_seed(config.seed, trial);
    let mut row = ExperimentRow {
        m,
        trial,
        pipeline: config.pipeline.name().to_string(),
        eta: None,
        epsilon: config.pipeline.epsilon(),
        emp_robust_err: None,
        holdout_robust_err: None,
        compression_size: None,
        cover_size: None,
        bound_realizable: None,
        bound_agnostic: None,
        seed,
        status: String::new(),
    };
    let outcome = gen_instance(config, m, seed).and_then(|inst| {
        let report = run_pipeline(
            &config.pipeline,
            inst.class.as_class(),
            &inst.sample,
            &inst.holdout,
            &inst.u,
            &config.learner,
            seed,
        )?;
        let held = if inst.holdout.is_empty() {
            None
        } else {
            Some(empirical_error(
                &report.hypothesis,
                &inst.holdout,
                &inst.u,
                LossMode::EtaBall(report.eta),
            )?)
        };
        Ok((report, held))
    });
    match outcome {
        Ok((r, held)) => {
            row.eta = Some(r.eta);
            row.emp_robust_err = Some(r.emp_eta_err);
            row.holdout_robust_err = held;
            row.compression_size = Some(r.compression_size);
            row.cover_size = Some(r.cover_size);
            row.bound_realizable = r.bound_realizable;
            row.bound_agnostic = r.bound_agnostic;
            row.status = "ok".into();
        }
        Err(e) => row.status = format!("error: {e}"),
    }
    row
}

/// One row per `(m, trial)`, in that order. Failures become error rows.
pub fn run_experiment_rows(config: &ExperimentConfig) -> Result<Vec<ExperimentRow>> {
    config.validate()?;
    let mut rows = Vec::new();
    for &m in &config.m_grid {
        for trial in 0..config.trials {
            rows.push(run_row(config, m, trial));
        }
    }
    rows.sort_by_key(|r| (r.m, r.trial));
    Ok(rows)
}

pub fn rows_to_csv(rows: &[ExperimentRow]) -> Result<String> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    w.write_record(CSV_HEADER.split(','))?;
    for r in rows {
        w.serialize(r)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// The sweep as CSV text with the fixed header.
pub fn run_experiment(config: &ExperimentConfig) -> Result<String> {
    rows_to_csv(&run_experiment_rows(config)?)
}

// ---------------------------------------------------------------------------
// command line

#[derive(Debug, Parser)]
#[command(name = "robreg", version, about = "Robust learning over finite perturbation sets")]
struct Cli {
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// JSON problem file, or an experiment config for `gen` and `experiment`.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output path; stdout when absent. Reports written to a `.csv` path
    /// are appended as one row.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct ClassArgs {
    /// Class matrix CSV; overrides `class_matrix` in the problem file.
    #[arg(long)]
    class: Option<PathBuf>,
    /// Learn over every constant in [0, 1] instead of a finite class.
    #[arg(long)]
    constants: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a problem file from an experiment config.
    Gen {
        #[arg(long)]
        m: Option<usize>,
    },
    /// Fat-shattering and dual fat-shattering over a γ grid, as CSV.
    Fatdim {
        #[arg(long, value_delimiter = ',', required = true)]
        gamma: Vec<f64>,
        #[command(flatten)]
        class: ClassArgs,
    },
    /// Greedy dual-space cover of the inflated sample, as CSV.
    Cover {
        #[arg(long)]
        t: f64,
        #[command(flatten)]
        class: ClassArgs,
    },
    LearnProper {
        #[arg(long)]
        eta: f64,
        #[arg(long)]
        epsilon: f64,
        #[command(flatten)]
        class: ClassArgs,
    },
    LearnImproper {
        #[arg(long)]
        eta: f64,
        #[command(flatten)]
        class: ClassArgs,
    },
    AgnosticEta {
        #[arg(long)]
        eta: f64,
        #[command(flatten)]
        class: ClassArgs,
    },
    Regress {
        #[arg(long)]
        epsilon: f64,
        #[arg(long, default_value_t = 1.0)]
        p: f64,
        #[command(flatten)]
        class: ClassArgs,
    },
    AgnosticRegress {
        #[arg(long)]
        epsilon: f64,
        #[arg(long)]
        delta: f64,
        #[arg(long, default_value_t = 1.0)]
        p: f64,
        #[command(flatten)]
        class: ClassArgs,
    },
    /// Compression generalization bounds, or a sample size with --theorem.
    Bounds {
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long, default_value_t = 0.05)]
        delta: f64,
        #[arg(long, default_value_t = 0.0)]
        empirical: f64,
        #[arg(long, default_value_t = 1.0)]
        c: f64,
        #[arg(long)]
        theorem: Option<String>,
        #[arg(long, default_value_t = 1)]
        fat: usize,
        #[arg(long, default_value_t = 1)]
        fat_star: usize,
        #[arg(long, default_value_t = 0.1)]
        epsilon: f64,
        #[arg(long, default_value_t = 0.1)]
        eta: f64,
        #[arg(long, default_value_t = 1.0)]
        p: f64,
        /// Include the squared-log factor.
        #[arg(long)]
        logs: bool,
    },
    /// Run a sweep from an experiment config and write CSV.
    Experiment,
}

fn need_config(cli: &Cli) -> Result<&Path> {
    cli.config
        .as_deref()
        .ok_or_else(|| Error::param("config", "--config <path> is required"))
}

enum Loaded {
    Finite(FiniteClass),
    Constants,
}

impl Loaded {
    fn as_class(&self) -> &dyn HypothesisClass {
        match self {
            Loaded::Finite(c) => c,
            Loaded::Constants => &ConstantClass,
        }
    }
}

fn load_class(args: &ClassArgs, problem: &Problem) -> Result<Loaded> {
    if args.constants {
        return Ok(Loaded::Constants);
    }
    let class = match &args.class {
        Some(path) => load_class_csv(path)?,
        None => problem.class.clone().ok_or_else(|| {
            Error::param(
                "class",
                "no class_matrix in the problem file; pass --class or --constants",
            )
        })?,
    };
    if class.domain_size() != problem.domain_size {
        return Err(Error::param("class", "class width must equal domain_size"));
    }
    Ok(Loaded::Finite(class))
}

fn finite_only(loaded: Loaded) -> Result<FiniteClass> {
    match loaded {
        Loaded::Finite(c) => Ok(c),
        Loaded::Constants => Err(Error::param("class", "this command needs a finite class")),
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
        }
    }
    Ok(())
}

fn emit_report(out: Option<&Path>, report: &PipelineReport) -> Result<()> {
    match out {
        Some(path) if path.extension().is_some_and(|e| e == "csv") => {
            let fresh = !path.exists() || fs::metadata(path)?.len() == 0;
            let file = fs::OpenOptions::new().create(true).append(true).open(path)?;
            report.write_csv(file, fresh)
        }
        _ => emit(out, &(report.to_json()? + "\n")),
    }
}

fn check_positive(name: &'static str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::param(name, format!("{v} must be positive")))
    }
}

fn execute(cli: &Cli) -> Result<()> {
    let out = cli.out.as_deref();
    let problem = || load_problem(need_config(cli)?);
    match &cli.command {
        Command::Gen { m } => {
            let config = ExperimentConfig::from_json(&fs::read_to_string(need_config(cli)?)?)?;
            let m = m.unwrap_or(config.m_grid[0]);
            let inst = gen_instance(&config, m, cli.seed)?;
            emit(out, &(inst.problem().to_file().to_json()? + "\n"))
        }
        Command::Fatdim { gamma, class } => {
            for &g in gamma {
                check_positive("gamma", g)?;
            }
            let p = problem()?;
            let c = finite_only(load_class(class, &p)?)?;
            let mut text = String::from("gamma,fat,dual_fat\n");
            for &g in gamma {
                let fat = fat_shattering(&c, g, ShatterCaps::default())?;
                let dual = dual_fat_shattering(&c, g, ShatterCaps::default())?;
                text.push_str(&format!("{g},{fat},{dual}\n"));
            }
            emit(out, &text)
        }
        Command::Cover { t, class } => {
            check_positive("t", *t)?;
            let p = problem()?;
            let c = finite_only(load_class(class, &p)?)?;
            let inflated = inflate(&p.sample, &p.u)?;
            let pool: Vec<Hypothesis> = (0..c.len()).map(|r| c.hypothesis(r)).collect();
            let matrix = dual_embed(&pool, &inflated)?;
            let cover = greedy_cover(&matrix.rows, *t);
            let mut text = String::from("point,z,y,origin,center\n");
            for (i, e) in inflated.iter().enumerate() {
                text.push_str(&format!("{i},{},{},{},{}\n", e.z.0, e.y, e.origin, cover.assignment[i]));
            }
            emit(out, &text)
        }
        Command::LearnProper { eta, epsilon, class } => {
            let p = problem()?;
            let c = load_class(class, &p)?;
            let r = proper_learn(c.as_class(), &p.sample, &p.u, *eta, *epsilon, &p.learner, cli.seed)?;
            emit_report(out, &r)
        }
        Command::LearnImproper { eta, class } => {
            let p = problem()?;
            let c = load_class(class, &p)?;
            let r = improper_learn(c.as_class(), &p.sample, &p.u, *eta, &p.learner, cli.seed)?;
            emit_report(out, &r)
        }
        Command::AgnosticEta { eta, class } => {
            let p = problem()?;
            let c = load_class(class, &p)?;
            let r = agnostic_eta_learn(c.as_class(), &p.sample, &p.u, *eta, &p.learner, cli.seed)?;
            emit_report(out, &r)
        }
        Command::Regress { epsilon, p: exp, class } => {
            let p = problem()?;
            let c = load_class(class, &p)?;
            let r = realizable_regression(c.as_class(), &p.sample, &p.u, *epsilon, *exp, &p.learner, cli.seed)?;
            emit_report(out, &r)
        }
        Command::AgnosticRegress {
            epsilon,
            delta,
            p: exp,
            class,
        } => {
            let p = problem()?;
            let c = load_class(class, &p)?;
            let r = agnostic_regression(
                c.as_class(),
                &p.sample,
                &p.holdout,
                &p.u,
                *epsilon,
                *delta,
                *exp,
                &p.learner,
                cli.seed,
            )?;
            emit_report(out, &r)
        }
        Command::Bounds {
            k,
            m,
            delta,
            empirical,
            c,
            theorem,
            fat,
            fat_star,
            epsilon,
            eta,
            p,
            logs,
        } => {
            let mut text = String::from("quantity,value\n");
            if let Some(t) = theorem {
                let th = Theorem::parse(t)?;
                let v = sample_complexity(th, *fat, *fat_star, *epsilon, *delta, *eta, *p, *c, !logs)?;
                text.push_str(&format!("sample_complexity_{t},{v}\n"));
            }
            if k.is_some() || m.is_some() {
                let k = k.ok_or_else(|| Error::param("k", "--k is required with --m"))?;
                let m = m.ok_or_else(|| Error::param("m", "--m is required with --k"))?;
                for (name, kind) in [
                    ("realizable", BoundKind::Realizable),
                    ("agnostic", BoundKind::Agnostic),
                    ("bernstein", BoundKind::Bernstein),
                ] {
                    let v = generalization_bound(kind, k, m, *delta, *empirical, *c)?;
                    text.push_str(&format!("{name},{v}\n"));
                }
            }
            if text.lines().count() == 1 {
                return Err(Error::param("bounds", "pass --k and --m, or --theorem"));
            }
            emit(out, &text)
        }
        Command::Experiment => {
            let mut config = ExperimentConfig::from_json(&fs::read_to_string(need_config(cli)?)?)?;
            if cli.seed != 0 {
                config.seed = cli.seed;
            }
            emit(out, &run_experiment(&config)?)
        }
    }
}

/// Parses `argv` (program name first) and runs the command. Returns 0 on
/// success, 1 on bad input, 2 when a run fails.
pub fn cli<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let parsed = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&parsed) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_validation() {
                1
            } else {
                2
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(class: ClassSpec, pipeline: PipelineSpec) -> ExperimentConfig {
        ExperimentConfig {
            class,
            perturbation: PerturbationSpec::Identity,
            target: TargetSpec::default(),
            pipeline,
            learner: LearnerConfig::default(),
            m_grid: vec![10],
            trials: 1,
            holdout: 20,
            fit_tol: None,
            seed: 0,
        }
    }

    #[test]
    fn constant_target_labels() {
        let c = config(
            ClassSpec::ConstantInterval { domain_size: 8 },
            PipelineSpec::Improper { eta: 0.2 },
        );
        let inst = gen_instance(&c, 10, 1).unwrap();
        assert!(inst.sample.iter().all(|e| e.y == 0.5));
    }

    #[test]
    fn grid_ball_sets() {
        let mut c = config(
            ClassSpec::Steps {
                domain_size: 20,
                levels: 3,
            },
            PipelineSpec::Improper { eta: 0.2 },
        );
        c.perturbation = PerturbationSpec::GridBall { radius: 1 };
        c.target.member = 5;
        let inst = gen_instance(&c, 10, 3).unwrap();
        assert!(inst.u.iter().all(|(x, s)| s.len() <= 3 && s.contains(&x)));
    }

    #[test]
    fn realizable_sample_is_feasible() {
        let mut c = config(
            ClassSpec::RandomWalk {
                domain_size: 30,
                rows: 12,
                step: 0.02,
            },
            PipelineSpec::Improper { eta: 0.2 },
        );
        c.perturbation = PerturbationSpec::GridBall { radius: 1 };
        let inst = gen_instance(&c, 25, 4).unwrap();
        let class = inst.class.finite().unwrap();
        assert!(crate::oracles::rerm_finite(class, &inst.sample, &inst.u, 0.2).is_ok());
    }

    #[test]
    fn one_row_per_trial_and_deterministic() {
        let c = config(
            ClassSpec::ConstantInterval { domain_size: 6 },
            PipelineSpec::Improper { eta: 0.2 },
        );
        let a = run_experiment(&c).unwrap();
        assert_eq!(a.lines().count(), 2);
        assert_eq!(a.lines().next().unwrap(), CSV_HEADER);
        assert_eq!(a, run_experiment(&c).unwrap());
    }

    #[test]
    fn unknown_subcommand_exits_one() {
        assert_eq!(cli(["robreg", "frobnicate"]), 1);
        assert_eq!(cli(["robreg", "bounds"]), 1);
        assert_eq!(cli(["robreg", "bounds", "--k", "10", "--m", "1000"]), 0);
    }
}
