// Realizable ℓp regression and agnostic regression with a holdout grid.

use robreg::harness::{gen_instance, ClassSpec, ExperimentConfig, PerturbationSpec, PipelineSpec, TargetSpec};
use robreg::pipelines::{agnostic_regression, realizable_regression, LearnerConfig};
use robreg::Result;

pub fn run() -> Result<()> {
    let (epsilon, p) = (0.04, 2.0);
    let mut config = ExperimentConfig {
        class: ClassSpec::RandomWalk {
            domain_size: 40,
            rows: 40,
            step: 0.01,
        },
        perturbation: PerturbationSpec::GridBall { radius: 1 },
        target: TargetSpec::default(),
        pipeline: PipelineSpec::Regress { epsilon, p },
        learner: LearnerConfig::default(),
        m_grid: vec![40],
        trials: 1,
        holdout: 0,
        fit_tol: None,
        seed: 0,
    };
    let inst = gen_instance(&config, 40, 2)?;
    let r = realizable_regression(
        inst.class.as_class(),
        &inst.sample,
        &inst.u,
        epsilon,
        p,
        &LearnerConfig::default(),
        2,
    )?;
    println!(
        "eta={:.2} l{p} error {:.5} <= {:.5}",
        r.eta,
        r.emp_lp_err,
        r.lp_bound.unwrap_or(f64::NAN)
    );

    config.pipeline = PipelineSpec::AgnosticRegress {
        epsilon: 0.1,
        delta: 0.05,
        p: 1.0,
    };
    config.target = TargetSpec {
        member: 3,
        value: 0.5,
        noise: 0.1,
    };
    config.holdout = 400;
    let inst = gen_instance(&config, 120, 3)?;
    let r = agnostic_regression(
        inst.class.as_class(),
        &inst.sample,
        &inst.holdout,
        &inst.u,
        0.1,
        0.05,
        1.0,
        &LearnerConfig::default(),
        3,
    )?;
    for g in r.grid.as_deref().unwrap_or(&[]) {
        println!("  theta={:.4} holdout error {:?}", g.theta, g.holdout_err);
    }
    println!(
        "selected theta {:?}, holdout l1 error {:?}",
        r.selected_theta, r.holdout_lp_err
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
