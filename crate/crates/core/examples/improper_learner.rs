// The improper learner end to end on a generated realizable instance.

use robreg::harness::{gen_instance, ClassSpec, ExperimentConfig, PerturbationSpec, PipelineSpec, TargetSpec};
use robreg::pipelines::{improper_learn, LearnerConfig};
use robreg::Result;

pub fn run() -> Result<()> {
    let eta = 0.2;
    let config = ExperimentConfig {
        class: ClassSpec::RandomWalk {
            domain_size: 40,
            rows: 30,
            step: 0.015,
        },
        perturbation: PerturbationSpec::GridBall { radius: 2 },
        target: TargetSpec {
            member: 7,
            ..TargetSpec::default()
        },
        pipeline: PipelineSpec::Improper { eta },
        learner: LearnerConfig::default(),
        m_grid: vec![40],
        trials: 1,
        holdout: 0,
        fit_tol: None,
        seed: 0,
    };
    let inst = gen_instance(&config, 40, 11)?;
    let report = improper_learn(
        inst.class.as_class(),
        &inst.sample,
        &inst.u,
        eta,
        &LearnerConfig::default(),
        11,
    )?;
    println!(
        "m={} pool={} cover={} rounds={} sparsified={} |k(S)|={} max dev={:.3} uniform={}",
        report.m,
        report.pool_size,
        report.cover_size,
        report.rounds,
        report.sparsified,
        report.compression_size,
        report.max_robust_dev,
        report.uniform
    );
    println!(
        "bounds: realizable {:?} agnostic {:?}",
        report.bound_realizable, report.bound_agnostic
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
