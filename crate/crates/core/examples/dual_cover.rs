// Hypothesis pool, dual embedding of the inflated sample and a greedy
// sup-norm cover.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use robreg::dimensions::{exact_min_cover_size, greedy_cover, verify_cover};
use robreg::harness::{gen_instance, ClassSpec, ExperimentConfig, PerturbationSpec, PipelineSpec, TargetSpec};
use robreg::pipelines::{build_pool, dual_embed, LearnerConfig, PoolMode};
use robreg::sample::inflate;
use robreg::Result;

pub fn run() -> Result<()> {
    let config = ExperimentConfig {
        class: ClassSpec::RandomWalk {
            domain_size: 20,
            rows: 40,
            step: 0.1,
        },
        perturbation: PerturbationSpec::GridBall { radius: 1 },
        target: TargetSpec {
            member: 33,
            ..TargetSpec::default()
        },
        pipeline: PipelineSpec::Improper { eta: 0.4 },
        learner: LearnerConfig::default(),
        m_grid: vec![5],
        trials: 1,
        holdout: 0,
        fit_tol: Some(1.0),
        seed: 0,
    };
    let inst = gen_instance(&config, 8, 3)?;
    let class = inst.class.finite().expect("finite class");

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let pool = build_pool(
        &inst.sample,
        &inst.u,
        class,
        0.05,
        1,
        PoolMode::Enumerate,
        1000,
        &mut rng,
    )?;
    println!(
        "pool: {} distinct members, {} infeasible subsets",
        pool.len(),
        pool.skipped
    );

    let inflated = inflate(&inst.sample, &inst.u)?;
    let matrix = dual_embed(&pool.members, &inflated)?;
    println!("dual matrix: {} points x {} columns", matrix.n_rows(), matrix.n_cols());

    for t in [0.05, 0.1, 0.2] {
        let cover = greedy_cover(&matrix.rows, t);
        println!(
            "t={t}: greedy {} centers, exact minimum {}, certified {}",
            cover.len(),
            exact_min_cover_size(&matrix.rows, t, 16)?,
            verify_cover(&matrix.rows, &cover, t)
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
