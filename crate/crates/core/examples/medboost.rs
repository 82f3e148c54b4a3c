// Weighted medians and median boosting on an inflated sample.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use robreg::boosting::{max_deviation, medboost, weighted_median, BoostConfig};
use robreg::sample::inflate;
use robreg::{FiniteClass, LabeledExample, PerturbationMap, Result};

pub fn run() -> Result<()> {
    println!(
        "weighted median: {}",
        weighted_median(&[0.1, 0.5, 0.9], &[1.0, 1.0, 3.0])?
    );

    let rows: Vec<Vec<f64>> = (0..10)
        .map(|r| (0..12).map(|x| if x < r { 0.2 } else { 0.7 }).collect())
        .collect();
    let class = FiniteClass::new(rows)?;
    let u = PerturbationMap::identity(12);
    let sample: Vec<LabeledExample> = (0..12)
        .step_by(2)
        .map(|x| LabeledExample::new(x, class.value(5, x)))
        .collect::<Result<_>>()?;
    let cover = inflate(&sample, &u)?;

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let eta = 0.2;
    let run = medboost(&cover, &sample, &u, eta, 20, &class, &BoostConfig::default(), &mut rng)?;
    println!(
        "rounds {} converged {} members {} max deviation {:.3} (tube {})",
        run.rounds,
        run.converged,
        run.ensemble.len(),
        max_deviation(&run.ensemble, &cover),
        eta / 4.0
    );
    println!(
        "alphas: {:?}",
        run.ensemble
            .alphas
            .iter()
            .map(|a| (a * 1e3).round() / 1e3)
            .collect::<Vec<_>>()
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
