// Multiplicative-weights boosting with strong learners over a convex class.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use robreg::mw::{mw_boost, tube_error_rate, MwConfig};
use robreg::sample::inflate;
use robreg::{ConstantClass, LabeledExample, PerturbationMap, Result};

pub fn run() -> Result<()> {
    let u = PerturbationMap::grid_ball(10, 1);
    let labels = [0.42, 0.45, 0.5, 0.47, 0.55, 0.44];
    let sample: Vec<LabeledExample> = labels
        .iter()
        .enumerate()
        .map(|(i, &y)| LabeledExample::new(i, y))
        .collect::<Result<_>>()?;
    let cover = inflate(&sample, &u)?;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (eta, epsilon) = (0.2, 0.1);
    let out = mw_boost(
        &cover,
        &sample,
        &u,
        eta,
        epsilon,
        16,
        &ConstantClass,
        &MwConfig::default(),
        &mut rng,
    )?;
    println!(
        "rounds {} members {} cover error {:.3} tube error {:.3}",
        out.rounds,
        out.ensemble.len(),
        out.cover_error,
        tube_error_rate(&out.ensemble, &cover, eta / 2.0)
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
