// Perturbation sets, inflation and the two robust losses.

use robreg::sample::{empirical_error, expand_pairs, inflate, robust_deviation, robust_loss};
use robreg::{Hypothesis, LabeledExample, LossMode, PerturbationMap, Result};

pub fn run() -> Result<()> {
    // five points on a line, each may be nudged one step
    let u = PerturbationMap::grid_ball(5, 1);
    let sample = vec![LabeledExample::new(1, 0.4)?, LabeledExample::new(2, 0.5)?];

    let inflated = inflate(&sample, &u)?;
    let pairs = expand_pairs(&sample, &u)?;
    println!("inflated points: {}", inflated.len());
    println!("(z, y, origin) pairs: {}", pairs.len());
    for p in &inflated {
        println!("  z={} y={} from sample {}", p.z.0, p.y, p.origin);
    }

    let h = Hypothesis::row(0, vec![0.3, 0.35, 0.45, 0.6, 0.9]);
    for ex in &sample {
        println!(
            "x={} dev={:.3} eta-ball(0.1)={} l2={:.4}",
            ex.x.0,
            robust_deviation(&h, ex, &u)?,
            robust_loss(&h, ex, &u, LossMode::EtaBall(0.1))?,
            robust_loss(&h, ex, &u, LossMode::Lp(2.0))?,
        );
    }
    println!(
        "empirical eta-ball error: {}",
        empirical_error(&h, &sample, &u, LossMode::EtaBall(0.1))?
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
