// Compression generalization bounds, sample-size expressions and the
// cover-size bound.

use robreg::compression::{generalization_bound, BoundKind};
use robreg::dimensions::cover_size_bound;
use robreg::pipelines::{sample_complexity, Theorem};
use robreg::Result;

pub fn run() -> Result<()> {
    let delta = (-1.0f64).exp();
    for kind in [BoundKind::Realizable, BoundKind::Agnostic, BoundKind::Bernstein] {
        println!(
            "{kind:?}: {:.4}",
            generalization_bound(kind, 10, 1000, delta, 0.05, 1.0)?
        );
    }
    for (name, th) in [
        ("proper", Theorem::Proper),
        ("improper", Theorem::Improper),
        ("agnostic_eta", Theorem::AgnosticEta),
    ] {
        let m = sample_complexity(th, 2, 3, 0.1, delta, 0.1, 1.0, 1.0, true)?;
        println!("sample size {name}: {m:.0}");
    }
    println!("cover size bound: {:.3e}", cover_size_bound(100, 0.1, 3, 1.0, 0.5)?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
