// Agnostic η-regression: learn on the largest fittable subset.

use robreg::pipelines::{agnostic_eta_learn, LearnerConfig};
use robreg::{FiniteClass, LabeledExample, PerturbationMap, Result};

pub fn run() -> Result<()> {
    let class = FiniteClass::new(vec![vec![0.2; 8], vec![0.8; 8], vec![0.5; 8]])?;
    let u = PerturbationMap::identity(8);
    let labels = [0.2, 0.2, 0.8, 0.2, 0.2, 0.5, 0.2, 0.2];
    let sample: Vec<LabeledExample> = labels
        .iter()
        .enumerate()
        .map(|(x, &y)| LabeledExample::new(x, y))
        .collect::<Result<_>>()?;
    let r = agnostic_eta_learn(&class, &sample, &u, 0.1, &LearnerConfig::default(), 0)?;
    println!("fit subset {:?}", r.fit_subset);
    println!(
        "training eta-ball error {} (guarantee held: {})",
        r.emp_eta_err, r.guarantee
    );
    println!("agnostic bound {:?}", r.bound_agnostic);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
