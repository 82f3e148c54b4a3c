// Compressing a learned ensemble to sample indices and rebuilding it.

use robreg::compression::{
    compress, compressed_points, reconstruct, reconstruct_from_points, verify_approximation, CompressionScheme,
};
use robreg::pipelines::{improper_learn, LearnerConfig};
use robreg::{FiniteClass, Instance, LabeledExample, PerturbationMap, Result};

pub fn run() -> Result<()> {
    let rows: Vec<Vec<f64>> = (0..8)
        .map(|r| (0..10).map(|x| ((r * x) % 7) as f64 / 7.0).collect())
        .collect();
    let class = FiniteClass::new(rows)?;
    let u = PerturbationMap::identity(10);
    let sample: Vec<LabeledExample> = (0..10)
        .map(|x| LabeledExample::new(x, class.value(3, x)))
        .collect::<Result<_>>()?;
    let eta = 0.2;

    let report = improper_learn(&class, &sample, &u, eta, &LearnerConfig::default(), 0)?;
    let json = report.scheme.to_json()?;
    println!("scheme: {json}");

    let scheme = CompressionScheme::from_json(&json)?;
    let h = reconstruct(&scheme, &sample, &class, &u)?;
    let same = (0..10).all(|x| h.eval(Instance(x)) == report.hypothesis.eval(Instance(x)));
    println!("kept {} indices, rebuilt identically: {same}", scheme.size());
    println!("{:?}", verify_approximation(&h, &sample, &u, eta)?);

    // compressing the rebuilt ensemble again gives the same groups
    let points = compressed_points(&scheme, &sample)?;
    let rebuilt = reconstruct_from_points(&scheme, &points, &class, &u)?;
    let again = compress(&rebuilt, &sample, eta)?;
    println!("stable groups: {}", again.groups == scheme.groups);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
