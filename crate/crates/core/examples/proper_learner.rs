// The proper learner over the constant functions: the output is a single
// constant, the average of the boosted members.

use robreg::pipelines::{proper_learn, LearnerConfig};
use robreg::{ConstantClass, Instance, LabeledExample, PerturbationMap, Result};

pub fn run() -> Result<()> {
    let u = PerturbationMap::grid_ball(12, 1);
    let sample: Vec<LabeledExample> = (0..12)
        .map(|x| LabeledExample::new(x, 0.5 + 0.01 * ((x % 3) as f64 - 1.0)))
        .collect::<Result<_>>()?;
    for epsilon in [0.05, 0.25] {
        let r = proper_learn(&ConstantClass, &sample, &u, 0.2, epsilon, &LearnerConfig::default(), 0)?;
        let member = r.proper_member.as_ref().map(|h| h.eval(Instance(0)));
        println!(
            "epsilon={epsilon}: subset size {} rounds {} member {:?} chain {:?}",
            r.subset_size, r.rounds, member, r.chain
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
