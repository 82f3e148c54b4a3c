// Sparsifying a weighted ensemble to a short unweighted median.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use robreg::hypothesis::Aggregation;
use robreg::sample::expand_pairs;
use robreg::sparsify::{default_k, sparsify, DEFAULT_MAX_ITERS};
use robreg::{Hypothesis, Instance, LabeledExample, PerturbationMap, Result, WeightedEnsemble};

pub fn run() -> Result<()> {
    let members: Vec<Hypothesis> = (0..12).map(|i| Hypothesis::constant(0.45 + 0.01 * i as f64)).collect();
    let mut members = members;
    members.push(Hypothesis::constant(0.95));
    let n = members.len();
    let mut alphas = vec![1.0; n];
    alphas[n - 1] = 0.2;
    let ensemble = WeightedEnsemble::new(members, alphas, vec![vec![0]; n], Aggregation::WeightedMedian)?;

    let u = PerturbationMap::grid_ball(6, 1);
    let sample: Vec<LabeledExample> = (0..6).map(|x| LabeledExample::new(x, 0.5)).collect::<Result<_>>()?;
    let pairs = expand_pairs(&sample, &u)?;

    let eta = 0.1;
    let k = default_k(1, eta, 0.2)?;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let s = sparsify(&ensemble, &pairs, eta, k, DEFAULT_MAX_ITERS, &mut rng)?;
    println!("k={k} picks {:?} accepted on draw {}", s.picks, s.iterations);
    println!(
        "full median {:.3}, sparse median {:.3}",
        ensemble.eval(Instance(0)),
        s.ensemble.eval(Instance(0))
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
