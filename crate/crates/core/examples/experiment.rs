// A small learning-curve sweep from a JSON config, written as CSV.

use robreg::harness::{run_experiment, ExperimentConfig};
use robreg::Result;

const CONFIG: &str = r#"{
  "class": {"kind": "steps", "domain_size": 60, "levels": 3},
  "perturbation": {"kind": "grid_ball", "radius": 1},
  "target": {"member": 150},
  "pipeline": {"kind": "improper", "eta": 0.2},
  "m_grid": [10, 30],
  "trials": 2,
  "holdout": 100,
  "seed": 4
}"#;

pub fn run() -> Result<()> {
    let config = ExperimentConfig::from_json(CONFIG)?;
    print!("{}", run_experiment(&config)?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
