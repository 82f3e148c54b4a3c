// Robust ERM oracles for a finite class and for the constant functions.

use robreg::oracles::{rerm_constant, rerm_finite};
use robreg::{ConstantClass, FiniteClass, HypothesisClass, Instance, LabeledExample, PerturbationMap, Result};

pub fn run() -> Result<()> {
    let class = FiniteClass::new(vec![
        vec![0.1, 0.1, 0.1, 0.1],
        vec![0.1, 0.2, 0.3, 0.4],
        vec![0.5, 0.5, 0.5, 0.5],
    ])?;
    let u = PerturbationMap::grid_ball(4, 1);
    let sample = vec![LabeledExample::new(1, 0.2)?, LabeledExample::new(2, 0.3)?];

    match rerm_finite(&class, &sample, &u, 0.15) {
        Ok(h) => println!(
            "0.15-RERM picks {:?}",
            (0..4).map(|x| h.eval(Instance(x))).collect::<Vec<_>>()
        ),
        Err(e) => println!("0.15-RERM: {e}"),
    }
    if let Err(e) = rerm_finite(&class, &sample, &u, 0.05) {
        println!("0.05-RERM: {e}");
    }

    let h = rerm_constant(&sample, &u, 0.1)?;
    println!("constant RERM: {}", h.eval(Instance(0)));

    let noisy = vec![
        LabeledExample::new(0, 0.1)?,
        LabeledExample::new(1, 0.12)?,
        LabeledExample::new(2, 0.9)?,
        LabeledExample::new(3, 0.15)?,
    ];
    let fit = ConstantClass.max_fit_subset(&noisy, &PerturbationMap::identity(4), 0.05)?;
    println!("largest fittable subset: {:?}", fit.map(|f| f.indices));
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
