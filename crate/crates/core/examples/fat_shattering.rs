// Fat-shattering and dual fat-shattering of small finite classes.

use robreg::dimensions::{dual_fat_shattering, dual_fat_upper_bound, fat_shattering, ShatterCaps};
use robreg::{FiniteClass, Result};

pub fn run() -> Result<()> {
    let caps = ShatterCaps::default();
    let two = FiniteClass::new(vec![vec![0.2; 3], vec![0.8; 3]])?;
    println!(
        "constants {{0.2, 0.8}}: fat(0.3)={} fat(0.31)={}",
        fat_shattering(&two, 0.3, caps)?,
        fat_shattering(&two, 0.31, caps)?
    );

    // every {0,1} labelling of three points
    let cube: Vec<Vec<f64>> = (0..8u32)
        .map(|m| (0..3).map(|i| f64::from(m >> i & 1)).collect())
        .collect();
    let cube = FiniteClass::new(cube)?;
    for gamma in [0.25, 0.5, 0.6] {
        println!(
            "cube: gamma={gamma} fat={} dual={}",
            fat_shattering(&cube, gamma, caps)?,
            dual_fat_shattering(&cube, gamma, caps)?
        );
    }
    let f = fat_shattering(&cube, 0.25, caps)?;
    println!(
        "dual bound from fat(0.25)={f}: {:.1}",
        dual_fat_upper_bound(f, 0.5, 1.0)
    );

    let big = FiniteClass::new(vec![vec![0.0; 20]; 2])?;
    let tight = ShatterCaps {
        points: 8,
        hypotheses: 256,
    };
    println!(
        "over the point cap: {:?}",
        fat_shattering(&big, 0.1, tight).err().map(|e| e.to_string())
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
