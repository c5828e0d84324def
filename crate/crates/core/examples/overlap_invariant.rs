//! The cyclic overlap product of a few qubit states, its gauge invariance,
//! and the joined phase of a sequence with wrap-arounds.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use bargmann::bargmann::{bargmann_invariant, join_phase, speed, DEFAULT_JUMP_THRESHOLD};
use num_complex::Complex64;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let c = |re, im| Complex64::new(re, im);
    let zero = vec![c(1.0, 0.0), c(0.0, 0.0)];
    let plus = vec![c(FRAC_1_SQRT_2, 0.0), c(FRAC_1_SQRT_2, 0.0)];
    let plus_i = vec![c(FRAC_1_SQRT_2, 0.0), c(0.0, FRAC_1_SQRT_2)];
    let r = bargmann_invariant(&[zero.clone(), plus.clone(), plus_i.clone()])?;
    println!("C = {}, |C| = {}, φ/π = {}", r.value, r.magnitude, r.phase / PI);

    let u = Complex64::from_polar(1.0, 1.234);
    let plus_rotated: Vec<Complex64> = plus.iter().map(|z| z * u).collect();
    let g = bargmann_invariant(&[zero, plus_rotated, plus_i])?;
    println!("after a phase change on one state: C = {}", g.value);

    let raw = [0.1, 0.3, 0.5 + PI, 0.7 + PI, 0.9 - PI, 1.1 - PI];
    let joined = join_phase(&raw, &[1.0; 6], DEFAULT_JUMP_THRESHOLD)?;
    println!(
        "joined {:?}, extent {:.3}, jumps {:?}",
        joined.values, joined.extent, joined.jumps
    );

    let v = speed(&[0.0, 0.5, 1.0], &[c(1.0, 0.0), c(-1.0, 0.0), c(-1.0, 0.0)])?;
    println!("speed {v:?}");
    Ok(())
}
