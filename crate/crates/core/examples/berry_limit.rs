//! Non-interacting limit: the Bargmann phase of single spins approaches the
//! Berry phase of the enclosed solid angle as the circuit gets finer.

use std::f64::consts::PI;

use bargmann::analytic::noninteracting_phase;
use bargmann::circuit::{polygon_circuit, solid_angle_polygon};
use bargmann::spin_ops::Spin;
use bargmann::sweep::{sweep, ChainSpec, GroundMethod, SweepOptions};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let radius = 0.5;
    let opts = SweepOptions {
        method: GroundMethod::Full,
        ..Default::default()
    };
    for vertices in [20, 50, 100, 200] {
        let circuit = polygon_circuit(vertices, radius)?;
        let omega = solid_angle_polygon(&circuit)?;
        print!("𝒩 = {vertices:>3}  Ω/2 = {:.10}", omega / 2.0);
        for (sites, spin) in [(1, Spin::Half), (2, Spin::Half), (1, Spin::One)] {
            let r = sweep(ChainSpec::new(sites, spin), &circuit, &[0.0], &opts)?;
            let oracle = noninteracting_phase(sites, spin, &circuit)?;
            print!(
                "  N={sites},s={spin}: φ/π = {:+.8} (oracle {:+.8})",
                r.records[0].phase / PI,
                oracle / PI
            );
        }
        println!();
    }
    Ok(())
}
