//! Dense and Lanczos ground states of the same Hamiltonian.
//!
//!     cargo run --release --example ground_state_solvers

use std::time::Instant;

use bargmann::circuit::UnitVector;
use bargmann::groundstate::{ground_state_with, SolverKind, SolverOptions};
use bargmann::spin_ops::{build_hamiltonian, ChainParams, Spin};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let params = ChainParams::new(6, Spin::One, 0.45, 1.0)?;
    let h = build_hamiltonian(&params, &UnitVector::normalize([1.0, 0.05, 0.02])?)?;
    for kind in [SolverKind::Dense, SolverKind::Lanczos] {
        let t = Instant::now();
        let g = ground_state_with(
            &h,
            &SolverOptions {
                force: Some(kind),
                ..Default::default()
            },
        )?;
        println!(
            "{kind:?}: E0 = {:.12}, gap {:.3e}, residual {:.1e}, near-degenerate {}, {:.2}s",
            g.energy,
            g.gap,
            g.residual,
            g.near_degenerate,
            t.elapsed().as_secs_f64()
        );
    }
    Ok(())
}
