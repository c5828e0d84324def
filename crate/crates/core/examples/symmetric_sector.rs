//! The translation/reflection-symmetric sector: size, and agreement of its
//! ground state with a full-space solve.

use bargmann::circuit::UnitVector;
use bargmann::groundstate::ground_state;
use bargmann::sector::SymmetricSector;
use bargmann::spin_ops::{build_hamiltonian, ChainParams, Spin};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (sites, spin) in [
        (5, Spin::Half),
        (9, Spin::Half),
        (11, Spin::Half),
        (5, Spin::One),
        (7, Spin::One),
    ] {
        let s = SymmetricSector::new(sites, spin)?;
        let full = spin.local_dim().pow(sites as u32);
        println!(
            "N = {sites:>2}, s = {spin}: {full:>5} states, {:>3} symmetric orbits",
            s.dim()
        );
    }

    let n = UnitVector::normalize([1.0, 1e-3, -2e-3])?;
    let sector = SymmetricSector::new(5, Spin::One)?;
    let reduced = sector.ground_state(0.5, 1.0, &n)?;
    let params = ChainParams::new(5, Spin::One, 0.5, 1.0)?;
    let full = ground_state(&build_hamiltonian(&params, &n)?)?;
    let lifted = sector.lift(&reduced);
    let overlap: num_complex::Complex64 = full.vector.iter().zip(&lifted).map(|(a, b)| a.conj() * b).sum();
    println!(
        "N = 5, s = 1 at J = 0.5: E0 sector {:.12} full {:.12}, |overlap| = {:.12}",
        reduced.energy,
        full.energy,
        overlap.norm()
    );
    Ok(())
}
