//! Builds the periodic chain Hamiltonian for a tilted field and prints the
//! lowest levels next to the classical x-field energy.
//!
//!     cargo run --example spin_chain_spectrum -- 4 1/2 0.7

use bargmann::analytic::hx_ground;
use bargmann::circuit::UnitVector;
use bargmann::groundstate::dense_spectrum;
use bargmann::spin_ops::{build_hamiltonian, build_hx, ChainParams, Spin};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let sites: usize = args.first().map(|s| s.parse()).transpose()?.unwrap_or(4);
    let spin: Spin = args.get(1).map(|s| s.parse()).transpose()?.unwrap_or(Spin::Half);
    let coupling: f64 = args.get(2).map(|s| s.parse()).transpose()?.unwrap_or(0.7);

    let params = ChainParams::new(sites, spin, coupling, 1.0)?;
    println!(
        "N = {sites}, s = {spin}, J = {coupling}, dimension {}",
        params.hilbert_dim()
    );

    let hx = build_hx(&params)?;
    let mut levels = dense_spectrum(&hx)?;
    levels.sort_by(f64::total_cmp);
    let classical = hx_ground(sites, coupling, 1.0, spin)?;
    println!("x field: lowest {:?}", &levels[..levels.len().min(6)]);
    println!(
        "classical: E0 = {}, degeneracy {}, states {:?}",
        classical.energy, classical.degeneracy, classical.representative_states
    );

    let tilted = UnitVector::normalize([1.0, 0.2, 0.1])?;
    let h = build_hamiltonian(&params, &tilted)?;
    let mut levels = dense_spectrum(&h)?;
    levels.sort_by(f64::total_cmp);
    println!(
        "tilted field {:?}: lowest {:?}",
        tilted.components(),
        &levels[..levels.len().min(6)]
    );
    println!(
        "nonzeros {}, hermiticity residual {:e}",
        h.nnz(),
        h.hermiticity_residual()
    );
    Ok(())
}
