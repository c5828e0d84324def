//! Classical ground-state data of the x-field chain across the critical
//! coupling, from the closed forms and from exhaustive enumeration.
//!
//!     cargo run --example classical_chain -- 5 1

use bargmann::analytic::{critical_coupling, hx_brute_force, hx_ground};
use bargmann::spin_ops::Spin;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let sites: usize = args.first().map(|s| s.parse()).transpose()?.unwrap_or(5);
    let spin: Spin = args.get(1).map(|s| s.parse()).transpose()?.unwrap_or(Spin::Half);
    let jc = critical_coupling(1.0);
    println!("N = {sites}, s = {spin}, J_c = {jc}");
    for j in [0.0, 0.25, jc, 0.75, 1.0] {
        let a = hx_ground(sites, j, 1.0, spin)?;
        let b = hx_brute_force(sites, j, 1.0, spin)?;
        println!(
            "J = {j:<5} E0 = {:<8} degeneracy {:<4} enumeration agrees: {}  e.g. {:?}",
            a.energy,
            a.degeneracy,
            (a.energy - b.energy).abs() < 1e-12 && a.degeneracy == b.degeneracy,
            a.representative_states.first()
        );
    }
    Ok(())
}
