//! Sweeps the coupling across [J_c − 2r, J_c + 2r] and summarizes the dip of
//! |C|, the speed peak and the joined phase. Optionally writes CSV and SVG.
//!
//!     cargo run --release --example critical_sweep -- 5 1/2 100 out/

use std::f64::consts::PI;
use std::fs;
use std::path::PathBuf;

use bargmann::circuit::polygon_circuit;
use bargmann::cli::sweep_plots;
use bargmann::spin_ops::Spin;
use bargmann::sweep::{argmax, critical_window, sweep, ChainSpec, SweepOptions};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let sites: usize = args.first().map(|s| s.parse()).transpose()?.unwrap_or(3);
    let spin: Spin = args.get(1).map(|s| s.parse()).transpose()?.unwrap_or(Spin::Half);
    let vertices: usize = args.get(2).map(|s| s.parse()).transpose()?.unwrap_or(100);
    let out = args.get(3).map(PathBuf::from);

    let radius = 1e-5;
    let circuit = polygon_circuit(vertices, radius)?;
    let grid = critical_window(1.0, radius, 201)?;
    let r = sweep(ChainSpec::new(sites, spin), &circuit, &grid, &SweepOptions::default())?;

    let k = r.argmin_magnitude();
    let m = r.magnitudes();
    let v = argmax(&r.speed);
    println!(
        "N = {sites}, s = {spin}, 𝒩 = {vertices}, method {:?}",
        r.metadata.method
    );
    println!(
        "min |C| = {:.3e} at (J − J_c)/r = {:+.3}; endpoints {:.4} {:.4}",
        m[k],
        r.records[k].scaled_offset.unwrap(),
        m[0],
        m[m.len() - 1]
    );
    println!("half-depth width {:.4} r", r.dip_width().unwrap_or(f64::NAN) / radius);
    println!("max speed {:.3e} between samples {v} and {}", r.speed[v], v + 1);
    println!("joined phase extent {:.4}π", r.extent / PI);
    println!(
        "near-degenerate samples: {}",
        r.records.iter().filter(|x| x.near_degenerate).count()
    );

    if let Some(dir) = out {
        fs::create_dir_all(&dir)?;
        fs::write(dir.join("sweep.csv"), r.to_csv())?;
        for (panel, plot) in sweep_plots(&r, &format!("N = {sites}")) {
            fs::write(dir.join(format!("sweep_{panel}.svg")), plot.to_svg())?;
        }
        println!("wrote {}", dir.display());
    }
    Ok(())
}
