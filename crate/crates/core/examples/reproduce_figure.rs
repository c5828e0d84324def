//! Writes the data and SVG panels of one figure preset.
//!
//!     cargo run --release --example reproduce_figure -- fig4 figures/

use std::path::PathBuf;

use bargmann::cli::{reproduce, Figure};
use clap::ValueEnum;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let figure = Figure::from_str(args.first().map(String::as_str).unwrap_or("fig6"), true)?;
    let dir = args
        .get(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("figures"));
    let files = reproduce(figure, &dir, 0)?;
    for f in files {
        println!("{}", dir.join(f).display());
    }
    Ok(())
}
