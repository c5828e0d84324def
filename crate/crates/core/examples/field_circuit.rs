//! Polygonal field circuits around the x axis and their solid angles.
//!
//!     cargo run --example field_circuit -- 0.1

use bargmann::circuit::{
    polygon_circuit, polygon_circuit_oriented, solid_angle_cone, solid_angle_polygon, Orientation,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let radius: f64 = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(0.1);
    println!("cone solid angle at r = {radius}: {:.12}", solid_angle_cone(radius)?);
    for vertices in [4, 10, 50, 100, 300, 1000] {
        let c = polygon_circuit(vertices, radius)?;
        println!(
            "𝒩 = {vertices:>4}: polygon solid angle {:.12}",
            solid_angle_polygon(&c)?
        );
    }
    let c = polygon_circuit_oriented(4, radius, Orientation::Reversed)?;
    println!("reversed 4-gon:\n{}", c.to_json());
    Ok(())
}
