//! Discretized circuits of field directions on the Bloch sphere.
//!
//! The standard circuit is a regular 𝒩-gon built in the tangent plane at x̂ and
//! pushed radially onto the unit sphere. The polygon is offset so that the edge
//! from vertex 𝒩−1 to vertex 0 is bisected by the x-axis and traversed towards +z:
//! every sweep therefore carries the critical field direction x̂ through the
//! middle of its wrap-around edge.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance on `‖n‖ = 1`.
pub const UNIT_TOLERANCE: f64 = 1e-12;

/// A field direction on the Bloch sphere.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 3]", into = "[f64; 3]")]
pub struct UnitVector {
    x: f64,
    y: f64,
    z: f64,
}

impl UnitVector {
    pub const X: Self = Self { x: 1.0, y: 0.0, z: 0.0 };
    pub const Y: Self = Self { x: 0.0, y: 1.0, z: 0.0 };
    pub const Z: Self = Self { x: 0.0, y: 0.0, z: 1.0 };

    /// Accepts components whose norm is 1 within [`UNIT_TOLERANCE`].
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let norm = (x * x + y * y + z * z).sqrt();
        if !norm.is_finite() || (norm - 1.0).abs() > UNIT_TOLERANCE {
            return Err(Error::NotUnitVector { norm });
        }
        Ok(Self { x, y, z })
    }

    /// Radially projects a non-zero vector onto the sphere.
    pub fn normalize(v: [f64; 3]) -> Result<Self> {
        let norm = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::NotUnitVector { norm });
        }
        Ok(Self {
            x: v[0] / norm,
            y: v[1] / norm,
            z: v[2] / norm,
        })
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    pub fn components(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }
}

impl TryFrom<[f64; 3]> for UnitVector {
    type Error = Error;

    fn try_from(v: [f64; 3]) -> Result<Self> {
        Self::new(v[0], v[1], v[2])
    }
}

impl From<UnitVector> for [f64; 3] {
    fn from(v: UnitVector) -> Self {
        v.components()
    }
}

/// Sense in which the polygon is traversed around x̂.
///
/// `Standard` runs counter-clockwise as seen from outside the sphere along +x̂;
/// `Reversed` is its mirror image in the x–z plane. Both cross the x-axis
/// towards +z on the wrap-around edge.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    #[default]
    Standard,
    Reversed,
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Orientation::Standard => f.write_str("standard"),
            Orientation::Reversed => f.write_str("reversed"),
        }
    }
}

impl FromStr for Orientation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "standard" | "ccw" => Ok(Orientation::Standard),
            "reversed" | "cw" => Ok(Orientation::Reversed),
            other => Err(Error::InvalidCircuit(format!("unknown orientation '{other}'"))),
        }
    }
}

/// An ordered, closed list of field directions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    vertex_count: usize,
    /// Circumradius of the generating planar polygon; `None` for raw vertex lists.
    radius: Option<f64>,
    orientation: Option<Orientation>,
    vertices: Vec<UnitVector>,
}

impl Circuit {
    /// Wraps an arbitrary vertex list. At least three vertices are required.
    pub fn from_vertices(vertices: Vec<UnitVector>) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(Error::TooFewVertices(vertices.len()));
        }
        Ok(Self {
            vertex_count: vertices.len(),
            radius: None,
            orientation: None,
            vertices,
        })
    }

    pub fn vertices(&self) -> &[UnitVector] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn radius(&self) -> Option<f64> {
        self.radius
    }

    pub fn orientation(&self) -> Option<Orientation> {
        self.orientation
    }

    /// The same closed path traversed backwards, starting from the same vertex.
    pub fn reversed(&self) -> Self {
        let mut vertices = Vec::with_capacity(self.vertices.len());
        vertices.push(self.vertices[0]);
        vertices.extend(self.vertices[1..].iter().rev().copied());
        Self {
            vertex_count: self.vertex_count,
            radius: self.radius,
            orientation: None,
            vertices,
        }
    }

    /// Cyclic relabelling: vertex `offset` becomes vertex 0.
    pub fn rotated(&self, offset: usize) -> Self {
        let mut vertices = self.vertices.clone();
        vertices.rotate_left(offset % self.vertices.len());
        Self {
            vertex_count: self.vertex_count,
            radius: self.radius,
            orientation: None,
            vertices,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("circuit serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let c: Self = serde_json::from_str(text).map_err(|e| Error::InvalidCircuit(e.to_string()))?;
        if c.vertices.len() < 3 {
            return Err(Error::TooFewVertices(c.vertices.len()));
        }
        if c.vertex_count != c.vertices.len() {
            return Err(Error::InvalidCircuit(format!(
                "vertex_count {} disagrees with {} listed vertices",
                c.vertex_count,
                c.vertices.len()
            )));
        }
        Ok(c)
    }
}

/// Regular polygon circuit with the default orientation.
pub fn polygon_circuit(vertex_count: usize, radius: f64) -> Result<Circuit> {
    polygon_circuit_oriented(vertex_count, radius, Orientation::Standard)
}

pub fn polygon_circuit_oriented(vertex_count: usize, radius: f64, orientation: Orientation) -> Result<Circuit> {
    if vertex_count < 3 {
        return Err(Error::TooFewVertices(vertex_count));
    }
    if !(radius > 0.0 && radius < 0.9) {
        return Err(Error::InvalidCircuit(format!(
            "radius must lie in (0, 0.9), got {radius}"
        )));
    }
    let n = vertex_count as f64;
    let half = PI / n;
    // Planar centre sits off the axis so that the wrap-around edge has its
    // midpoint at x̂; the reversed circuit is the mirror image y → −y.
    let side = match orientation {
        Orientation::Standard => 1.0,
        Orientation::Reversed => -1.0,
    };
    let centre_y = -side * radius * half.cos();
    let vertices = (0..vertex_count)
        .map(|t| {
            let angle = (2 * t + 1) as f64 * half;
            UnitVector::normalize([1.0, centre_y + side * radius * angle.cos(), radius * angle.sin()])
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Circuit {
        vertex_count,
        radius: Some(radius),
        orientation: Some(orientation),
        vertices,
    })
}

/// Solid angle `2π(1 − cos ρ)` of a right circular cone with `sin ρ = r`.
pub fn solid_angle_cone(radius: f64) -> Result<f64> {
    if !(radius > 0.0 && radius <= 1.0) {
        return Err(Error::InvalidCircuit(format!(
            "cone radius must lie in (0, 1], got {radius}"
        )));
    }
    // 1 − cos(arcsin r) = r² / (1 + √(1 − r²)), stable for small r.
    Ok(2.0 * PI * radius * radius / (1.0 + (1.0 - radius * radius).sqrt()))
}

/// Signed area of the spherical polygon bounded by great-circle arcs through
/// consecutive vertices; positive for counter-clockwise traversal seen from
/// outside the sphere.
///
/// The polygon is fanned into triangles from vertex 0. Each triangle's
/// spherical excess comes from `tan(E/2) = det[a, b, c] / (1 + a·b + b·c + c·a)`,
/// with the determinant taken on edge differences so tiny polygons keep their
/// relative precision.
pub fn solid_angle_polygon(circuit: &Circuit) -> Result<f64> {
    let v = circuit.vertices();
    if v.len() < 3 {
        return Err(Error::TooFewVertices(v.len()));
    }
    for (i, a) in v.iter().enumerate() {
        let b = &v[(i + 1) % v.len()];
        if a.dot(b) < -1.0 + 1e-12 {
            return Err(Error::InvalidCircuit(format!(
                "vertices {i} and {} are antipodal; the connecting arc is undefined",
                (i + 1) % v.len()
            )));
        }
    }
    let a = v[0].components();
    let total = v[1..]
        .windows(2)
        .map(|w| triangle_excess(a, w[0].components(), w[1].components()))
        .sum();
    Ok(total)
}

fn triangle_excess(a: [f64; 3], b: [f64; 3], c: [f64; 3]) -> f64 {
    let ab = sub(b, a);
    let ac = sub(c, a);
    let det = dot(a, cross(ab, ac));
    let denom = 1.0 + dot(a, b) + dot(b, c) + dot(c, a);
    2.0 * det.atan2(denom)
}

fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn check_invariants(c: &Circuit, radius: f64) {
        let v = c.vertices();
        for p in v {
            assert!((p.norm() - 1.0).abs() <= UNIT_TOLERANCE);
        }
        let last = v[v.len() - 1].components();
        let first = v[0].components();
        let mid = [
            0.5 * (last[0] + first[0]),
            0.5 * (last[1] + first[1]),
            0.5 * (last[2] + first[2]),
        ];
        assert!(mid[0] > 0.0);
        assert!(mid[1].abs() <= 1e-3 * radius * radius, "y offset {}", mid[1]);
        assert!(mid[2].abs() <= 1e-3 * radius * radius, "z offset {}", mid[2]);
        assert!(first[2] > last[2], "wrap-around edge must move towards +z");
    }

    #[test]
    fn four_gon_first_vertex_matches_hand_evaluation() {
        let c = polygon_circuit(4, 0.1).unwrap();
        let expected = UnitVector::normalize([1.0, 0.0, 0.1 * (PI / 4.0).sin()]).unwrap();
        let got = c.vertices()[0];
        for (a, b) in got.components().iter().zip(expected.components()) {
            assert!((a - b).abs() < 1e-15);
        }
        check_invariants(&c, 0.1);
    }

    #[test]
    fn default_circuit_is_valid() {
        let c = polygon_circuit(100, 1e-5).unwrap();
        assert_eq!(c.len(), 100);
        check_invariants(&c, 1e-5);
    }

    #[test]
    fn reversed_orientation_keeps_the_positive_z_crossing() {
        for &n in &[3, 7, 100] {
            let c = polygon_circuit_oriented(n, 0.3, Orientation::Reversed).unwrap();
            check_invariants(&c, 0.3);
            let fwd = solid_angle_polygon(&polygon_circuit(n, 0.3).unwrap()).unwrap();
            let rev = solid_angle_polygon(&c).unwrap();
            assert!((fwd + rev).abs() < 1e-12);
        }
    }

    #[test]
    fn preconditions_are_enforced() {
        assert_eq!(polygon_circuit(2, 0.1).unwrap_err(), Error::TooFewVertices(2));
        assert!(polygon_circuit(5, 0.0).is_err());
        assert!(polygon_circuit(5, -1.0).is_err());
        assert!(polygon_circuit(5, 0.95).is_err());
        assert!(Circuit::from_vertices(vec![UnitVector::X, UnitVector::Y]).is_err());
        assert!(UnitVector::new(1.0, 1e-5, 0.0).is_err());
        assert!(solid_angle_cone(0.0).is_err());
        assert!(solid_angle_cone(1.5).is_err());
    }

    #[test]
    fn octant_triangle_is_an_eighth_of_the_sphere() {
        let c = Circuit::from_vertices(vec![UnitVector::X, UnitVector::Y, UnitVector::Z]).unwrap();
        let omega = solid_angle_polygon(&c).unwrap();
        assert!((omega - PI / 2.0).abs() < 1e-14);
        assert!((solid_angle_polygon(&c.reversed()).unwrap() + PI / 2.0).abs() < 1e-14);
    }

    #[test]
    fn antipodal_edge_is_rejected() {
        let minus_x = UnitVector::new(-1.0, 0.0, 0.0).unwrap();
        let c = Circuit::from_vertices(vec![UnitVector::X, minus_x, UnitVector::Z]).unwrap();
        assert!(solid_angle_polygon(&c).is_err());
    }

    #[test]
    fn cone_values() {
        assert!((solid_angle_cone(1.0).unwrap() - 2.0 * PI).abs() < 1e-15);
        let direct = 2.0 * PI * (1.0 - (0.5f64).asin().cos());
        assert!((solid_angle_cone(0.5).unwrap() - direct).abs() < 1e-14);
        assert!((solid_angle_cone(0.5).unwrap() - 0.8418).abs() < 1e-4);
        let r = 1e-4;
        assert!((solid_angle_cone(r).unwrap() / (PI * r * r) - 1.0).abs() < 1e-8);
    }

    #[test]
    fn tiny_triangle_has_planar_area() {
        let r = 1e-4;
        let c = polygon_circuit(3, r).unwrap();
        let omega = solid_angle_polygon(&c).unwrap();
        let planar = 3.0 * 3f64.sqrt() / 4.0 * r * r;
        assert!((omega / planar - 1.0).abs() < 1e-6, "{omega} vs {planar}");
    }

    #[test]
    fn polygon_area_grows_with_vertex_count_towards_the_cone() {
        // The construction projects a tangent-plane circle, so it meets the cone
        // formula only to leading order in r; check at small r.
        let r = 0.01;
        let cone = solid_angle_cone(r).unwrap();
        let areas: Vec<f64> = [20, 50, 100, 200, 500]
            .iter()
            .map(|&n| solid_angle_polygon(&polygon_circuit(n, r).unwrap()).unwrap())
            .collect();
        for w in areas.windows(2) {
            assert!(w[1] > w[0]);
        }
        assert!(areas.iter().all(|&a| a < cone));
        assert!((areas[4] - cone).abs() / cone < 1e-3);
    }

    #[test]
    fn json_round_trip_is_exact() {
        let c = polygon_circuit(17, 0.123456789).unwrap();
        let back = Circuit::from_json(&c.to_json()).unwrap();
        assert_eq!(back, c);
    }

    proptest! {
        #[test]
        fn invariants_hold_on_a_grid(n in 3usize..400, r in 1e-6f64..0.85, reversed in any::<bool>()) {
            let o = if reversed { Orientation::Reversed } else { Orientation::Standard };
            let c = polygon_circuit_oriented(n, r, o).unwrap();
            check_invariants(&c, r);
        }

        #[test]
        fn area_is_invariant_under_relabelling(n in 3usize..60, r in 1e-3f64..0.8, offset in 0usize..60) {
            let c = polygon_circuit(n, r).unwrap();
            let a = solid_angle_polygon(&c).unwrap();
            let b = solid_angle_polygon(&c.rotated(offset)).unwrap();
            prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1e-300) + 1e-15);
            let rev = solid_angle_polygon(&c.reversed()).unwrap();
            prop_assert!((a + rev).abs() <= 1e-12 * a.abs() + 1e-15);
        }
    }
}
