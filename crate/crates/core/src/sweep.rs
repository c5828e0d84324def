//! Coupling sweeps: one Bargmann invariant per coupling value.

use std::fmt::Write as _;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analytic::critical_coupling;
use crate::bargmann::{join_phase, speed, BargmannResult, DEFAULT_JUMP_THRESHOLD};
use crate::circuit::{Circuit, Orientation};
use crate::error::{Error, Result};
use crate::groundstate::{ground_state_with, SolverOptions};
use crate::sector::SymmetricSector;
use crate::spin_ops::{build_hamiltonian, ChainParams, Spin};

/// Everything about the chain except the coupling.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainSpec {
    pub sites: usize,
    pub spin: Spin,
    pub field: f64,
}

impl ChainSpec {
    /// Unit field, as on the Bloch sphere.
    pub fn new(sites: usize, spin: Spin) -> Self {
        Self {
            sites,
            spin,
            field: 1.0,
        }
    }

    pub fn params(&self, coupling: f64) -> Result<ChainParams> {
        ChainParams::new(self.sites, self.spin, coupling, self.field)
    }

    pub fn critical_coupling(&self) -> f64 {
        critical_coupling(self.field)
    }
}

/// How vertex ground states are obtained.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GroundMethod {
    /// Symmetric sector whenever it provably holds the ground state, else full.
    #[default]
    Auto,
    /// Dense or Lanczos on the full Hilbert space.
    Full,
    /// Translation/reflection-symmetric sector only.
    Symmetric,
}

#[derive(Clone, Debug)]
pub struct SweepOptions {
    pub method: GroundMethod,
    pub solver: SolverOptions,
    pub jump_threshold: f64,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self {
            method: GroundMethod::Auto,
            solver: SolverOptions::default(),
            jump_threshold: DEFAULT_JUMP_THRESHOLD,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub coupling: f64,
    /// `(J − J_c)/r`, present when the circuit has a radius.
    pub scaled_offset: Option<f64>,
    pub value: Complex64,
    pub magnitude: f64,
    pub phase: f64,
    pub near_degenerate: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CircuitInfo {
    pub vertex_count: usize,
    pub radius: Option<f64>,
    pub orientation: Option<Orientation>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepMetadata {
    pub chain: ChainSpec,
    pub critical_coupling: f64,
    pub circuit: CircuitInfo,
    pub grid: Vec<f64>,
    pub method: GroundMethod,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub records: Vec<SweepRecord>,
    pub joined_phase: Vec<f64>,
    pub extent: f64,
    /// One entry fewer than `records`.
    pub speed: Vec<f64>,
    pub metadata: SweepMetadata,
}

/// A sweep that stopped early, with the samples completed before the failure.
#[derive(Debug, Error)]
#[error("solver failed at J = {coupling}{}: {source}", vertex.map(|v| format!(", vertex {v}")).unwrap_or_default())]
pub struct SweepError {
    pub coupling: f64,
    pub vertex: Option<usize>,
    #[source]
    pub source: Error,
    pub completed: Vec<SweepRecord>,
}

/// `count` equally spaced couplings from `min` to `max` inclusive.
pub fn coupling_grid(min: f64, max: f64, count: usize) -> Result<Vec<f64>> {
    if !(min.is_finite() && max.is_finite()) {
        return Err(Error::InvalidGrid("grid bounds must be finite".into()));
    }
    match count {
        0 => Err(Error::InvalidGrid("grid needs at least one point".into())),
        1 if min == max => Ok(vec![min]),
        1 => Err(Error::InvalidGrid("a one-point grid needs min = max".into())),
        _ if !(max > min) => Err(Error::InvalidGrid("grid max must exceed min".into())),
        _ => {
            let step = (max - min) / (count - 1) as f64;
            Ok((0..count)
                .map(|i| if i == count - 1 { max } else { min + step * i as f64 })
                .collect())
        }
    }
}

/// `[J_c − 2r, J_c + 2r]` sampled at `count` points.
pub fn critical_window(field: f64, radius: f64, count: usize) -> Result<Vec<f64>> {
    let jc = critical_coupling(field);
    coupling_grid(jc - 2.0 * radius, jc + 2.0 * radius, count)
}

/// Ground-state engine bound to one chain and circuit.
pub struct VertexSolver<'a> {
    chain: ChainSpec,
    circuit: &'a Circuit,
    sector: Option<SymmetricSector>,
    solver: SolverOptions,
}

impl<'a> VertexSolver<'a> {
    pub fn new(chain: ChainSpec, circuit: &'a Circuit, options: &SweepOptions) -> Result<Self> {
        chain.params(0.0)?;
        // The sector argument needs a non-zero field with a component off the x axis.
        let sector_valid = chain.field != 0.0 && circuit.vertices().iter().all(|n| n.y().hypot(n.z()) > 0.0);
        let use_sector = match options.method {
            GroundMethod::Full => false,
            GroundMethod::Symmetric if !sector_valid => {
                return Err(Error::InvalidParams(
                    "the symmetric sector needs B ≠ 0 and no vertex on the x axis".into(),
                ))
            }
            GroundMethod::Symmetric | GroundMethod::Auto => sector_valid,
        };
        let sector = if use_sector {
            Some(SymmetricSector::new(chain.sites, chain.spin)?)
        } else {
            None
        };
        Ok(Self {
            chain,
            circuit,
            sector,
            solver: options.solver.clone(),
        })
    }

    pub fn method(&self) -> GroundMethod {
        if self.sector.is_some() {
            GroundMethod::Symmetric
        } else {
            GroundMethod::Full
        }
    }

    /// Bargmann invariant at one coupling, plus whether any vertex was
    /// near-degenerate. Errors carry the failing vertex.
    pub fn invariant(&self, coupling: f64) -> std::result::Result<(BargmannResult, bool), (Option<usize>, Error)> {
        let n = self.circuit.len();
        let mut flag = false;
        let overlaps = if let Some(sector) = &self.sector {
            let mut grounds = Vec::with_capacity(n);
            for (v, dir) in self.circuit.vertices().iter().enumerate() {
                let g = sector
                    .ground_state(coupling, self.chain.field, dir)
                    .map_err(|e| (Some(v), e))?;
                flag |= g.near_degenerate;
                grounds.push(g);
            }
            (0..n)
                .map(|s| sector.overlap(&grounds[s], &grounds[(s + 1) % n]))
                .collect()
        } else {
            let states = self.full_states(coupling, &mut flag)?;
            return crate::bargmann::bargmann_invariant(&states)
                .map(|r| (r, flag))
                .map_err(|e| (None, e));
        };
        BargmannResult::from_overlaps(overlaps)
            .map(|r| (r, flag))
            .map_err(|e| (None, e))
    }

    /// Full-space ground state of every vertex Hamiltonian.
    pub fn states(&self, coupling: f64) -> std::result::Result<Vec<Vec<Complex64>>, (Option<usize>, Error)> {
        if let Some(sector) = &self.sector {
            self.circuit
                .vertices()
                .iter()
                .enumerate()
                .map(|(v, dir)| {
                    sector
                        .ground_state(coupling, self.chain.field, dir)
                        .map(|g| sector.lift(&g))
                        .map_err(|e| (Some(v), e))
                })
                .collect()
        } else {
            self.full_states(coupling, &mut false)
        }
    }

    fn full_states(
        &self,
        coupling: f64,
        flag: &mut bool,
    ) -> std::result::Result<Vec<Vec<Complex64>>, (Option<usize>, Error)> {
        let params = self.chain.params(coupling).map_err(|e| (None, e))?;
        let mut out = Vec::with_capacity(self.circuit.len());
        for (v, dir) in self.circuit.vertices().iter().enumerate() {
            let g = build_hamiltonian(&params, dir)
                .and_then(|h| ground_state_with(&h, &self.solver))
                .map_err(|e| (Some(v), e))?;
            *flag |= g.near_degenerate;
            out.push(g.vector);
        }
        Ok(out)
    }
}

/// Runs the coupling sweep. Samples are computed in parallel on the current
/// rayon pool; results keep grid order.
pub fn sweep(
    chain: ChainSpec,
    circuit: &Circuit,
    grid: &[f64],
    options: &SweepOptions,
) -> std::result::Result<SweepResult, SweepError> {
    let early = |source: Error| SweepError {
        coupling: grid.first().copied().unwrap_or(f64::NAN),
        vertex: None,
        source,
        completed: Vec::new(),
    };
    if grid.is_empty() {
        return Err(early(Error::InvalidGrid("empty coupling grid".into())));
    }
    if grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(early(Error::InvalidGrid(
            "coupling grid must be strictly increasing".into(),
        )));
    }
    let solver = VertexSolver::new(chain, circuit, options).map_err(early)?;
    let jc = chain.critical_coupling();
    let radius = circuit.radius();

    let outcomes: Vec<_> = grid
        .par_iter()
        .map(|&coupling| {
            solver.invariant(coupling).map(|(r, flag)| SweepRecord {
                coupling,
                scaled_offset: radius.map(|r| (coupling - jc) / r),
                value: r.value,
                magnitude: r.magnitude,
                phase: r.phase,
                near_degenerate: flag,
            })
        })
        .collect();

    let mut records = Vec::with_capacity(grid.len());
    for (outcome, &coupling) in outcomes.into_iter().zip(grid) {
        match outcome {
            Ok(r) => records.push(r),
            Err((vertex, source)) => {
                return Err(SweepError {
                    coupling,
                    vertex,
                    source,
                    completed: records,
                })
            }
        }
    }

    let finish = |records: Vec<SweepRecord>| -> Result<SweepResult> {
        let phases: Vec<f64> = records.iter().map(|r| r.phase).collect();
        let mags: Vec<f64> = records.iter().map(|r| r.magnitude).collect();
        let joined = join_phase(&phases, &mags, options.jump_threshold)?;
        let values: Vec<Complex64> = records.iter().map(|r| r.value).collect();
        let speed = if records.len() >= 2 {
            speed(grid, &values)?
        } else {
            Vec::new()
        };
        Ok(SweepResult {
            records,
            joined_phase: joined.values,
            extent: joined.extent,
            speed,
            metadata: SweepMetadata {
                chain,
                critical_coupling: jc,
                circuit: CircuitInfo {
                    vertex_count: circuit.len(),
                    radius,
                    orientation: circuit.orientation(),
                },
                grid: grid.to_vec(),
                method: solver.method(),
            },
        })
    };
    finish(records.clone()).map_err(|source| SweepError {
        coupling: grid[0],
        vertex: None,
        source,
        completed: records,
    })
}

pub const CSV_HEADER: &str = "J,J_minus_Jc_over_r,re_C,im_C,abs_C,phi,phi_joined,speed,degenerate_flag";

/// CSV rows for sweep records; `joined` and `speed` may be shorter than
/// `records` (partial output), missing cells are left blank.
pub fn records_to_csv(records: &[SweepRecord], joined: &[f64], speed: &[f64]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    let cell = |v: Option<&f64>| v.map(|x| x.to_string()).unwrap_or_default();
    for (i, r) in records.iter().enumerate() {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            r.coupling,
            cell(r.scaled_offset.as_ref()),
            r.value.re,
            r.value.im,
            r.magnitude,
            r.phase,
            cell(joined.get(i)),
            cell(speed.get(i)),
            u8::from(r.near_degenerate)
        )
        .unwrap();
    }
    out
}

impl SweepResult {
    pub fn couplings(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.coupling).collect()
    }

    pub fn magnitudes(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.magnitude).collect()
    }

    pub fn phases(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.phase).collect()
    }

    pub fn to_csv(&self) -> String {
        records_to_csv(&self.records, &self.joined_phase, &self.speed)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("sweep results always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidParams(format!("bad sweep JSON: {e}")))
    }

    /// Index of the smallest `|C|`.
    pub fn argmin_magnitude(&self) -> usize {
        argmin(&self.magnitudes())
    }

    /// Full width at half depth of the `|C|` dip, in units of J.
    ///
    /// The baseline is the mean of the two endpoint magnitudes; the crossings
    /// of `(baseline + min)/2` on either side of the minimum are located by
    /// linear interpolation. Returns `None` when a side never crosses.
    pub fn dip_width(&self) -> Option<f64> {
        dip_width(&self.couplings(), &self.magnitudes())
    }
}

pub fn argmin(values: &[f64]) -> usize {
    values
        .iter()
        .enumerate()
        .fold(
            (0, f64::INFINITY),
            |(bi, bv), (i, &v)| if v < bv { (i, v) } else { (bi, bv) },
        )
        .0
}

pub fn argmax(values: &[f64]) -> usize {
    values
        .iter()
        .enumerate()
        .fold(
            (0, f64::NEG_INFINITY),
            |(bi, bv), (i, &v)| if v > bv { (i, v) } else { (bi, bv) },
        )
        .0
}

/// See [`SweepResult::dip_width`].
pub fn dip_width(x: &[f64], y: &[f64]) -> Option<f64> {
    if x.len() < 3 || x.len() != y.len() {
        return None;
    }
    let k = argmin(y);
    let baseline = 0.5 * (y[0] + y[y.len() - 1]);
    let half = 0.5 * (baseline + y[k]);
    let crossing = |i: usize, j: usize| x[i] + (half - y[i]) * (x[j] - x[i]) / (y[j] - y[i]);
    let left = (1..=k).rev().find(|&i| y[i - 1] >= half).map(|i| crossing(i - 1, i))?;
    let right = (k..y.len() - 1)
        .find(|&i| y[i + 1] >= half)
        .map(|i| crossing(i, i + 1))?;
    Some(right - left)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::polygon_circuit;

    #[test]
    fn grids() {
        assert_eq!(coupling_grid(0.0, 0.0, 1).unwrap(), vec![0.0]);
        let g = coupling_grid(0.0, 1.0, 5).unwrap();
        assert_eq!(g, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert!(coupling_grid(1.0, 0.0, 5).is_err());
        assert!(coupling_grid(0.0, 1.0, 1).is_err());
        let w = critical_window(1.0, 1e-5, 201).unwrap();
        assert_eq!(w.len(), 201);
        assert_eq!(w[100], 0.5);
        assert_eq!(w[200], 0.5 + 2e-5);
    }

    #[test]
    fn dip_width_of_a_triangle() {
        let x: Vec<f64> = (0..11).map(|i| i as f64).collect();
        let y: Vec<f64> = x.iter().map(|v| (v - 5.0f64).abs().min(4.0) / 4.0).collect();
        // baseline 1, min 0, half 0.5 reached at 3 and 7
        assert!((dip_width(&x, &y).unwrap() - 4.0).abs() < 1e-12);
        assert_eq!(dip_width(&x, &[1.0; 11]), None);
    }

    #[test]
    fn symmetric_and_full_sweeps_agree() {
        let circuit = polygon_circuit(12, 1e-2).unwrap();
        let grid = coupling_grid(0.45, 0.55, 5).unwrap();
        for (sites, spin) in [(3, Spin::Half), (5, Spin::Half), (3, Spin::One)] {
            let chain = ChainSpec::new(sites, spin);
            let full = sweep(
                chain,
                &circuit,
                &grid,
                &SweepOptions {
                    method: GroundMethod::Full,
                    ..Default::default()
                },
            )
            .unwrap();
            let sym = sweep(chain, &circuit, &grid, &SweepOptions::default()).unwrap();
            assert_eq!(sym.metadata.method, GroundMethod::Symmetric);
            for (a, b) in full.records.iter().zip(&sym.records) {
                assert!(
                    (a.value - b.value).norm() < 1e-9,
                    "N={sites} {spin}: {} vs {}",
                    a.value,
                    b.value
                );
            }
        }
    }

    #[test]
    fn csv_layout() {
        let circuit = polygon_circuit(6, 0.1).unwrap();
        let grid = coupling_grid(0.4, 0.6, 3).unwrap();
        let r = sweep(ChainSpec::new(2, Spin::Half), &circuit, &grid, &SweepOptions::default()).unwrap();
        let csv = r.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines.len(), 4);
        assert_eq!(lines[3].split(',').nth(7), Some(""));
        assert_eq!(lines[1].split(',').count(), 9);
        let back = SweepResult::from_json(&r.to_json()).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn failures_report_the_grid_point() {
        let circuit = polygon_circuit(4, 0.1).unwrap();
        let opts = SweepOptions {
            method: GroundMethod::Full,
            solver: SolverOptions {
                dense_cutoff: 0,
                max_iterations: Some(2),
                ..Default::default()
            },
            ..Default::default()
        };
        let err = sweep(ChainSpec::new(4, Spin::Half), &circuit, &[0.1, 0.2], &opts).unwrap_err();
        assert_eq!(err.coupling, 0.1);
        assert_eq!(err.vertex, Some(0));
        assert!(err.completed.is_empty());
    }
}
