//! Ground states restricted to the fully symmetric sector of the ring.
//!
//! A rotation about x leaves the XX bonds and the x-field untouched, so every
//! field direction `n` can be written as `U(θ) H(n_x, 0, m) U(θ)†` with
//! `m = √(n_y² + n_z²)` and `U(θ) = exp(−iθ Σ_k S^x_k)`. In the product basis of
//! Λ^x eigenstates, `H(n_x, 0, m)` is real, its off-diagonal part comes only
//! from the transverse term and has a single sign, and single-site flips connect
//! every configuration. By Perron–Frobenius its ground state is then unique and
//! invariant under every lattice symmetry, so it lives in the span of
//! dihedral orbits (translations and reflection) of Λ^x product states.
//!
//! That span has dimension ≈ d^N / 2N, which makes dense diagonalization cheap
//! enough for long sweeps. `U(θ)` is diagonal in the same basis and constant
//! on each orbit, so overlaps between vertices reduce to weighted sums over
//! orbits.

use num_complex::Complex64;

use crate::circuit::UnitVector;
use crate::error::{Error, Result};
use crate::groundstate::NEAR_DEGENERATE;
use crate::linalg::symmetric_lowest;
use crate::spin_ops::{local_operators, Spin};

/// Configurations in the Λ^x basis are limited to this many.
pub const SECTOR_CONFIG_CAP: usize = 1 << 24;

/// Dihedral-symmetric subspace of a periodic chain, in the Λ^x product basis.
#[derive(Clone, Debug)]
pub struct SymmetricSector {
    sites: usize,
    spin: Spin,
    /// Orbit index of every Λ^x product configuration.
    orbit_of: Vec<u32>,
    /// Smallest configuration index in each orbit.
    representatives: Vec<usize>,
    sizes: Vec<usize>,
    /// `Σ_k λ_k λ_{k+1}` per orbit (literal periodic sum).
    bonds: Vec<f64>,
    /// `Σ_k λ_k` per orbit.
    magnetization: Vec<f64>,
    /// Reduced transverse operator, dense row-major.
    transverse: Vec<f64>,
}

/// Ground state of one vertex Hamiltonian inside the symmetric sector.
#[derive(Clone, Debug, PartialEq)]
pub struct SectorGround {
    pub energy: f64,
    /// Gap to the next level inside the sector.
    pub gap: f64,
    pub residual: f64,
    pub near_degenerate: bool,
    /// Real orbit amplitudes, normalized, with a non-negative sum.
    pub amplitudes: Vec<f64>,
    /// Rotation angle θ about x that maps the real problem onto the vertex.
    pub angle: f64,
}

impl SymmetricSector {
    pub fn new(sites: usize, spin: Spin) -> Result<Self> {
        if sites == 0 {
            return Err(Error::InvalidParams("the chain needs at least one site".into()));
        }
        let d = spin.local_dim();
        let total = (d as f64).powi(sites as i32);
        if total > SECTOR_CONFIG_CAP as f64 {
            return Err(Error::DimensionCap {
                dim: total as usize,
                cap: SECTOR_CONFIG_CAP,
            });
        }
        let total = total as usize;
        let place: Vec<usize> = (0..sites).map(|k| d.pow((sites - 1 - k) as u32)).collect();
        let digits = |c: usize| -> Vec<usize> { (0..sites).map(|k| (c / place[k]) % d).collect() };
        let compose = |ds: &[usize]| -> usize { ds.iter().zip(&place).map(|(a, p)| a * p).sum() };

        let unassigned = u32::MAX;
        let mut orbit_of = vec![unassigned; total];
        let mut representatives = Vec::new();
        let mut sizes = Vec::new();
        let mut image = vec![0usize; sites];
        for c in 0..total {
            if orbit_of[c] != unassigned {
                continue;
            }
            let id = representatives.len() as u32;
            let ds = digits(c);
            let mut size = 0;
            for shift in 0..sites {
                for mirror in [false, true] {
                    for k in 0..sites {
                        let src = if mirror {
                            (sites + shift - k) % sites
                        } else {
                            (k + shift) % sites
                        };
                        image[k] = ds[src];
                    }
                    let g = compose(&image);
                    if orbit_of[g] == unassigned {
                        orbit_of[g] = id;
                        size += 1;
                    }
                }
            }
            representatives.push(c);
            sizes.push(size);
        }

        let ops = local_operators(spin);
        let (lambda, basis) = ops.x_eigenbasis();
        let zloc = basis.adjoint() * &ops.z * &basis;

        let dim = representatives.len();
        let mut bonds = Vec::with_capacity(dim);
        let mut magnetization = Vec::with_capacity(dim);
        let mut transverse = vec![0.0; dim * dim];
        for (o, &rep) in representatives.iter().enumerate() {
            let ds = digits(rep);
            bonds.push((0..sites).map(|k| lambda[ds[k]] * lambda[ds[(k + 1) % sites]]).sum());
            magnetization.push(ds.iter().map(|&i| lambda[i]).sum());
            for k in 0..sites {
                let b = ds[k];
                for a in 0..d {
                    let amp = zloc[(a, b)].re;
                    if a == b || amp == 0.0 {
                        continue;
                    }
                    let target = rep + a * place[k] - b * place[k];
                    let o2 = orbit_of[target] as usize;
                    transverse[o2 * dim + o] += amp * (sizes[o] as f64 / sizes[o2] as f64).sqrt();
                }
            }
        }

        Ok(Self {
            sites,
            spin,
            orbit_of,
            representatives,
            sizes,
            bonds,
            magnetization,
            transverse,
        })
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn spin(&self) -> Spin {
        self.spin
    }

    /// Number of orbits.
    pub fn dim(&self) -> usize {
        self.representatives.len()
    }

    pub fn orbit_sizes(&self) -> &[usize] {
        &self.sizes
    }

    /// Dense reduced Hamiltonian for `J Σ ΛxΛx + B Σ (n_x Λ^x + m Λ^z)`.
    pub fn reduced_hamiltonian(&self, coupling: f64, field: f64, n_x: f64, m: f64) -> Vec<f64> {
        let dim = self.dim();
        let mut h: Vec<f64> = self.transverse.iter().map(|t| field * m * t).collect();
        for o in 0..dim {
            h[o * dim + o] += coupling * self.bonds[o] + field * n_x * self.magnetization[o];
        }
        h
    }

    /// Ground state of the vertex Hamiltonian with field direction `n`.
    pub fn ground_state(&self, coupling: f64, field: f64, n: &UnitVector) -> Result<SectorGround> {
        let m = n.y().hypot(n.z());
        let angle = (-n.y()).atan2(n.z());
        let dim = self.dim();
        let h = self.reduced_hamiltonian(coupling, field, n.x(), m);
        let norm_one = (0..dim)
            .map(|c| (0..dim).map(|r| h[r * dim + c].abs()).sum::<f64>())
            .fold(0.0, f64::max);

        let (energy, second, mut amplitudes) = if dim == 1 {
            (h[0], f64::INFINITY, vec![1.0])
        } else {
            let pair = symmetric_lowest(h.clone(), dim);
            (pair.energy, pair.second.unwrap_or(f64::INFINITY), pair.vector)
        };
        let norm = amplitudes.iter().map(|a| a * a).sum::<f64>().sqrt();
        let sign = if amplitudes.iter().sum::<f64>() < 0.0 {
            -1.0
        } else {
            1.0
        };
        amplitudes.iter_mut().for_each(|a| *a *= sign / norm);

        let residual = (0..dim)
            .map(|r| {
                let hv: f64 = (0..dim).map(|c| h[r * dim + c] * amplitudes[c]).sum();
                (hv - energy * amplitudes[r]).powi(2)
            })
            .sum::<f64>()
            .sqrt();
        if !residual.is_finite() {
            return Err(Error::NotConverged {
                iterations: 0,
                residual,
            });
        }
        let gap = (second - energy).max(0.0);
        Ok(SectorGround {
            energy,
            gap,
            residual,
            near_degenerate: gap < NEAR_DEGENERATE * norm_one,
            amplitudes,
            angle,
        })
    }

    /// `⟨ψ_a|ψ_b⟩` for two sector ground states of this chain.
    pub fn overlap(&self, a: &SectorGround, b: &SectorGround) -> Complex64 {
        let g = self.spin.generator_scale();
        let delta = b.angle - a.angle;
        a.amplitudes
            .iter()
            .zip(&b.amplitudes)
            .zip(&self.magnetization)
            .map(|((x, y), mag)| Complex64::from_polar(x * y, -delta * g * mag))
            .sum()
    }

    /// Expands a sector ground state into the full Λ^z product basis used by
    /// [`crate::spin_ops::build_hamiltonian`].
    pub fn lift(&self, ground: &SectorGround) -> Vec<Complex64> {
        let d = self.spin.local_dim();
        let g = self.spin.generator_scale();
        let total = self.orbit_of.len();
        let mut psi: Vec<Complex64> = (0..total)
            .map(|c| {
                let o = self.orbit_of[c] as usize;
                let amp = ground.amplitudes[o] / (self.sizes[o] as f64).sqrt();
                Complex64::from_polar(amp, -ground.angle * g * self.magnetization[o])
            })
            .collect();
        let (_, basis) = local_operators(self.spin).x_eigenbasis();
        let mut scratch = vec![Complex64::new(0.0, 0.0); d];
        for k in 0..self.sites {
            let stride = d.pow((self.sites - 1 - k) as u32);
            for start in 0..total {
                if !(start / stride).is_multiple_of(d) {
                    continue;
                }
                for (a, s) in scratch.iter_mut().enumerate() {
                    *s = (0..d).map(|b| basis[(a, b)] * psi[start + b * stride]).sum();
                }
                for (a, s) in scratch.iter().enumerate() {
                    psi[start + a * stride] = *s;
                }
            }
        }
        psi
    }
}
