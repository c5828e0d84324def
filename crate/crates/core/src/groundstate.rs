//! Lowest eigenpair and gap of a Hermitian operator.
//!
//! Small operators are diagonalized densely. Larger ones use a Lanczos
//! iteration with full reorthogonalization, followed by a second Lanczos run
//! deflated against the converged ground state to obtain the gap. Both paths
//! are deterministic: the Lanczos start vectors come from a ChaCha8 stream
//! seeded with [`START_SEED`].

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{tridiagonal_eigenvalue, tridiagonal_eigenvector};
use crate::sparse::HermitianOperator;

/// Seed of the ChaCha8 stream that produces Lanczos start vectors.
pub const START_SEED: u64 = 0x00BA_4641_4E4E;

/// Largest dimension `dense_spectrum` will accept.
pub const DENSE_SPECTRUM_CAP: usize = 4096;

/// Default crossover from dense to Lanczos.
pub const DEFAULT_DENSE_CUTOFF: usize = 512;

/// Residual target relative to `max(1, ‖H‖₁)`.
pub const DEFAULT_TOLERANCE: f64 = 1e-10;

/// Gap below which a solution is flagged as near-degenerate, relative to `‖H‖₁`.
pub const NEAR_DEGENERATE: f64 = 1e-8;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolverKind {
    Dense,
    Lanczos,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolverOptions {
    pub dense_cutoff: usize,
    /// Residual target as a fraction of `max(1, ‖H‖₁)`.
    pub tolerance: f64,
    /// Lanczos steps per run; `None` means the operator dimension.
    pub max_iterations: Option<usize>,
    pub seed: u64,
    /// Overrides the pseudo-random Lanczos start vector.
    pub start: Option<Vec<Complex64>>,
    /// Forces one solver regardless of dimension.
    pub force: Option<SolverKind>,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            dense_cutoff: DEFAULT_DENSE_CUTOFF,
            tolerance: DEFAULT_TOLERANCE,
            max_iterations: None,
            seed: START_SEED,
            start: None,
            force: None,
        }
    }
}

/// Ground state of a Hermitian operator.
#[derive(Clone, Debug, PartialEq)]
pub struct GroundSolution {
    pub energy: f64,
    /// Unit vector; its global phase makes the largest-magnitude entry real and positive.
    pub vector: Vec<Complex64>,
    /// `E₁ − E₀`, clamped at zero.
    pub gap: f64,
    /// `‖Hv − E₀v‖`
    pub residual: f64,
    pub near_degenerate: bool,
    pub solver: SolverKind,
}

pub fn ground_state(h: &HermitianOperator) -> Result<GroundSolution> {
    ground_state_with(h, &SolverOptions::default())
}

pub fn ground_state_with(h: &HermitianOperator, opts: &SolverOptions) -> Result<GroundSolution> {
    let dim = h.dim();
    if dim < 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            actual: dim,
        });
    }
    let kind = opts.force.unwrap_or(if dim <= opts.dense_cutoff {
        SolverKind::Dense
    } else {
        SolverKind::Lanczos
    });
    let norm = h.norm_one();
    let (energy, second, mut vector) = match kind {
        SolverKind::Dense => dense_lowest(h)?,
        SolverKind::Lanczos => lanczos_lowest(h, opts, norm)?,
    };
    fix_phase(&mut vector);
    let residual = residual_norm(h, &vector, energy);
    let gap = (second - energy).max(0.0);
    Ok(GroundSolution {
        energy,
        vector,
        gap,
        residual,
        near_degenerate: gap < NEAR_DEGENERATE * norm,
        solver: kind,
    })
}

/// Full ascending spectrum.
pub fn dense_spectrum(h: &HermitianOperator) -> Result<Vec<f64>> {
    Ok(dense_eigensystem(h, false)?.0)
}

/// Ascending spectrum with, optionally, the eigenvectors as matching columns.
pub fn dense_eigensystem(h: &HermitianOperator, with_vectors: bool) -> Result<(Vec<f64>, Option<DMatrix<Complex64>>)> {
    let dim = h.dim();
    if dim > DENSE_SPECTRUM_CAP {
        return Err(Error::DimensionCap {
            dim,
            cap: DENSE_SPECTRUM_CAP,
        });
    }
    if h.is_real() {
        let m = DMatrix::from_fn(dim, dim, |r, c| h.get(r, c).re);
        let eig = if with_vectors {
            SymmetricEigen::new(m)
        } else {
            let vals = m.symmetric_eigenvalues();
            return Ok((sorted(vals.iter().copied().collect()), None));
        };
        let order = argsort(eig.eigenvalues.as_slice());
        let vals = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let vecs = DMatrix::from_fn(dim, dim, |r, c| Complex64::from(eig.eigenvectors[(r, order[c])]));
        Ok((vals, Some(vecs)))
    } else {
        let m = h.to_dense();
        if !with_vectors {
            let vals = m.symmetric_eigenvalues();
            return Ok((sorted(vals.iter().copied().collect()), None));
        }
        let eig = SymmetricEigen::new(m);
        let order = argsort(eig.eigenvalues.as_slice());
        let vals = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let vecs = DMatrix::from_fn(dim, dim, |r, c| eig.eigenvectors[(r, order[c])]);
        Ok((vals, Some(vecs)))
    }
}

fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(|a, b| a.total_cmp(b));
    v
}

fn argsort(v: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..v.len()).collect();
    idx.sort_by(|&i, &j| v[i].total_cmp(&v[j]));
    idx
}

fn dense_lowest(h: &HermitianOperator) -> Result<(f64, f64, Vec<Complex64>)> {
    let (vals, vecs) = dense_eigensystem(h, true)?;
    let vecs = vecs.expect("requested eigenvectors");
    let vector = vecs.column(0).iter().copied().collect();
    Ok((vals[0], vals[1], vector))
}

/// Multiplies by a unit phase so the largest-magnitude entry (first on ties)
/// is real and positive.
fn fix_phase(v: &mut [Complex64]) {
    let mut best = 0;
    let mut best_norm = -1.0;
    for (i, x) in v.iter().enumerate() {
        let n = x.norm();
        if n > best_norm * (1.0 + 1e-12) {
            best = i;
            best_norm = n;
        }
    }
    if best_norm > 0.0 {
        let phase = v[best].conj() / best_norm;
        v.iter_mut().for_each(|x| *x *= phase);
    }
}

pub(crate) fn residual_norm(h: &HermitianOperator, v: &[Complex64], energy: f64) -> f64 {
    h.mul_vec(v)
        .iter()
        .zip(v)
        .map(|(hv, x)| (hv - x * energy).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

fn orthogonalize(w: &mut [Complex64], basis: &[Vec<Complex64>]) {
    for q in basis {
        let c = inner(q, w);
        w.iter_mut().zip(q).for_each(|(x, y)| *x -= c * y);
    }
}

fn random_unit(rng: &mut ChaCha8Rng, dim: usize) -> Vec<Complex64> {
    let mut v: Vec<Complex64> = (0..dim)
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    let n = norm(&v);
    v.iter_mut().for_each(|x| *x /= n);
    v
}

fn lanczos_lowest(h: &HermitianOperator, opts: &SolverOptions, hnorm: f64) -> Result<(f64, f64, Vec<Complex64>)> {
    let dim = h.dim();
    let tol = opts.tolerance * hnorm.max(1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let start = match &opts.start {
        Some(s) if s.len() != dim => {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: s.len(),
            })
        }
        Some(s) => s.clone(),
        None => random_unit(&mut rng, dim),
    };
    let cap = opts.max_iterations.unwrap_or(dim).min(dim).max(1);

    let ground = lanczos_run(h, start, &[], tol, cap, hnorm)?;

    // Deflated run for the second eigenvalue; its start vector continues the
    // same pseudo-random stream.
    let mut start2 = random_unit(&mut rng, dim);
    orthogonalize(&mut start2, std::slice::from_ref(&ground.1));
    let second = if norm(&start2) > 1e-8 {
        lanczos_run(h, start2, std::slice::from_ref(&ground.1), tol, cap, hnorm)?.0
    } else {
        f64::INFINITY
    };
    Ok((ground.0, second, ground.1))
}

/// One Lanczos run in the orthogonal complement of `deflate`. Returns the lowest
/// Ritz pair once its true residual is below `tol`.
fn lanczos_run(
    h: &HermitianOperator,
    mut q: Vec<Complex64>,
    deflate: &[Vec<Complex64>],
    tol: f64,
    cap: usize,
    hnorm: f64,
) -> Result<(f64, Vec<Complex64>)> {
    let dim = h.dim();
    orthogonalize(&mut q, deflate);
    let n0 = norm(&q);
    if !(n0 > 0.0) {
        return Err(Error::NotConverged {
            iterations: 0,
            residual: f64::INFINITY,
        });
    }
    q.iter_mut().for_each(|x| *x /= n0);

    let breakdown = f64::EPSILON * hnorm.max(1.0) * (dim as f64).sqrt();
    let mut basis: Vec<Vec<Complex64>> = vec![q];
    let mut alpha: Vec<f64> = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    let mut w = vec![ZERO; dim];
    let mut best = f64::INFINITY;

    loop {
        let j = basis.len() - 1;
        h.apply(&basis[j], &mut w);
        let a = inner(&basis[j], &w).re;
        alpha.push(a);
        // Two passes of classical Gram–Schmidt against the whole basis.
        orthogonalize(&mut w, &basis);
        orthogonalize(&mut w, &basis);
        orthogonalize(&mut w, deflate);
        let b = norm(&w);

        let steps = alpha.len();
        let at_cap = steps >= cap;
        let invariant = b <= breakdown;
        let check = invariant || at_cap || steps.is_multiple_of(5) || steps < 5;
        if check {
            let theta = tridiagonal_eigenvalue(&alpha, &beta, 0);
            let y = tridiagonal_eigenvector(&alpha, &beta, theta);
            let estimate = b * y[steps - 1].abs();
            if estimate <= tol || invariant || at_cap {
                let mut x = vec![ZERO; dim];
                for (coef, v) in y.iter().zip(&basis) {
                    x.iter_mut().zip(v).for_each(|(xi, vi)| *xi += vi * *coef);
                }
                let nx = norm(&x);
                x.iter_mut().for_each(|xi| *xi /= nx);
                let energy = inner(&x, &h.mul_vec(&x)).re;
                let r = residual_norm(h, &x, energy);
                best = best.min(r);
                if r <= tol {
                    return Ok((energy, x));
                }
                if invariant || at_cap {
                    return Err(Error::NotConverged {
                        iterations: steps,
                        residual: best,
                    });
                }
            }
        }
        beta.push(b);
        w.iter_mut().for_each(|x| *x /= b);
        let next = std::mem::replace(&mut w, vec![ZERO; dim]);
        basis.push(next);
    }
}
