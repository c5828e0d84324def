//! Single-site spin matrices and the many-body field-plus-XX Hamiltonian.
//!
//! Basis conventions: each site uses the Λ^z eigenbasis ordered by descending
//! eigenvalue, and site 1 is the most significant tensor factor, so the basis
//! index of a product state reads its local indices left to right.
//!
//! Normalization: spin-1/2 uses the Pauli matrices (eigenvalues ±1) and spin-1
//! the standard spin-1 matrices (eigenvalues −1, 0, +1). With this choice the
//! classical critical coupling of the x-field chain is |B|/2 for both.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::circuit::{UnitVector, UNIT_TOLERANCE};
use crate::error::{Error, Result};
use crate::sparse::HermitianOperator;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Spin quantum number of every site.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Spin {
    #[serde(rename = "1/2")]
    Half,
    #[serde(rename = "1")]
    One,
}

impl Spin {
    /// Local Hilbert-space dimension `2s + 1`.
    pub fn local_dim(self) -> usize {
        match self {
            Spin::Half => 2,
            Spin::One => 3,
        }
    }

    /// `2s`
    pub fn twice(self) -> u32 {
        match self {
            Spin::Half => 1,
            Spin::One => 2,
        }
    }

    /// Factor relating the spin generator to the Hamiltonian operator: `S^α = g·Λ^α`.
    pub fn generator_scale(self) -> f64 {
        match self {
            Spin::Half => 0.5,
            Spin::One => 1.0,
        }
    }

    /// Characters for product states in the local Λ^x eigenbasis, descending.
    pub fn x_labels(self) -> &'static [char] {
        match self {
            Spin::Half => &['+', '-'],
            Spin::One => &['+', '0', '-'],
        }
    }
}

impl fmt::Display for Spin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Spin::Half => f.write_str("1/2"),
            Spin::One => f.write_str("1"),
        }
    }
}

impl FromStr for Spin {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "1/2" => Ok(Spin::Half),
            "1" => Ok(Spin::One),
            other => Err(Error::UnsupportedSpin(format!(
                "'{other}' (expected the literal token 1/2 or 1)"
            ))),
        }
    }
}

/// Parameters of a periodic chain.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainParams {
    pub sites: usize,
    pub spin: Spin,
    pub coupling: f64,
    pub field: f64,
    pub periodic: bool,
}

impl ChainParams {
    pub fn new(sites: usize, spin: Spin, coupling: f64, field: f64) -> Result<Self> {
        let p = Self {
            sites,
            spin,
            coupling,
            field,
            periodic: true,
        };
        p.validate()?;
        Ok(p)
    }

    /// A single site is accepted: its ring closes on itself and the bond term
    /// becomes `J·(Λ^x)²`. The non-interacting Berry-phase checks use it.
    pub fn validate(&self) -> Result<()> {
        if self.sites == 0 {
            return Err(Error::InvalidParams("the chain needs at least one site".into()));
        }
        if !self.periodic {
            return Err(Error::InvalidParams("only periodic chains are supported".into()));
        }
        if !self.coupling.is_finite() || !self.field.is_finite() {
            return Err(Error::InvalidParams("coupling and field must be finite".into()));
        }
        let dim = (self.spin.local_dim() as f64).powi(self.sites as i32);
        if dim > (1u64 << 26) as f64 {
            return Err(Error::InvalidParams(format!(
                "Hilbert space of dimension {dim} is too large"
            )));
        }
        Ok(())
    }

    pub fn local_dim(&self) -> usize {
        self.spin.local_dim()
    }

    pub fn hilbert_dim(&self) -> usize {
        self.local_dim().pow(self.sites as u32)
    }

    pub fn with_coupling(&self, coupling: f64) -> Self {
        Self { coupling, ..*self }
    }
}

/// The three single-site operators Λ^x, Λ^y, Λ^z.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalOperators {
    pub spin: Spin,
    pub x: DMatrix<Complex64>,
    pub y: DMatrix<Complex64>,
    pub z: DMatrix<Complex64>,
}

impl LocalOperators {
    pub fn dim(&self) -> usize {
        self.spin.local_dim()
    }

    /// `n_x Λ^x + n_y Λ^y + n_z Λ^z`
    pub fn along(&self, n: &UnitVector) -> DMatrix<Complex64> {
        &self.x * Complex64::from(n.x()) + &self.y * Complex64::from(n.y()) + &self.z * Complex64::from(n.z())
    }

    /// Eigenbasis of Λ^x: eigenvalues in descending order and the matching
    /// columns. Phases are chosen so that Λ^z is real with non-negative entries
    /// in this basis.
    pub fn x_eigenbasis(&self) -> (Vec<f64>, DMatrix<Complex64>) {
        let c = |v: f64| Complex64::new(v, 0.0);
        match self.spin {
            Spin::Half => {
                let h = std::f64::consts::FRAC_1_SQRT_2;
                (
                    vec![1.0, -1.0],
                    DMatrix::from_row_slice(2, 2, &[c(h), c(h), c(h), c(-h)]),
                )
            }
            Spin::One => {
                let h = std::f64::consts::FRAC_1_SQRT_2;
                (
                    vec![1.0, 0.0, -1.0],
                    DMatrix::from_row_slice(
                        3,
                        3,
                        &[c(0.5), c(h), c(0.5), c(h), c(0.0), c(-h), c(0.5), c(-h), c(0.5)],
                    ),
                )
            }
        }
    }
}

/// Single-site operators for spin `s`.
pub fn local_operators(spin: Spin) -> LocalOperators {
    let c = |re: f64, im: f64| Complex64::new(re, im);
    match spin {
        Spin::Half => LocalOperators {
            spin,
            x: DMatrix::from_row_slice(2, 2, &[ZERO, c(1.0, 0.0), c(1.0, 0.0), ZERO]),
            y: DMatrix::from_row_slice(2, 2, &[ZERO, c(0.0, -1.0), c(0.0, 1.0), ZERO]),
            z: DMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), ZERO, ZERO, c(-1.0, 0.0)]),
        },
        Spin::One => {
            let h = std::f64::consts::FRAC_1_SQRT_2;
            LocalOperators {
                spin,
                x: DMatrix::from_row_slice(
                    3,
                    3,
                    &[ZERO, c(h, 0.0), ZERO, c(h, 0.0), ZERO, c(h, 0.0), ZERO, c(h, 0.0), ZERO],
                ),
                y: DMatrix::from_row_slice(
                    3,
                    3,
                    &[
                        ZERO,
                        c(0.0, -h),
                        ZERO,
                        c(0.0, h),
                        ZERO,
                        c(0.0, -h),
                        ZERO,
                        c(0.0, h),
                        ZERO,
                    ],
                ),
                z: DMatrix::from_row_slice(
                    3,
                    3,
                    &[c(1.0, 0.0), ZERO, ZERO, ZERO, ZERO, ZERO, ZERO, ZERO, c(-1.0, 0.0)],
                ),
            }
        }
    }
}

/// Parses a spin token and returns its operators; unknown tokens are rejected.
pub fn local_operators_for(token: &str) -> Result<LocalOperators> {
    Ok(local_operators(token.parse()?))
}

/// A product of single-site operators with a scalar prefactor.
struct Term<'a> {
    coeff: Complex64,
    factors: Vec<(usize, &'a DMatrix<Complex64>)>,
}

/// Assembles `Σ coeff · Π op_site` over the chain basis.
fn assemble(sites: usize, d: usize, terms: &[Term<'_>]) -> Result<HermitianOperator> {
    let dim = d.pow(sites as u32);
    let place: Vec<usize> = (0..sites).map(|k| d.pow((sites - 1 - k) as u32)).collect();

    // Factors acting on the same site are multiplied in order first.
    let merged: Vec<(Complex64, Vec<(usize, DMatrix<Complex64>)>)> = terms
        .iter()
        .map(|t| {
            let mut by_site: Vec<(usize, DMatrix<Complex64>)> = Vec::new();
            for &(k, op) in &t.factors {
                if op.nrows() != d || op.ncols() != d {
                    return Err(Error::DimensionMismatch {
                        expected: d,
                        actual: op.nrows(),
                    });
                }
                match by_site.iter_mut().find(|(s, _)| *s == k) {
                    Some((_, m)) => *m = &*m * op,
                    None => by_site.push((k, op.clone())),
                }
            }
            Ok((t.coeff, by_site))
        })
        .collect::<Result<_>>()?;

    let mut triplets = Vec::new();
    for col in 0..dim {
        for (coeff, factors) in &merged {
            if *coeff == ZERO {
                continue;
            }
            // Expand the product of local matrices column by column.
            let mut partial: Vec<(usize, Complex64)> = vec![(col, *coeff)];
            for (k, op) in factors {
                let b = (col / place[*k]) % d;
                let mut next = Vec::with_capacity(partial.len() * d);
                for &(row, amp) in &partial {
                    for a in 0..d {
                        let m = op[(a, b)];
                        if m != ZERO {
                            next.push((row + a * place[*k] - b * place[*k], amp * m));
                        }
                    }
                }
                partial = next;
            }
            triplets.extend(partial.into_iter().map(|(row, v)| (row, col, v)));
        }
    }
    HermitianOperator::from_triplets(dim, triplets)
}

/// `I^{⊗(k−1)} ⊗ op ⊗ I^{⊗(N−k)}` for a 1-based site index `k`.
pub fn site_operator(op: &DMatrix<Complex64>, k: usize, params: &ChainParams) -> Result<HermitianOperator> {
    params.validate()?;
    if k == 0 || k > params.sites {
        return Err(Error::SiteOutOfRange {
            index: k,
            sites: params.sites,
        });
    }
    let d = params.local_dim();
    if op.nrows() != d || op.ncols() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            actual: op.nrows().max(op.ncols()),
        });
    }
    assemble(
        params.sites,
        d,
        &[Term {
            coeff: Complex64::new(1.0, 0.0),
            factors: vec![(k - 1, op)],
        }],
    )
}

/// `J Σ_k Λ^x_k Λ^x_{k+1} + B Σ_k n·Λ_k` with periodic closure.
///
/// The bond sum is taken literally over k = 1..N, so for N = 2 the bond (1,2)
/// appears twice and for N = 1 the single bond is `(Λ^x_1)²`.
pub fn build_hamiltonian(params: &ChainParams, n: &UnitVector) -> Result<HermitianOperator> {
    params.validate()?;
    let norm = n.norm();
    if (norm - 1.0).abs() > UNIT_TOLERANCE {
        return Err(Error::NotUnitVector { norm });
    }
    let ops = local_operators(params.spin);
    let field_op = ops.along(n);
    let sites = params.sites;
    let mut terms = Vec::with_capacity(2 * sites);
    for k in 0..sites {
        terms.push(Term {
            coeff: Complex64::from(params.coupling),
            factors: vec![(k, &ops.x), ((k + 1) % sites, &ops.x)],
        });
        terms.push(Term {
            coeff: Complex64::from(params.field),
            factors: vec![(k, &field_op)],
        });
    }
    assemble(sites, params.local_dim(), &terms)
}

/// The field-along-x chain, whose two terms commute.
pub fn build_hx(params: &ChainParams) -> Result<HermitianOperator> {
    build_hamiltonian(params, &UnitVector::X)
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::SymmetricEigen;

    fn eigenvalues(m: &DMatrix<Complex64>) -> Vec<f64> {
        let mut e: Vec<f64> = SymmetricEigen::new(m.clone()).eigenvalues.iter().copied().collect();
        e.sort_by(|a, b| a.partial_cmp(b).unwrap());
        e
    }

    fn kron_chain(ops: &[DMatrix<Complex64>]) -> DMatrix<Complex64> {
        ops.iter().skip(1).fold(ops[0].clone(), |acc, op| acc.kronecker(op))
    }

    /// Dense reference built from explicit Kronecker products.
    fn dense_reference(params: &ChainParams, n: &UnitVector) -> DMatrix<Complex64> {
        let ops = local_operators(params.spin);
        let d = params.local_dim();
        let id = DMatrix::<Complex64>::identity(d, d);
        let sites = params.sites;
        let embed = |placed: &[(usize, &DMatrix<Complex64>)]| {
            let factors: Vec<DMatrix<Complex64>> = (0..sites)
                .map(|s| {
                    placed
                        .iter()
                        .filter(|(k, _)| *k == s)
                        .fold(id.clone(), |acc, (_, op)| acc * *op)
                })
                .collect();
            kron_chain(&factors)
        };
        let dim = params.hilbert_dim();
        let mut h = DMatrix::<Complex64>::zeros(dim, dim);
        let field_op = ops.along(n);
        for k in 0..sites {
            let kp = (k + 1) % sites;
            let bond = if kp == k {
                embed(&[(k, &(&ops.x * &ops.x))])
            } else {
                embed(&[(k, &ops.x), (kp, &ops.x)])
            };
            h += bond * Complex64::from(params.coupling);
            h += embed(&[(k, &field_op)]) * Complex64::from(params.field);
        }
        h
    }

    #[test]
    fn pauli_x_rows() {
        let ops = local_operators(Spin::Half);
        assert_eq!(ops.x[(0, 1)], Complex64::new(1.0, 0.0));
        assert_eq!(ops.x[(1, 0)], Complex64::new(1.0, 0.0));
        assert_eq!(ops.x[(0, 0)], ZERO);
        assert_eq!(ops.x[(1, 1)], ZERO);
        assert_eq!(eigenvalues(&ops.z), vec![-1.0, 1.0]);
        assert_eq!(ops.z[(0, 0)].re, 1.0, "Λ^z basis is descending");
    }

    #[test]
    fn spin_one_spectra() {
        let ops = local_operators(Spin::One);
        for m in [&ops.x, &ops.y, &ops.z] {
            let e = eigenvalues(m);
            for (a, b) in e.iter().zip([-1.0, 0.0, 1.0]) {
                assert!((a - b).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn commutator_is_proportional_to_z() {
        for spin in [Spin::Half, Spin::One] {
            let ops = local_operators(spin);
            let comm = &ops.x * &ops.y - &ops.y * &ops.x;
            // [Λx, Λy] = i·(2 for Pauli, 1 for spin-1)·Λz
            let k = match spin {
                Spin::Half => 2.0,
                Spin::One => 1.0,
            };
            let expected = &ops.z * Complex64::new(0.0, k);
            assert!((comm - expected).camax() < 1e-14);
            for m in [&ops.x, &ops.y, &ops.z] {
                assert!((m - m.adjoint()).camax() == 0.0);
            }
        }
    }

    #[test]
    fn x_eigenbasis_diagonalizes_x_and_makes_z_nonnegative() {
        for spin in [Spin::Half, Spin::One] {
            let ops = local_operators(spin);
            let (vals, v) = ops.x_eigenbasis();
            let vx = v.adjoint() * &ops.x * &v;
            let vz = v.adjoint() * &ops.z * &v;
            let vy = v.adjoint() * &ops.y * &v;
            for i in 0..ops.dim() {
                for j in 0..ops.dim() {
                    let target = if i == j { vals[i] } else { 0.0 };
                    assert!((vx[(i, j)] - Complex64::from(target)).norm() < 1e-14);
                    assert!(vz[(i, j)].im.abs() < 1e-14);
                    assert!(vz[(i, j)].re > -1e-14);
                    assert!(vy[(i, j)].re.abs() < 1e-14);
                }
            }
            assert!((v.adjoint() * &v - DMatrix::identity(ops.dim(), ops.dim())).camax() < 1e-14);
        }
    }

    #[test]
    fn unknown_spin_token_is_rejected() {
        assert!(matches!(local_operators_for("3/2"), Err(Error::UnsupportedSpin(_))));
        assert!(local_operators_for("1/2").is_ok());
    }

    #[test]
    fn identity_embeds_to_identity() {
        let p = ChainParams::new(3, Spin::One, 0.0, 0.0).unwrap();
        let id = DMatrix::<Complex64>::identity(3, 3);
        for k in 1..=3 {
            assert_eq!(site_operator(&id, k, &p).unwrap(), HermitianOperator::identity(27));
        }
    }

    #[test]
    fn z_on_first_of_two_sites() {
        let p = ChainParams::new(2, Spin::Half, 0.0, 0.0).unwrap();
        let op = site_operator(&local_operators(Spin::Half).z, 1, &p).unwrap();
        let dense = op.to_dense();
        let expected = [1.0, 1.0, -1.0, -1.0];
        for i in 0..4 {
            for j in 0..4 {
                let target = if i == j { expected[i] } else { 0.0 };
                assert_eq!(dense[(i, j)], Complex64::from(target));
            }
        }
    }

    #[test]
    fn x_on_middle_site_matches_kronecker() {
        let p = ChainParams::new(3, Spin::Half, 0.0, 0.0).unwrap();
        let ops = local_operators(Spin::Half);
        let op = site_operator(&ops.x, 2, &p).unwrap();
        let id = DMatrix::<Complex64>::identity(2, 2);
        let reference = kron_chain(&[id.clone(), ops.x.clone(), id]);
        assert_eq!(op.nnz(), 8);
        assert_eq!(op.to_dense(), reference);
    }

    #[test]
    fn site_operator_errors() {
        let p = ChainParams::new(3, Spin::Half, 0.0, 0.0).unwrap();
        let ops = local_operators(Spin::Half);
        assert!(matches!(
            site_operator(&ops.x, 0, &p),
            Err(Error::SiteOutOfRange { .. })
        ));
        assert!(matches!(
            site_operator(&ops.x, 4, &p),
            Err(Error::SiteOutOfRange { .. })
        ));
        let spin_one = local_operators(Spin::One);
        assert!(matches!(
            site_operator(&spin_one.x, 1, &p),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn zero_parameters_give_zero_operator() {
        let p = ChainParams::new(4, Spin::Half, 0.0, 0.0).unwrap();
        let h = build_hamiltonian(&p, &UnitVector::Z).unwrap();
        assert_eq!(h.nnz(), 0);
        assert_eq!(h.dim(), 16);
    }

    #[test]
    fn two_site_ring_counts_its_bond_twice() {
        let p = ChainParams::new(2, Spin::Half, 1.0, 0.0).unwrap();
        let h = build_hamiltonian(&p, &UnitVector::X).unwrap();
        let e = eigenvalues(&h.to_dense());
        for (a, b) in e.iter().zip([-2.0, -2.0, 2.0, 2.0]) {
            assert!((a - b).abs() < 1e-12, "{e:?}");
        }
    }

    #[test]
    fn field_only_ground_energy() {
        let p = ChainParams::new(3, Spin::Half, 0.0, 1.0).unwrap();
        let h = build_hamiltonian(&p, &UnitVector::Z).unwrap();
        let e = eigenvalues(&h.to_dense());
        assert!((e[0] + 3.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_non_unit_direction() {
        let p = ChainParams::new(3, Spin::Half, 1.0, 1.0).unwrap();
        let bad: UnitVector = serde_json::from_str("[1.0, 0.0, 0.0]").unwrap();
        assert!(build_hamiltonian(&p, &bad).is_ok());
        assert!(serde_json::from_str::<UnitVector>("[1.0, 0.1, 0.0]").is_err());
        assert!(ChainParams::new(0, Spin::Half, 1.0, 1.0).is_err());
        assert!(ChainParams::new(3, Spin::Half, f64::NAN, 1.0).is_err());
    }

    #[test]
    fn hx_is_the_x_direction_special_case() {
        for spin in [Spin::Half, Spin::One] {
            let p = ChainParams::new(4, spin, 0.7, -1.3).unwrap();
            assert_eq!(build_hx(&p).unwrap(), build_hamiltonian(&p, &UnitVector::X).unwrap());
        }
    }

    #[test]
    fn sparse_assembly_matches_dense_kronecker() {
        let dirs = [
            UnitVector::X,
            UnitVector::Z,
            UnitVector::normalize([0.3, -0.5, 0.8]).unwrap(),
        ];
        for sites in 1..=4 {
            for n in &dirs {
                let p = ChainParams::new(sites, Spin::Half, 0.37, -1.1).unwrap();
                let h = build_hamiltonian(&p, n).unwrap();
                assert_eq!(h.dim(), 1 << sites);
                let diff = (h.to_dense() - dense_reference(&p, n)).camax();
                assert!(diff < 1e-14, "N={sites}: {diff}");
                assert!(h.hermiticity_residual() <= 1e-14 * h.max_abs());
            }
        }
        for sites in 1..=3 {
            let p = ChainParams::new(sites, Spin::One, -0.8, 0.6).unwrap();
            let n = dirs[2];
            let h = build_hamiltonian(&p, &n).unwrap();
            assert_eq!(h.dim(), 3usize.pow(sites as u32));
            assert!((h.to_dense() - dense_reference(&p, &n)).camax() < 1e-14);
        }
    }

    #[test]
    fn spectrum_is_invariant_under_rotations_about_x() {
        for spin in [Spin::Half, Spin::One] {
            let sites = if spin == Spin::Half { 4 } else { 3 };
            let p = ChainParams::new(sites, spin, 0.9, 1.0).unwrap();
            let base = eigenvalues(&build_hamiltonian(&p, &UnitVector::Z).unwrap().to_dense());
            for theta in [0.3f64, 1.1, 2.5, -0.7] {
                let n = UnitVector::new(0.0, theta.sin(), theta.cos()).unwrap();
                let e = eigenvalues(&build_hamiltonian(&p, &n).unwrap().to_dense());
                for (a, b) in e.iter().zip(&base) {
                    assert!((a - b).abs() < 1e-10);
                }
            }
        }
    }
}
