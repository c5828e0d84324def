//! Small dense kernels: symmetric tridiagonal eigenvalues by Sturm bisection,
//! eigenvectors by inverse iteration, and Householder reduction of real
//! symmetric matrices. Only the lowest few eigenpairs are ever needed.

/// Number of eigenvalues of the tridiagonal `(diag, off)` strictly below `x`.
fn sturm_count(diag: &[f64], off: &[f64], x: f64, pivmin: f64) -> usize {
    let mut count = 0;
    let mut q = 1.0;
    for i in 0..diag.len() {
        let b2 = if i == 0 { 0.0 } else { off[i - 1] * off[i - 1] };
        q = diag[i] - x - if i == 0 { 0.0 } else { b2 / q };
        if q.abs() < pivmin {
            q = -pivmin;
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

fn gershgorin(diag: &[f64], off: &[f64]) -> (f64, f64) {
    let n = diag.len();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let r = if i > 0 { off[i - 1].abs() } else { 0.0 } + if i + 1 < n { off[i].abs() } else { 0.0 };
        lo = lo.min(diag[i] - r);
        hi = hi.max(diag[i] + r);
    }
    (lo, hi)
}

/// The `k`-th smallest eigenvalue (0-based) of a symmetric tridiagonal matrix.
pub fn tridiagonal_eigenvalue(diag: &[f64], off: &[f64], k: usize) -> f64 {
    assert!(k < diag.len());
    assert_eq!(off.len() + 1, diag.len());
    let (mut lo, mut hi) = gershgorin(diag, off);
    let scale = lo.abs().max(hi.abs()).max(f64::MIN_POSITIVE);
    let pivmin = f64::MIN_POSITIVE.max(f64::EPSILON * f64::EPSILON * scale);
    lo -= 2.0 * f64::EPSILON * scale + pivmin;
    hi += 2.0 * f64::EPSILON * scale + pivmin;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if sturm_count(diag, off, mid, pivmin) > k {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Unit eigenvector of the tridiagonal for a (converged) eigenvalue `lambda`,
/// by inverse iteration with a partially pivoted LU factorization.
pub fn tridiagonal_eigenvector(diag: &[f64], off: &[f64], lambda: f64) -> Vec<f64> {
    let n = diag.len();
    if n == 1 {
        return vec![1.0];
    }
    let scale = diag
        .iter()
        .chain(off)
        .fold(0.0f64, |m, v| m.max(v.abs()))
        .max(f64::MIN_POSITIVE);
    let tiny = f64::EPSILON * scale;

    // Band LU of (T − λI) with row interchanges: rows hold u0 (diag), u1, u2.
    let mut u0 = vec![0.0; n];
    let mut u1 = vec![0.0; n];
    let mut u2 = vec![0.0; n];
    let mut mult = vec![0.0; n];
    let mut swapped = vec![false; n];

    let mut d = diag[0] - lambda;
    let mut e = if n > 1 { off[0] } else { 0.0 };
    for i in 0..n - 1 {
        let sub = off[i];
        let next_d = diag[i + 1] - lambda;
        let next_e = if i + 2 < n { off[i + 1] } else { 0.0 };
        if d.abs() >= sub.abs() {
            let piv = if d == 0.0 { tiny } else { d };
            let m = sub / piv;
            u0[i] = piv;
            u1[i] = e;
            u2[i] = 0.0;
            mult[i] = m;
            d = next_d - m * e;
            e = next_e;
        } else {
            let m = d / sub;
            u0[i] = sub;
            u1[i] = next_d;
            u2[i] = next_e;
            mult[i] = m;
            swapped[i] = true;
            d = e - m * next_d;
            e = -m * next_e;
        }
    }
    u0[n - 1] = if d.abs() < tiny { tiny } else { d };

    // Deterministic, non-degenerate starting vector.
    let mut x: Vec<f64> = (0..n).map(|i| 1.0 + 0.1 * ((i * 7 + 3) % 11) as f64 / 11.0).collect();
    for _ in 0..4 {
        // Forward: apply L^{-1} with the recorded interchanges.
        for i in 0..n - 1 {
            if swapped[i] {
                x.swap(i, i + 1);
            }
            x[i + 1] -= mult[i] * x[i];
        }
        // Backward: U x = y.
        for i in (0..n).rev() {
            let mut v = x[i];
            if i + 1 < n {
                v -= u1[i] * x[i + 1];
            }
            if i + 2 < n {
                v -= u2[i] * x[i + 2];
            }
            let piv = if u0[i].abs() < tiny {
                tiny.copysign(u0[i])
            } else {
                u0[i]
            };
            x[i] = v / piv;
        }
        let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            break;
        }
        x.iter_mut().for_each(|v| *v /= norm);
    }
    x
}

/// Householder reduction `A = Q T Qᵀ` of a real symmetric matrix, stored
/// row-major. The reflectors are kept so eigenvectors of `T` can be mapped back.
pub struct Tridiagonalization {
    n: usize,
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
    reflectors: Vec<(Vec<f64>, f64)>,
}

impl Tridiagonalization {
    /// Consumes the matrix; only its lower triangle needs to be valid.
    pub fn new(mut a: Vec<f64>, n: usize) -> Self {
        assert_eq!(a.len(), n * n);
        let mut diag = vec![0.0; n];
        let mut off = vec![0.0; n.saturating_sub(1)];
        let mut reflectors = Vec::with_capacity(n.saturating_sub(2));
        let mut p = vec![0.0; n];

        for k in 0..n.saturating_sub(2) {
            let m = n - k - 1;
            let mut v: Vec<f64> = (0..m).map(|i| a[(k + 1 + i) * n + k]).collect();
            let alpha = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            diag[k] = a[k * n + k];
            if alpha == 0.0 {
                off[k] = 0.0;
                reflectors.push((vec![0.0; m], 0.0));
                continue;
            }
            let beta_sign = if v[0] >= 0.0 { -alpha } else { alpha };
            v[0] -= beta_sign;
            let vnorm2 = v.iter().map(|x| x * x).sum::<f64>();
            let tau = 2.0 / vnorm2;
            off[k] = beta_sign;

            // p = tau · A22 v, using the lower triangle only.
            let base = k + 1;
            for i in 0..m {
                p[i] = 0.0;
            }
            for i in 0..m {
                let row = (base + i) * n + base;
                let vi = v[i];
                let mut acc = a[row + i] * vi;
                for j in 0..i {
                    let aij = a[row + j];
                    acc += aij * v[j];
                    p[j] += aij * vi;
                }
                p[i] += acc;
            }
            for i in 0..m {
                p[i] *= tau;
            }
            let kdot = tau * 0.5 * (0..m).map(|i| p[i] * v[i]).sum::<f64>();
            for i in 0..m {
                p[i] -= kdot * v[i];
            }
            // A22 ← A22 − v pᵀ − p vᵀ (lower triangle).
            for i in 0..m {
                let row = (base + i) * n + base;
                let (vi, pi) = (v[i], p[i]);
                for j in 0..=i {
                    a[row + j] -= vi * p[j] + pi * v[j];
                }
            }
            reflectors.push((v, tau));
        }
        if n >= 2 {
            diag[n - 2] = a[(n - 2) * n + n - 2];
            off[n - 2] = a[(n - 1) * n + n - 2];
        }
        if n >= 1 {
            diag[n - 1] = a[(n - 1) * n + n - 1];
        }
        Self {
            n,
            diag,
            off,
            reflectors,
        }
    }

    /// Maps an eigenvector of `T` back to one of `A`.
    pub fn back_transform(&self, y: &[f64]) -> Vec<f64> {
        assert_eq!(y.len(), self.n);
        let mut x = y.to_vec();
        for (k, (v, tau)) in self.reflectors.iter().enumerate().rev() {
            if *tau == 0.0 {
                continue;
            }
            let tail = &mut x[k + 1..];
            let s = tau * v.iter().zip(tail.iter()).map(|(a, b)| a * b).sum::<f64>();
            for (t, vi) in tail.iter_mut().zip(v) {
                *t -= s * vi;
            }
        }
        x
    }
}

/// Lowest eigenpair and second eigenvalue of a dense real symmetric matrix.
pub struct LowestPair {
    pub energy: f64,
    pub second: Option<f64>,
    pub vector: Vec<f64>,
}

pub fn symmetric_lowest(a: Vec<f64>, n: usize) -> LowestPair {
    let t = Tridiagonalization::new(a, n);
    let energy = tridiagonal_eigenvalue(&t.diag, &t.off, 0);
    let second = (n > 1).then(|| tridiagonal_eigenvalue(&t.diag, &t.off, 1));
    let y = tridiagonal_eigenvector(&t.diag, &t.off, energy);
    let vector = t.back_transform(&y);
    LowestPair { energy, second, vector }
}
