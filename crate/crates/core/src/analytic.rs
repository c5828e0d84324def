//! Closed-form and exhaustive oracles for the classical x-field chain and for
//! non-interacting spins.
//!
//! With the field along x both terms of the Hamiltonian are diagonal in the
//! Λ^x product basis, so the problem is classical: minimize
//! `J Σ m_k m_{k+1} + B Σ m_k` over `m_k ∈ {+1, −1}` (or `{+1, 0, −1}`).
//! Product states are written site 1 first, using `+`, `0`, `-` for the Λ^x
//! eigenvalues.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::circuit::{solid_angle_polygon, Circuit};
use crate::error::{Error, Result};
use crate::spin_ops::Spin;

/// Sign relating the Bargmann phase of non-interacting ground states to
/// `+N·2s·Ω/2`. Fixed by comparing the full pipeline at J = 0 against the
/// oriented polygon area.
pub const BERRY_PHASE_SIGN: f64 = -1.0;

/// Enumeration limit shared by the exhaustive oracles.
pub const ENUMERATION_CAP: usize = 2_000_000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassicalGroundInfo {
    pub energy: f64,
    pub degeneracy: usize,
    /// Every minimizing product state, sorted; empty when too many to list.
    pub representative_states: Vec<String>,
}

/// `J_c = |B|/2`
pub fn critical_coupling(field: f64) -> f64 {
    field.abs() / 2.0
}

fn check_chain(sites: usize, spin: Spin) -> Result<usize> {
    if sites < 2 {
        return Err(Error::InvalidParams(format!(
            "the classical oracle needs N ≥ 2, got {sites}"
        )));
    }
    let d = spin.local_dim();
    Ok(d)
}

fn values(spin: Spin) -> &'static [i32] {
    match spin {
        Spin::Half => &[1, -1],
        Spin::One => &[1, 0, -1],
    }
}

fn label(m: i32) -> char {
    match m {
        1 => '+',
        0 => '0',
        _ => '-',
    }
}

fn render(config: &[i32]) -> String {
    config.iter().map(|&m| label(m)).collect()
}

fn classical_energy(config: &[i32], coupling: f64, field: f64) -> f64 {
    let n = config.len();
    (0..n)
        .map(|k| coupling * (config[k] * config[(k + 1) % n]) as f64 + field * config[k] as f64)
        .sum()
}

fn tie_tolerance(sites: usize, coupling: f64, field: f64) -> f64 {
    1e-10 * (1.0 + coupling.abs() + field.abs()) * sites as f64
}

/// Classical ground-state data of the x-field chain.
///
/// Spin-1/2 uses the closed forms: all spins anti-aligned with the field below
/// `J_c`, and above it the Néel pair (even N) or the N translations of the
/// alternating pattern with one defect (odd N). At `J = J_c` every
/// configuration without two adjacent field-aligned spins is degenerate.
/// Spin-1 is solved by a min-plus transfer-matrix recursion around the ring.
pub fn hx_ground(sites: usize, coupling: f64, field: f64, spin: Spin) -> Result<ClassicalGroundInfo> {
    check_chain(sites, spin)?;
    match spin {
        Spin::Half => Ok(half_closed_form(sites, coupling, field)),
        Spin::One => transfer_matrix_ground(sites, coupling, field, spin),
    }
}

fn half_closed_form(n: usize, j: f64, b: f64) -> ClassicalGroundInfo {
    let jc = critical_coupling(b);
    let nf = n as f64;
    let tol = tie_tolerance(n, j, b);
    // Favoured orientation (anti-aligned with the field) and its opposite.
    let (fav, unfav) = if b >= 0.0 { (-1, 1) } else { (1, -1) };

    let mut states: Vec<Vec<i32>> = Vec::new();
    let energy;
    if b == 0.0 {
        if j < 0.0 {
            energy = nf * j;
            states.push(vec![1; n]);
            states.push(vec![-1; n]);
        } else if j == 0.0 {
            energy = 0.0;
            states = all_configs(n, Spin::Half);
        } else if n.is_multiple_of(2) {
            energy = -nf * j;
            states.push(alternating(n, 1, -1));
            states.push(alternating(n, -1, 1));
        } else {
            energy = -nf * j + 2.0 * j;
            for start in [1, -1] {
                let base = alternating(n, start, -start);
                states.extend(translations(&base));
            }
        }
    } else if (j - jc).abs() <= tol {
        energy = nf * (j - 2.0 * jc);
        states = hard_core_configs(n, fav, unfav);
    } else if j < jc {
        energy = nf * (j - 2.0 * jc);
        states.push(vec![fav; n]);
    } else if n.is_multiple_of(2) {
        energy = -nf * j;
        states.push(alternating(n, unfav, fav));
        states.push(alternating(n, fav, unfav));
    } else {
        energy = -nf * j + 2.0 * (j - jc);
        let base = alternating(n, fav, unfav);
        states.extend(translations(&base));
    }
    finish(energy, states)
}

fn alternating(n: usize, first: i32, second: i32) -> Vec<i32> {
    (0..n).map(|k| if k % 2 == 0 { first } else { second }).collect()
}

fn translations(base: &[i32]) -> Vec<Vec<i32>> {
    (0..base.len())
        .map(|s| {
            let mut v = base.to_vec();
            v.rotate_left(s);
            v
        })
        .collect()
}

/// Ring configurations in which no two neighbouring sites both hold `unfav`.
fn hard_core_configs(n: usize, fav: i32, unfav: i32) -> Vec<Vec<i32>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(n);
    fn grow(n: usize, fav: i32, unfav: i32, cur: &mut Vec<i32>, out: &mut Vec<Vec<i32>>) {
        if cur.len() == n {
            // The ring closes on itself: for N = 1 a site neighbours itself, for
            // N = 2 the doubled bond still only links sites 1 and 2.
            if !(n > 1 && cur[0] == unfav && cur[n - 1] == unfav) && !(n == 1 && cur[0] == unfav) {
                out.push(cur.clone());
            }
            return;
        }
        for &m in &[fav, unfav] {
            if m == unfav && cur.last() == Some(&unfav) {
                continue;
            }
            cur.push(m);
            grow(n, fav, unfav, cur, out);
            cur.pop();
        }
    }
    grow(n, fav, unfav, &mut current, &mut out);
    out
}

fn all_configs(n: usize, spin: Spin) -> Vec<Vec<i32>> {
    let vals = values(spin);
    let d = vals.len();
    let total = d.pow(n as u32);
    (0..total)
        .map(|mut idx| {
            let mut c = vec![0; n];
            for k in (0..n).rev() {
                c[k] = vals[idx % d];
                idx /= d;
            }
            c
        })
        .collect()
}

fn finish(energy: f64, states: Vec<Vec<i32>>) -> ClassicalGroundInfo {
    let mut reps: Vec<String> = states.iter().map(|c| render(c)).collect();
    reps.sort();
    reps.dedup();
    ClassicalGroundInfo {
        energy,
        degeneracy: reps.len(),
        representative_states: reps,
    }
}

/// Min-plus transfer matrix around the ring, with exact backtracking of every
/// minimizing configuration.
fn transfer_matrix_ground(n: usize, j: f64, b: f64, spin: Spin) -> Result<ClassicalGroundInfo> {
    let vals = values(spin);
    let d = vals.len();
    let tol = tie_tolerance(n, j, b);
    let bond = |a: i32, c: i32| j * (a * c) as f64 + b * a as f64;

    // best[s][k][c]: minimal energy of sites 0..=k given site 0 = s and site k = c,
    // counting the bonds 0→1 … (k−1)→k.
    let mut best = vec![vec![vec![f64::INFINITY; d]; n]; d];
    for s in 0..d {
        best[s][0][s] = 0.0;
        for k in 1..n {
            for c in 0..d {
                best[s][k][c] = (0..d)
                    .map(|p| best[s][k - 1][p] + bond(vals[p], vals[c]))
                    .fold(f64::INFINITY, f64::min);
            }
        }
    }
    let closing = |s: usize, c: usize| bond(vals[c], vals[s]);
    let energy = (0..d)
        .flat_map(|s| (0..d).map(move |c| (s, c)))
        .map(|(s, c)| best[s][n - 1][c] + closing(s, c))
        .fold(f64::INFINITY, f64::min);

    // Backtrack every path whose total is within `tol` of the optimum.
    let mut states = Vec::new();
    for s in 0..d {
        for c in 0..d {
            if n == 1 && c != s {
                continue;
            }
            let total = best[s][n - 1][c] + closing(s, c);
            if total - energy > tol {
                continue;
            }
            let mut path = vec![0usize; n];
            path[n - 1] = c;
            collect_paths(
                &best,
                s,
                n - 1,
                c,
                best[s][n - 1][c],
                &bond,
                vals,
                tol,
                &mut path,
                &mut states,
            );
            if states.len() > ENUMERATION_CAP {
                return Err(Error::InvalidParams("degenerate set too large to list".into()));
            }
        }
    }
    let configs: Vec<Vec<i32>> = states
        .into_iter()
        .map(|p: Vec<usize>| p.into_iter().map(|i| vals[i]).collect())
        .collect();
    Ok(finish(energy, configs))
}

#[allow(clippy::too_many_arguments)]
fn collect_paths(
    best: &[Vec<Vec<f64>>],
    s: usize,
    k: usize,
    c: usize,
    target: f64,
    bond: &dyn Fn(i32, i32) -> f64,
    vals: &[i32],
    tol: f64,
    path: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if k == 0 {
        if c == s {
            out.push(path.clone());
        }
        return;
    }
    for p in 0..vals.len() {
        let via = best[s][k - 1][p] + bond(vals[p], vals[c]);
        if via - target <= tol && via.is_finite() {
            path[k - 1] = p;
            collect_paths(best, s, k - 1, p, best[s][k - 1][p], bond, vals, tol, path, out);
        }
    }
}

/// Exhaustive minimization over every classical configuration.
pub fn hx_brute_force(sites: usize, coupling: f64, field: f64, spin: Spin) -> Result<ClassicalGroundInfo> {
    check_chain(sites, spin)?;
    let d = spin.local_dim();
    let total = (d as f64).powi(sites as i32);
    if total > ENUMERATION_CAP as f64 {
        return Err(Error::DimensionCap {
            dim: total as usize,
            cap: ENUMERATION_CAP,
        });
    }
    let tol = tie_tolerance(sites, coupling, field);
    let mut min = f64::INFINITY;
    let mut states: Vec<Vec<i32>> = Vec::new();
    for config in all_configs(sites, spin) {
        let e = classical_energy(&config, coupling, field);
        if e < min - tol {
            min = e;
            states.clear();
            states.push(config);
        } else if (e - min).abs() <= tol {
            min = min.min(e);
            states.push(config);
        }
    }
    // A late, slightly lower minimum may leave stale near-ties behind.
    states.retain(|c| classical_energy(c, coupling, field) - min <= tol);
    Ok(finish(min, states))
}

/// Wraps an angle into `(−π, π]`.
pub fn wrap_phase(phi: f64) -> f64 {
    let mut x = phi.rem_euclid(2.0 * PI);
    if x > PI {
        x -= 2.0 * PI;
    }
    x
}

/// Bargmann phase predicted for N non-interacting spins at J = 0 and positive
/// field: `N · 2s · Ω/2`, signed by [`BERRY_PHASE_SIGN`], wrapped into `(−π, π]`.
pub fn noninteracting_phase(sites: usize, spin: Spin, circuit: &Circuit) -> Result<f64> {
    let omega = solid_angle_polygon(circuit)?;
    Ok(wrap_phase(
        BERRY_PHASE_SIGN * sites as f64 * spin.twice() as f64 * omega / 2.0,
    ))
}
