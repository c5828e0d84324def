//! Cyclic overlap products, their phase, the joined phase curve and the
//! speed signature along a coupling sweep.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default discontinuity threshold for [`join_phase`].
pub const DEFAULT_JUMP_THRESHOLD: f64 = PI / 2.0;

/// Samples with `|C|` below this carry no usable phase.
pub const MAGNITUDE_FLOOR: f64 = 1e-12;

/// Input states must be unit vectors to this accuracy.
pub const NORM_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BargmannResult {
    pub value: Complex64,
    pub magnitude: f64,
    /// `arg C` in `(−π, π]`; zero when `C = 0`.
    pub phase: f64,
    /// `⟨ψ_s|ψ_{s+1}⟩` for `s = 0..𝒩`, the last one closing onto `ψ_0`.
    pub edge_overlaps: Vec<Complex64>,
}

impl BargmannResult {
    /// Multiplies the overlaps in vertex order.
    pub fn from_overlaps(edge_overlaps: Vec<Complex64>) -> Result<Self> {
        if edge_overlaps.len() < 3 {
            return Err(Error::TooFewVertices(edge_overlaps.len()));
        }
        let value = edge_overlaps.iter().fold(Complex64::new(1.0, 0.0), |acc, o| acc * o);
        let magnitude = value.norm();
        let phase = if magnitude > 0.0 { principal_arg(value) } else { 0.0 };
        Ok(Self {
            value,
            magnitude,
            phase,
            edge_overlaps,
        })
    }
}

/// `arg z` mapped onto `(−π, π]` (the negative real axis, including `−0.0`
/// imaginary parts, goes to `+π`).
pub fn principal_arg(z: Complex64) -> f64 {
    let a = z.im.atan2(z.re);
    if a <= -PI || (z.im == 0.0 && z.re < 0.0) {
        PI
    } else {
        a
    }
}

fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// `C = Π_s ⟨ψ_s|ψ_{s+1}⟩` with `ψ_𝒩 = ψ_0`.
pub fn bargmann_invariant<S: AsRef<[Complex64]>>(states: &[S]) -> Result<BargmannResult> {
    if states.len() < 3 {
        return Err(Error::TooFewVertices(states.len()));
    }
    let dim = states[0].as_ref().len();
    for (index, s) in states.iter().enumerate() {
        let s = s.as_ref();
        if s.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: s.len(),
            });
        }
        let norm = inner(s, s).re.sqrt();
        if !((norm - 1.0).abs() <= NORM_TOLERANCE) {
            return Err(Error::NotNormalized { index, norm });
        }
    }
    let n = states.len();
    let overlaps = (0..n)
        .map(|s| inner(states[s].as_ref(), states[(s + 1) % n].as_ref()))
        .collect();
    BargmannResult::from_overlaps(overlaps)
}

/// Same product accumulated as `Σ ln|o| + i Σ arg o`; only used as a check.
pub fn log_domain_product(overlaps: &[Complex64]) -> Complex64 {
    let (log_mag, angle) = overlaps
        .iter()
        .fold((0.0, 0.0), |(m, a), o| (m + o.norm().ln(), a + o.arg()));
    Complex64::from_polar(log_mag.exp(), angle)
}

/// `v_s = |C_{s+1} − C_s| / (J_{s+1} − J_s)`.
pub fn speed(couplings: &[f64], values: &[Complex64]) -> Result<Vec<f64>> {
    if couplings.len() != values.len() {
        return Err(Error::DimensionMismatch {
            expected: couplings.len(),
            actual: values.len(),
        });
    }
    if couplings.len() < 2 {
        return Err(Error::InvalidGrid("speed needs at least two samples".into()));
    }
    couplings
        .windows(2)
        .zip(values.windows(2))
        .map(|(j, c)| {
            let dj = j[1] - j[0];
            if !(dj > 0.0) {
                return Err(Error::InvalidGrid("coupling grid must be strictly increasing".into()));
            }
            Ok((c[1] - c[0]).norm() / dj)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JoinedPhase {
    /// One value per input sample; excluded samples are linearly interpolated.
    pub values: Vec<f64>,
    pub extent: f64,
    /// `(sample index, removed jump)` for every detected discontinuity.
    pub jumps: Vec<(usize, f64)>,
}

/// Removes discontinuities larger than `threshold` by subtracting each full
/// jump from all later samples, left to right. Samples whose magnitude is
/// below [`MAGNITUDE_FLOOR`] are skipped and filled in afterwards.
pub fn join_phase(phases: &[f64], magnitudes: &[f64], threshold: f64) -> Result<JoinedPhase> {
    if phases.len() != magnitudes.len() {
        return Err(Error::DimensionMismatch {
            expected: phases.len(),
            actual: magnitudes.len(),
        });
    }
    if !(threshold > 0.0) {
        return Err(Error::InvalidParams("jump threshold must be positive".into()));
    }
    let usable: Vec<usize> = (0..phases.len())
        .filter(|&i| magnitudes[i] >= MAGNITUDE_FLOOR && phases[i].is_finite())
        .collect();
    let Some(&first) = usable.first() else {
        return Err(Error::EmptySamples("every sample is below the magnitude floor".into()));
    };

    let mut values = vec![f64::NAN; phases.len()];
    let mut jumps = Vec::new();
    let mut offset = 0.0;
    values[first] = phases[first];
    for w in usable.windows(2) {
        let (prev, cur) = (w[0], w[1]);
        let delta = phases[cur] - phases[prev];
        if delta.abs() > threshold {
            offset += delta;
            jumps.push((cur, delta));
        }
        values[cur] = phases[cur] - offset;
    }

    // Fill excluded samples from their usable neighbours.
    for i in 0..values.len() {
        if !values[i].is_nan() {
            continue;
        }
        let left = usable.iter().rev().find(|&&u| u < i).copied();
        let right = usable.iter().find(|&&u| u > i).copied();
        values[i] = match (left, right) {
            (Some(l), Some(r)) => {
                let t = (i - l) as f64 / (r - l) as f64;
                values[l] + t * (values[r] - values[l])
            }
            (Some(l), None) => values[l],
            (None, Some(r)) => values[r],
            (None, None) => unreachable!(),
        };
    }

    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(JoinedPhase {
        values,
        extent: max - min,
        jumps,
    })
}
