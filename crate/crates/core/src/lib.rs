//! Bargmann invariants of ground states of periodic spin chains whose field
//! direction is carried around a small polygon on the unit sphere.
//!
//! The pieces, bottom up:
//!
//! - [`spin_ops`]: local spin matrices and the many-body Hamiltonian
//!   `J Σ Λˣ_k Λˣ_{k+1} + B Σ n·Λ_k` on a ring.
//! - [`circuit`]: polygonal field circuits and spherical solid angles.
//! - [`groundstate`]: dense and Lanczos lowest eigenpairs with degeneracy flags.
//! - [`sector`]: the same ground states inside the translation/reflection
//!   symmetric subspace, used for long sweeps.
//! - [`bargmann`]: cyclic overlap products, phase joining and speed.
//! - [`sweep`]: one invariant per coupling value, CSV and JSON output.
//! - [`analytic`]: classical x-field ground states and the non-interacting
//!   Berry phase, used as oracles.
//! - [`cli`] and [`plot`]: the command-line front end and SVG panels.

pub mod analytic;
pub mod bargmann;
pub mod circuit;
pub mod cli;
pub mod error;
pub mod groundstate;
pub mod linalg;
pub mod plot;
pub mod sector;
pub mod sparse;
pub mod spin_ops;
pub mod sweep;

pub use bargmann::{bargmann_invariant, BargmannResult};
pub use circuit::{polygon_circuit, Circuit, Orientation, UnitVector};
pub use error::{Error, Result};
pub use spin_ops::{ChainParams, Spin};
pub use sweep::{sweep, ChainSpec, SweepResult};
