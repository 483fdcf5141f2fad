//! Transverse Hodge theory of regular K-contact 5-manifolds, computed on a
//! spectral model of the leaf space.
//!
//! The Reeb foliation of a regular K-contact 5-manifold fibers over a
//! symplectic 4-manifold, and basic forms are exactly pullbacks of forms on
//! that base. This crate takes the base to be the flat symplectic 4-torus
//! with an ω-compatible (possibly non-integrable) almost complex structure,
//! discretizes basic forms spectrally on a periodic grid, and certifies the
//! decompositions of degree-2 basic cohomology into Φ-invariant and
//! Φ-anti-invariant classes, and into bidegrees.
//!
//! Modules, bottom up:
//!
//! * [`pointwise_algebra`] exact fiberwise algebra on `Λ²D*`
//! * [`transverse_geometry`] model structures and adapted coframes
//! * [`discrete_forms`] spectral exterior calculus on the grid
//! * [`hodge_solver`] Laplacian, harmonic bases, Hodge decomposition
//! * [`cohomology_decomp`] certified subgroup dimensions and verdicts
//! * [`cli_report`] run configuration, subcommands and JSON reports

pub mod cli_report;
pub mod cohomology_decomp;
pub mod discrete_forms;
mod error;
pub mod exact;
pub mod exterior;
pub mod field_io;
pub mod hodge_solver;
pub mod linalg;
pub mod pointwise_algebra;
pub mod spectral;
pub mod transverse_geometry;

pub use error::{Error, Result};
