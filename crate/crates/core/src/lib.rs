//! Numerical laboratory for perturbed time-frequency point sequences and their
//! generating entire functions in the Bargmann-Fock space.
//!
//! The library is organized around four stages:
//!
//! 1. [`sequences`] constructs the point families (the square-lattice family
//!    `Γ_ν` and the axis-supported family `Γ` of Ascensi-Lyubarskii-Seip type),
//!    applies multiplicative perturbations `γ ↦ γ·e^{δ_γ}e^{iθ_γ}`, and computes
//!    separation and logarithmic density functionals.
//! 2. [`products`] evaluates the genus-2 generating products of those sequences
//!    in log-domain (log-modulus + phase) with a certified truncation tail bound.
//!    Values of order `e^{π|z|²/2}` never leave log space.
//! 3. [`fock`] provides the Bargmann transform, reproducing kernels, weighted
//!    membership integrals over polar grids, and Gram-matrix diagnostics.
//! 4. [`estimates`] samples compensated log-ratios along paths, fits growth
//!    exponents, and drives the completeness/minimality phase-transition sweeps.
//!
//! All operations are pure functions of their inputs; [`sequences::PointSequence`]
//! is immutable after construction and safe to share across threads.

pub mod error;
pub mod estimates;
pub mod fock;
pub mod numerics;
pub mod products;
pub mod sequences;

pub use error::{Error, Result};

/// Complex double-precision scalar used throughout.
pub type C64 = num_complex::Complex64;
