//! Numerical toolkit for the Beurling transform restricted to planar domains.
//!
//! The library evaluates `B_Ω f = B(χ_Ω f)|_Ω`, the Beurling (two-dimensional
//! Hilbert) transform of a function cut off to a bounded domain Ω, and
//! measures the regularity of inputs and outputs in weighted Campanato,
//! Lipschitz, and Bloch seminorms driven by a modulus of continuity ω.
//!
//! Module map:
//!
//! * [`moduli`] — moduli of continuity (power, log, tabulated), Dini
//!   integrals, regularity diagnostics, conjugate modulus.
//! * [`geometry`] — axis-aligned squares and planar domains (disks and
//!   star-shaped perturbations of the disk) with exact membership and
//!   refined boundary distance.
//! * [`grid`] — complex-valued samples on a uniform square grid, CSV I/O.
//! * [`transform`] — the Beurling transform by two independent routes:
//!   an FFT multiplier on a zero-padded grid and a direct principal-value
//!   quadrature.
//! * [`seminorms`] — dyadic square sweeps for Campanato seminorms, pairwise
//!   Lipschitz quotients, collar Bloch suprema, and mean-gap diagnostics.
//! * [`extension`] — reflection extensions across the domain boundary.
//! * [`harness`] — seeded test-function families, end-to-end experiments,
//!   and CSV reports.

pub mod error;
pub mod extension;
pub mod geometry;
pub mod grid;
pub mod harness;
pub mod moduli;
pub mod seminorms;
pub mod transform;

pub use error::{Error, Result};
pub use num_complex::Complex64;
