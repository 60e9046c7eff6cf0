//! Product-to-sum identities for higher derivatives of `cot` and `csc`, and
//! mechanical checks of the Dedekind-type reciprocity formulas that follow
//! from them.
//!
//! The central objects are the normalized periodic functions
//!
//! ```text
//! φ_N^{cot}(z) = Σ_n (z + n)^{-N}          (π cot πz for N = 1)
//! φ_N^{csc}(z) = Σ_n (-1)^n (z + n)^{-N}   (π csc πz for N = 1)
//! ```
//!
//! and products `Φ(z) = Π a_l^{m_l} φ_{m_l}(a_l z - w_l)` of them. The
//! [`engine`] expands `Φ` into a finite sum of shifted `φ_n` over the poles in
//! the fundamental strip and checks that expansion, and every reciprocity law
//! derived from it, against the brute-force evaluators in [`oracle`].
//!
//! Exact quantities (Bernoulli numbers, pole locations, shift parameters,
//! `ζ(2k)`-type constants) are carried as rationals; evaluated quantities are
//! [`ComplexP`] values at an explicit binary precision.

pub mod acceptance;
pub mod cli;
pub mod complex;
pub mod engine;
pub mod error;
pub mod exact_numbers;
pub mod laurent;
pub mod oracle;
pub mod poles;
pub mod report;
pub mod trig_kernel;

pub use complex::ComplexP;
pub use engine::{SamplePolicy, VerificationReport, Witness};
pub use error::{Error, Result};
pub use exact_numbers::{alpha, bernoulli, binom, laurent_alpha, pochhammer, Kind, PiScaled};
pub use laurent::{coeff_a, sgn, shift_test, ACoeff, ShiftTest};
pub use poles::{
    classify_case, compositions_k, enumerate_poles, multiplicity_d, residue_subsets, Params, PoleDatum, Sign,
};
pub use rug::{Integer, Rational};
pub use trig_kernel::{cot_poly, csc_poly, phi, phi_at_rational, TrigPoly};

/// Default working precision in bits.
pub const DEFAULT_PRECISION: u32 = 256;

/// Smallest precision accepted anywhere in the crate (IEEE double).
pub const MIN_PRECISION: u32 = 53;
