//! Evaluation of `Φ` and its pole expansion `Ψ`, and verification of the
//! reciprocity laws that follow from comparing their Laurent data.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::{Float, Rational};

use crate::complex::ComplexP;
use crate::error::{Error, Result};
use crate::exact_numbers::{Kind, PiScaled};
use crate::poles::{enumerate_poles, Params};

pub mod classical;
pub mod expansion;
pub mod family;
pub mod laws;

pub use classical::{
    apostol_reciprocity, apostol_rhs, apostol_sum, bezout, cotangent_sum, fukuhara_instance, r2_identity,
    r2_shared_sign,
};
pub use expansion::{eval_phi, verify_expansion, verify_identity, Corruption, Expansion};
pub use family::random_family;
pub use laws::{
    check_multiplicity_free, laurent_reciprocity, m_coefficient, multiplicity_free_reciprocity,
    multiplicity_free_terms, reciprocity_sum, verify_laurent_reciprocity, verify_reciprocity_sum, zagier_reciprocity,
    zagier_sides,
};

/// Where identities are sampled: `Re z ∈ [0, 1)`, `Im z ∈ im_range`.
#[derive(Clone, Debug, PartialEq)]
pub struct SamplePolicy {
    pub count: usize,
    pub im_range: (f64, f64),
    pub exclusion_radius: f64,
    pub seed: u64,
}

impl Default for SamplePolicy {
    fn default() -> Self {
        SamplePolicy {
            count: 20,
            im_range: (0.1, 1.0),
            exclusion_radius: 1e-3,
            seed: 0x5eed,
        }
    }
}

impl SamplePolicy {
    pub fn with_seed(seed: u64, count: usize) -> Self {
        SamplePolicy {
            count,
            seed,
            ..SamplePolicy::default()
        }
    }

    /// The sample points, identical for identical policies.
    pub fn points(&self, prec: u32) -> Result<Vec<ComplexP>> {
        let (lo, hi) = self.im_range;
        if !(lo >= self.exclusion_radius && lo <= hi && self.exclusion_radius > 0.0) {
            return Err(Error::InvalidParams(format!(
                "sample band [{lo}, {hi}] must lie above the exclusion radius {}",
                self.exclusion_radius
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        Ok((0..self.count)
            .map(|_| {
                let re: f64 = rng.random();
                let im = lo + (hi - lo) * rng.random::<f64>();
                ComplexP::new(prec, re, im)
            })
            .collect())
    }
}

/// One compared pair. `z` is absent for scalar laws.
#[derive(Clone, Debug)]
pub struct Witness {
    pub z: Option<ComplexP>,
    pub lhs: ComplexP,
    pub rhs: ComplexP,
    pub abs_err: f64,
    pub rel_err: f64,
}

#[derive(Clone, Debug)]
pub struct VerificationReport {
    pub law: String,
    pub params: Params,
    pub case: Kind,
    pub precision_bits: u32,
    pub samples: usize,
    pub max_abs_err: f64,
    pub max_rel_err: f64,
    pub tolerance: f64,
    pub passed: bool,
    /// Worst comparisons (at most three), present only on failure.
    pub witnesses: Vec<Witness>,
    /// Both sides of a scalar law.
    pub summary: Option<(ComplexP, ComplexP)>,
    pub wall_time_ms: u64,
    points: Vec<Witness>,
}

impl VerificationReport {
    /// Every comparison, in evaluation order.
    pub fn points(&self) -> &[Witness] {
        &self.points
    }

    /// Re-judge the same comparisons against `2^{-exponent}`.
    pub fn with_tolerance(mut self, exponent: u32) -> Self {
        self.tolerance = tolerance_from_exponent(exponent);
        self.judge();
        self
    }

    fn judge(&mut self) {
        self.passed = self.points.iter().all(|w| w.rel_err <= self.tolerance);
        self.witnesses.clear();
        if !self.passed {
            let mut order: Vec<usize> = (0..self.points.len()).collect();
            order.sort_by(|&x, &y| self.points[y].rel_err.total_cmp(&self.points[x].rel_err));
            self.witnesses = order.into_iter().take(3).map(|i| self.points[i].clone()).collect();
        }
    }
}

pub fn tolerance_from_exponent(exponent: u32) -> f64 {
    2f64.powi(-(exponent as i32))
}

/// Accumulates comparisons and turns them into a report.
pub(crate) struct Comparison {
    points: Vec<Witness>,
    started: Instant,
    samples: usize,
}

impl Comparison {
    pub(crate) fn new() -> Self {
        Comparison {
            points: Vec::new(),
            started: Instant::now(),
            samples: 0,
        }
    }

    /// Record `lhs` vs `rhs` with relative error taken against `max(1, |scale|)`.
    pub(crate) fn push(&mut self, z: Option<ComplexP>, lhs: ComplexP, rhs: ComplexP, scale: &ComplexP) {
        let (abs_err, rel_err) = lhs.rel_err(&rhs, scale);
        let rel_err = if rel_err.is_nan() { f64::INFINITY } else { rel_err };
        self.points.push(Witness {
            z,
            lhs,
            rhs,
            abs_err,
            rel_err,
        });
    }

    pub(crate) fn count_sample(&mut self) {
        self.samples += 1;
    }

    pub(crate) fn finish(
        self,
        law: &str,
        params: &Params,
        case: Kind,
        precision_bits: u32,
        tol_exponent: u32,
        summary: Option<(ComplexP, ComplexP)>,
    ) -> VerificationReport {
        let max_abs_err = self.points.iter().map(|w| w.abs_err).fold(0.0, f64::max);
        let max_rel_err = self.points.iter().map(|w| w.rel_err).fold(0.0, f64::max);
        let mut rep = VerificationReport {
            law: law.to_string(),
            params: params.clone(),
            case,
            precision_bits,
            samples: self.samples,
            max_abs_err,
            max_rel_err,
            tolerance: tolerance_from_exponent(tol_exponent),
            passed: false,
            witnesses: Vec::new(),
            summary,
            wall_time_ms: self.started.elapsed().as_millis() as u64,
            points: self.points,
        };
        rep.judge();
        rep
    }
}

/// `cos(πr/2)` exactly.
pub fn cos_half_pi(r: usize) -> i32 {
    [1, 0, -1, 0][r % 4]
}

/// `sin(πr/2)` exactly.
pub fn sin_half_pi(r: usize) -> i32 {
    [0, 1, 0, -1][r % 4]
}

/// `δ_{j_II,0} Π a_l δ_{m_l,1}`, the common factor of the constant terms.
fn block_product(p: &Params) -> Rational {
    if p.j().1 != 0 || !p.all_m_one() {
        return Rational::new();
    }
    p.a().iter().fold(Rational::from(1), |acc, &x| acc * x)
}

/// Constant term of `Ψ`: `cos(πr/2) π^r δ_{j_II,0} Π a_l δ_{m_l,1}`.
pub fn psi_constant(p: &Params) -> PiScaled {
    PiScaled::new(block_product(p) * cos_half_pi(p.r()), p.r() as u32)
}

/// `π^{r-1} sin(πr/2) δ_{j_II,0} Π a_l δ_{m_l,1}`.
pub fn sum_law_rhs(p: &Params) -> PiScaled {
    PiScaled::new(block_product(p) * sin_half_pi(p.r()), p.r() as u32 - 1)
}

/// Extra working bits so that cancellation between pole terms stays
/// below the reported precision: `64 + |m|·(⌈log2 max(1/δ, a_max)⌉ + 2)`
/// with `δ` the smallest gap between poles modulo 1.
pub fn guard_bits(p: &Params) -> u32 {
    let poles: Vec<Rational> = enumerate_poles(p).into_iter().map(|d| d.rho).collect();
    let mut gap = Rational::from(1);
    for pair in poles.windows(2) {
        let d = Rational::from(&pair[1] - &pair[0]);
        if d < gap {
            gap = d;
        }
    }
    if poles.len() > 1 {
        let wrap = Rational::from(1) - Rational::from(&poles[poles.len() - 1] - &poles[0]);
        if wrap < gap {
            gap = wrap;
        }
    }
    let inv = Rational::from(gap.recip_ref());
    let a_max = *p.a().iter().max().unwrap_or(&1);
    let ratio = if inv > a_max { inv } else { Rational::from(a_max) };
    let bits = Float::with_val(64, &ratio).log2().ceil().to_f64().max(0.0) as u32;
    64 + p.total_order() * (bits + 2)
}

pub(crate) fn ensure_precision(prec: u32) -> Result<()> {
    if prec < crate::MIN_PRECISION {
        return Err(Error::InvalidParams(format!(
            "precision {prec} below the minimum of {}",
            crate::MIN_PRECISION
        )));
    }
    Ok(())
}
