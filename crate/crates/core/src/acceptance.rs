//! The acceptance suite, shared by `reciplab selftest` and the integration
//! test. Each criterion returns an outcome with a one-line detail; budgets
//! and tolerances are pinned here.

use std::time::{Duration, Instant};

use rayon::prelude::*;
use rug::Rational;

use crate::complex::ComplexP;
use crate::engine::{
    apostol_reciprocity, apostol_sum, fukuhara_instance, m_coefficient, random_family, verify_expansion,
    verify_identity, verify_laurent_reciprocity, verify_reciprocity_sum, zagier_reciprocity, Corruption, Expansion,
    SamplePolicy,
};
use crate::error::Result;
use crate::exact_numbers::{Kind, PiScaled};
use crate::oracle::phi_series_batch;
use crate::poles::{classify_case, Params};
use crate::trig_kernel::{phi_from_trig, trig_values};

pub const PRECISION: u32 = 256;
pub const DEFAULT_SEED: u64 = 0x5eed;
pub const FAMILY_SIZE: usize = 50;
pub const SAMPLES: usize = 20;
pub const KERNEL_POINTS: usize = 100;
pub const KERNEL_MAX_N: usize = 6;
pub const KERNEL_SERIES_TERMS: u64 = 10_000;
pub const KERNEL_BUDGET: Duration = Duration::from_secs(30);
pub const IDENTITY_BUDGET: Duration = Duration::from_secs(120);
pub const IDENTITY_TOL_BITS: i32 = 128;
pub const SUM_LAW_TOL_BITS: i32 = 128;
pub const HAND_CASE_TOL_BITS: i32 = 200;
pub const LAURENT_MEMBERS: usize = 10;
pub const LAURENT_TOL_BITS: u32 = 100;
pub const APOSTOL_ABS_TOL: f64 = 1e-30;
pub const APOSTOL_ABS_TOL_DOUBLE: f64 = 1e-12;
pub const APOSTOL_TOL_BITS: u32 = 100;
pub const FUKUHARA_TOL_BITS: u32 = 128;
pub const ZAGIER_TOL_BITS: u32 = 100;
pub const NEGATIVE_CONTROL_RATE: f64 = 0.9;
pub const SELFTEST_BUDGET: Duration = Duration::from_secs(300);

#[derive(Clone, Debug)]
pub struct Outcome {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl Outcome {
    pub fn line(&self) -> String {
        format!(
            "criterion {} {} {}: {} ({:.1} s)",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.detail,
            self.elapsed.as_secs_f64()
        )
    }
}

fn outcome(id: u8, name: &'static str, started: Instant, result: Result<(bool, String)>) -> Outcome {
    let (passed, detail) = result.unwrap_or_else(|e| (false, format!("error: {e}")));
    Outcome {
        id,
        name,
        passed,
        detail,
        elapsed: started.elapsed(),
    }
}

fn tol(bits: i32) -> f64 {
    2f64.powi(-bits)
}

/// `φ_N` against the truncated bilateral series, both families, `N ≤ 6`.
pub fn kernel_vs_series(seed: u64) -> Outcome {
    let started = Instant::now();
    let result = (|| {
        let pts = SamplePolicy::with_seed(seed, KERNEL_POINTS).points(PRECISION)?;
        let checks: Vec<(usize, f64)> = pts
            .par_iter()
            .map(|z| {
                let t = trig_values(z)?;
                let mut bad = 0;
                let mut worst = 0f64;
                for (kind, n, s) in phi_series_batch(z, KERNEL_MAX_N, KERNEL_SERIES_TERMS)? {
                    let err = (&phi_from_trig(kind, n, &t) - &s.value).abs_f64();
                    if err.is_nan() || err > s.tail_bound {
                        bad += 1;
                    }
                    worst = worst.max(err / s.tail_bound);
                }
                Ok((bad, worst))
            })
            .collect::<Result<_>>()?;
        let bad: usize = checks.iter().map(|c| c.0).sum();
        let worst = checks.iter().map(|c| c.1).fold(0.0, f64::max);
        let in_time = started.elapsed() <= KERNEL_BUDGET;
        Ok((
            bad == 0 && in_time,
            format!(
                "{} comparisons, {bad} outside the tail bound, worst error/bound {worst:.3}, budget {} s",
                pts.len() * 2 * KERNEL_MAX_N,
                KERNEL_BUDGET.as_secs()
            ),
        ))
    })();
    outcome(1, "kernel vs series oracle", started, result)
}

fn family(seed: u64) -> Vec<Params> {
    random_family(seed, FAMILY_SIZE)
}

/// `Φ = Ψ` over the randomized family.
pub fn identity_family(seed: u64) -> Outcome {
    let started = Instant::now();
    let result = (|| {
        let sp = SamplePolicy::with_seed(seed, SAMPLES);
        let reps = family(seed)
            .par_iter()
            .map(|p| verify_identity(p, &sp, PRECISION))
            .collect::<Result<Vec<_>>>()?;
        let worst = reps.iter().map(|r| r.max_rel_err).fold(0.0, f64::max);
        let failing = reps.iter().filter(|r| r.max_rel_err > tol(IDENTITY_TOL_BITS)).count();
        let csc = reps.iter().filter(|r| r.case == Kind::Csc).count();
        let in_time = started.elapsed() <= IDENTITY_BUDGET;
        Ok((
            failing == 0 && in_time && csc > 0 && csc < reps.len(),
            format!(
                "{} members ({} case II) x {SAMPLES} samples, {failing} failing, max rel err {worst:.3e} (tol 2^-{IDENTITY_TOL_BITS})",
                reps.len(),
                csc
            ),
        ))
    })();
    outcome(2, "pole expansion identity", started, result)
}

/// Residue sum law over the Case I members, and the exact triple-cot case.
pub fn residue_sum(seed: u64) -> Outcome {
    let started = Instant::now();
    let result = (|| {
        let members: Vec<Params> = family(seed)
            .into_iter()
            .filter(|p| classify_case(p) == Kind::Cot)
            .collect();
        let reps = members
            .par_iter()
            .map(|p| verify_reciprocity_sum(p, PRECISION))
            .collect::<Result<Vec<_>>>()?;
        let worst = reps.iter().map(|r| r.max_rel_err).fold(0.0, f64::max);
        let failing = reps.iter().filter(|r| r.max_rel_err > tol(SUM_LAW_TOL_BITS)).count();
        let hand = Params::simple(&[1, 1, 1], (3, 0))?;
        let rep = verify_reciprocity_sum(&hand, PRECISION)?;
        let (lhs, rhs) = rep.summary.clone().expect("scalar law");
        let want = PiScaled::new(Rational::from(-1), 2).to_complex(PRECISION);
        let hand_err = (&lhs - &want).abs_f64().max((&rhs - &want).abs_f64());
        Ok((
            failing == 0 && hand_err <= tol(HAND_CASE_TOL_BITS),
            format!(
                "{} case I members, {failing} failing, max rel err {worst:.3e}; a=(1,1,1) gives -π² to {hand_err:.3e}",
                reps.len()
            ),
        ))
    })();
    outcome(3, "residue sum law", started, result)
}

/// Coefficient law at `z0 ∈ {0, 1/5, 1/2}`, `μ ≤ 3`, against the contour oracle.
pub fn coefficient_law(seed: u64) -> Outcome {
    let started = Instant::now();
    let result = (|| {
        let centers = [Rational::new(), Rational::from((1, 5)), Rational::from((1, 2))];
        let jobs: Vec<(Params, Rational)> = family(seed)
            .into_iter()
            .take(LAURENT_MEMBERS)
            .flat_map(|p| centers.iter().map(move |z0| (p.clone(), z0.clone())))
            .collect();
        let reps = jobs
            .par_iter()
            .map(|(p, z0)| {
                verify_laurent_reciprocity(p, z0, &[0, 1, 2, 3], PRECISION).map(|r| r.with_tolerance(LAURENT_TOL_BITS))
            })
            .collect::<Result<Vec<_>>>()?;
        let worst = reps.iter().map(|r| r.max_rel_err).fold(0.0, f64::max);
        let failing = reps.iter().filter(|r| !r.passed).count();
        Ok((
            failing == 0,
            format!(
                "{} (member, z0) pairs x 4 orders, {failing} failing, max rel err {worst:.3e} (tol 2^-{LAURENT_TOL_BITS})",
                reps.len()
            ),
        ))
    })();
    outcome(4, "Laurent coefficient law", started, result)
}

/// Apostol's sums: `k = 0` exactly at two precisions, `k = 1, 2` on three pairs.
pub fn apostol(_seed: u64) -> Outcome {
    let started = Instant::now();
    let result = (|| {
        let target = Rational::from((-1, 18));
        let mut errs = Vec::new();
        for (prec, bound) in [(PRECISION, APOSTOL_ABS_TOL), (53, APOSTOL_ABS_TOL_DOUBLE)] {
            let v = &apostol_sum(1, 2, 3, prec)? + &apostol_sum(1, 3, 2, prec)?;
            let err = (&v - &ComplexP::from_rational(prec, &target)).abs_f64();
            errs.push((prec, err, err <= bound));
        }
        let mut worst = 0f64;
        let mut failing = 0;
        for (p, q) in [(2, 3), (3, 4), (5, 7)] {
            for k in [1, 2] {
                let rep = apostol_reciprocity(k, p, q, PRECISION)?.with_tolerance(APOSTOL_TOL_BITS);
                worst = worst.max(rep.max_rel_err);
                failing += usize::from(!rep.passed);
            }
        }
        Ok((
            errs.iter().all(|e| e.2) && failing == 0,
            format!(
                "k=0 (2,3): err {:.3e} at P={}, {:.3e} at P={}; k=1,2 on 3 pairs: {failing} failing, max rel err {worst:.3e}",
                errs[0].1, errs[0].0, errs[1].1, errs[1].0
            ),
        ))
    })();
    outcome(5, "Apostol reciprocity", started, result)
}

/// The five cot/csc product formulas at `z = 0.37 + 0.21i`.
pub fn fukuhara(_seed: u64) -> Outcome {
    let started = Instant::now();
    let result = (|| {
        let z = [ComplexP::new(PRECISION, 0.37, 0.21)];
        let mut ran = 0;
        let mut failing = 0;
        let mut worst = 0f64;
        for case in 0..=4u8 {
            for (p, q) in [(1, 1), (3, 2), (2, 3), (3, 5)] {
                match fukuhara_instance(case, p, q, &z, PRECISION) {
                    Ok(rep) => {
                        let rep = rep.with_tolerance(FUKUHARA_TOL_BITS);
                        ran += 1;
                        worst = worst.max(rep.max_rel_err);
                        failing += usize::from(!rep.passed);
                    }
                    Err(crate::Error::ParityMismatch { .. }) => {}
                    Err(e) => return Err(e),
                }
            }
        }
        Ok((
            failing == 0 && ran > 0,
            format!("{ran} admissible (case, p, q) instances, {failing} failing, max rel err {worst:.3e}"),
        ))
    })();
    outcome(6, "cot/csc product formulas", started, result)
}

/// Zagier-type laws for `a = (2,3,5)`, both blocks, and `M_1 = -π²` for `a = (1,1,1)`.
pub fn zagier(_seed: u64) -> Outcome {
    let started = Instant::now();
    let result = (|| {
        let mut worst = 0f64;
        let mut failing = 0;
        for j in [(3, 0), (0, 3)] {
            let rep = zagier_reciprocity(&[2, 3, 5], j, PRECISION)?.with_tolerance(ZAGIER_TOL_BITS);
            worst = worst.max(rep.max_rel_err);
            failing += usize::from(!rep.passed);
        }
        let m1 = m_coefficient(&Params::simple(&[1, 1, 1], (3, 0))?, 1)?;
        let exact = m1 == PiScaled::new(Rational::from(-1), 2);
        Ok((
            failing == 0 && exact,
            format!("a=(2,3,5) cot and csc: {failing} failing, max rel err {worst:.3e}; M_1(1,1,1) = {m1}"),
        ))
    })();
    outcome(7, "Zagier-type reciprocity", started, result)
}

/// Damaged expansions must fail the identity check on most family members.
pub fn negative_controls(seed: u64) -> Outcome {
    let started = Instant::now();
    let result = (|| {
        let sp = SamplePolicy::with_seed(seed, SAMPLES);
        let members = family(seed);
        let caught = members
            .par_iter()
            .map(|p| {
                let mut hits = [false; 2];
                for (slot, c) in [Corruption::sign_flip_for(p), Corruption::subset_drop_for(p)]
                    .iter()
                    .enumerate()
                {
                    let e = Expansion::corrupted(p, PRECISION, c)?;
                    hits[slot] = verify_expansion(&e, &sp, PRECISION)?.max_rel_err > tol(IDENTITY_TOL_BITS);
                }
                Ok(hits)
            })
            .collect::<Result<Vec<_>>>()?;
        let n = caught.len() as f64;
        let flip = caught.iter().filter(|h| h[0]).count() as f64 / n;
        let drop = caught.iter().filter(|h| h[1]).count() as f64 / n;
        Ok((
            flip >= NEGATIVE_CONTROL_RATE && drop >= NEGATIVE_CONTROL_RATE,
            format!(
                "sign flip caught on {:.0}%, subset drop on {:.0}% of {} members (need {:.0}%)",
                100.0 * flip,
                100.0 * drop,
                caught.len(),
                100.0 * NEGATIVE_CONTROL_RATE
            ),
        ))
    })();
    outcome(8, "negative controls", started, result)
}

/// Criteria 1 through 8 in order.
pub fn run_all(seed: u64) -> Vec<Outcome> {
    let criteria: [fn(u64) -> Outcome; 8] = [
        kernel_vs_series,
        identity_family,
        residue_sum,
        coefficient_law,
        apostol,
        fukuhara,
        zagier,
        negative_controls,
    ];
    criteria.iter().map(|c| c(seed)).collect()
}
