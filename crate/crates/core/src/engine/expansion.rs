//! `Φ(z) = Π a_l^{m_l} φ_{m_l}(a_l z - w_l)` and its expansion
//!
//! ```text
//! Ψ(z) = const + Σ_ρ Σ_{n=1}^{|m|} C_{ρ,n} φ_n^{(J)}(z - ρ)
//! ```
//!
//! with `C_{ρ,n}` assembled from the Laurent data of each factor at `ρ`.

use std::sync::Arc;

use rayon::prelude::*;
use rug::float::Constant;
use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use super::{ensure_precision, guard_bits, psi_constant, Comparison, SamplePolicy, VerificationReport};
use crate::complex::ComplexP;
use crate::error::{Error, Result};
use crate::exact_numbers::{Kind, PiScaled};
use crate::laurent::coeff_a;
use crate::poles::{classify_case, enumerate_poles, residue_subsets, Params, PoleDatum, Sign};
use crate::trig_kernel::{cot_poly, csc_poly, phi, trig_values, TrigPoly};

/// Deliberate damage to `Ψ`, for negative controls.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Corruption {
    /// Negate the sign factor of `factor` in every subset containing it at
    /// the pole with index `pole`.
    FlipSign { pole: usize, factor: usize },
    /// Leave the subset `subset` out of the sum at pole `pole`.
    DropSubset { pole: usize, subset: Vec<usize> },
}

impl Corruption {
    /// A sign flip at the first pole of highest multiplicity, on its last
    /// singular factor.
    pub fn sign_flip_for(p: &Params) -> Corruption {
        let (pole, d) = busiest_pole(p);
        Corruption::FlipSign {
            pole,
            factor: *d.integral_set.last().expect("poles have a singular factor"),
        }
    }

    /// Dropping the full integral set at the first pole of highest multiplicity.
    pub fn subset_drop_for(p: &Params) -> Corruption {
        let (pole, d) = busiest_pole(p);
        Corruption::DropSubset {
            pole,
            subset: d.integral_set,
        }
    }

    fn pole(&self) -> usize {
        match self {
            Corruption::FlipSign { pole, .. } | Corruption::DropSubset { pole, .. } => *pole,
        }
    }
}

fn busiest_pole(p: &Params) -> (usize, PoleDatum) {
    let poles = enumerate_poles(p);
    let mut best = 0;
    for (i, d) in poles.iter().enumerate() {
        if d.multiplicity() > poles[best].multiplicity() {
            best = i;
        }
    }
    (best, poles[best].clone())
}

/// Taylor coefficients `A_0..=A_{max_nu}` of every factor at `center`.
pub(crate) fn a_table(p: &Params, center: &Rational, max_nu: u32, prec: u32) -> Vec<Vec<ComplexP>> {
    (0..p.r())
        .map(|u| {
            (0..=max_nu)
                .map(|nu| coeff_a(p.kind(u), nu, center, p.a()[u], p.m()[u], &p.w()[u], prec).value)
                .collect()
        })
        .collect()
}

/// Coefficients of `Π_{u∈factors} (Σ_ν table[u][ν] x^ν)` up to `x^{degree}`.
fn series_product(table: &[Vec<ComplexP>], factors: &[usize], degree: usize, prec: u32) -> Vec<ComplexP> {
    let mut acc = vec![ComplexP::zero(prec); degree + 1];
    acc[0] = ComplexP::one(prec);
    for &u in factors {
        let row = &table[u];
        let mut next = vec![ComplexP::zero(prec); degree + 1];
        for (i, x) in acc.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (k, y) in row.iter().enumerate().take(degree + 1 - i) {
                next[i + k] = &next[i + k] + &(x * y);
            }
        }
        acc = next;
    }
    acc
}

/// `Σ_{Λ⊆S} Σ_{K^±_{target,Λ}} Π_{l∈Λ} sgn_l Π_{u∉Λ} A_{ν_u}(center)`.
///
/// `table` must reach `ν = target + Σ_{l∈S} m_l` for `Sign::Plus` and
/// `ν = Σ_{l∈S} m_l - 1` for `Sign::Minus`.
pub(crate) fn signed_subset_sum(
    p: &Params,
    datum: &PoleDatum,
    table: &[Vec<ComplexP>],
    target: u32,
    sign: Sign,
    corruption: Option<&Corruption>,
    prec: u32,
) -> ComplexP {
    let mut total = ComplexP::zero(prec);
    for lambda in residue_subsets(datum) {
        if let Some(Corruption::DropSubset { subset, .. }) = corruption {
            if *subset == lambda {
                continue;
            }
        }
        let pole_order: i64 = lambda.iter().map(|&l| p.m()[l] as i64).sum();
        let degree = match sign {
            Sign::Minus => pole_order - target as i64,
            Sign::Plus => pole_order + target as i64,
        };
        if degree < 0 {
            continue;
        }
        let mut s: i32 = lambda
            .iter()
            .map(|&l| datum.sign_of(p, l).expect("l is singular"))
            .product();
        if let Some(Corruption::FlipSign { factor, .. }) = corruption {
            if lambda.contains(factor) {
                s = -s;
            }
        }
        let rest: Vec<usize> = (0..p.r()).filter(|u| !lambda.contains(u)).collect();
        let degree = degree as usize;
        let prod = series_product(table, &rest, degree, prec).swap_remove(degree);
        total = if s > 0 { &total + &prod } else { &total - &prod };
    }
    total
}

/// One pole of `Ψ` with its coefficients `C_{ρ,1..=|m|}`.
#[derive(Clone, Debug)]
pub struct PoleTerm {
    pub datum: PoleDatum,
    pub coeffs: Vec<ComplexP>,
}

/// The right-hand side `Ψ` of the partial-fraction identity, with all
/// coefficients precomputed at working precision.
#[derive(Clone, Debug)]
pub struct Expansion {
    params: Params,
    case: Kind,
    work_prec: u32,
    constant: PiScaled,
    terms: Vec<PoleTerm>,
    polys: Vec<Arc<TrigPoly>>,
    pi_powers: Vec<Float>,
}

impl Expansion {
    /// Expansion accurate to about `prec` bits (guard bits are added internally).
    pub fn new(p: &Params, prec: u32) -> Result<Self> {
        Self::build(p, prec, None)
    }

    pub fn corrupted(p: &Params, prec: u32, corruption: &Corruption) -> Result<Self> {
        Self::build(p, prec, Some(corruption))
    }

    fn build(p: &Params, prec: u32, corruption: Option<&Corruption>) -> Result<Self> {
        ensure_precision(prec)?;
        let work = prec + guard_bits(p);
        let case = classify_case(p);
        let total = p.total_order();
        let poles = enumerate_poles(p);
        if let Some(c) = corruption {
            if c.pole() >= poles.len() {
                return Err(Error::OutOfRange(format!("pole index {} >= {}", c.pole(), poles.len())));
            }
        }
        let terms = poles
            .into_iter()
            .enumerate()
            .map(|(i, datum)| {
                let table = a_table(p, &datum.rho, total.saturating_sub(1), work);
                let here = corruption.filter(|c| c.pole() == i);
                let coeffs = (1..=total)
                    .map(|n| signed_subset_sum(p, &datum, &table, n, Sign::Minus, here, work))
                    .collect();
                PoleTerm { datum, coeffs }
            })
            .collect();
        let polys = (1..=total as usize)
            .map(|n| match case {
                Kind::Cot => cot_poly(n),
                Kind::Csc => csc_poly(n),
            })
            .collect();
        let pi = Float::with_val(work, Constant::Pi);
        let pi_powers = (1..=total).map(|n| Float::with_val(work, (&pi).pow(n))).collect();
        Ok(Expansion {
            params: p.clone(),
            case,
            work_prec: work,
            constant: psi_constant(p),
            terms,
            polys,
            pi_powers,
        })
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    /// `J`, the family of the `φ_n` on the right-hand side.
    pub fn case(&self) -> Kind {
        self.case
    }

    pub fn work_prec(&self) -> u32 {
        self.work_prec
    }

    pub fn constant(&self) -> &PiScaled {
        &self.constant
    }

    pub fn terms(&self) -> &[PoleTerm] {
        &self.terms
    }

    /// `C_{ρ,n}`, if `ρ` is a pole and `1 <= n <= |m|`.
    pub fn coefficient(&self, rho: &Rational, n: usize) -> Option<&ComplexP> {
        let term = self.terms.iter().find(|t| t.datum.rho == *rho)?;
        term.coeffs.get(n.checked_sub(1)?)
    }

    /// `Ψ(z)` at working precision.
    pub fn eval(&self, z: &ComplexP) -> Result<ComplexP> {
        let prec = self.work_prec;
        let z = z.with_prec(prec);
        let mut total = self.constant.to_complex(prec);
        for term in &self.terms {
            let shifted = z.add_rational(&Rational::from(-&term.datum.rho));
            let t = trig_values(&shifted)?;
            for (n, c) in term.coeffs.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let poly = self.polys[n].eval(&t.cot);
                let value = match self.case {
                    Kind::Cot => poly,
                    Kind::Csc => &t.csc * &poly,
                };
                total = &total + &(c * &value.scale(&self.pi_powers[n]));
            }
        }
        Ok(total)
    }
}

/// `Φ(z)` at the precision of `z`. Empty blocks contribute the factor 1.
pub fn eval_phi(p: &Params, z: &ComplexP) -> Result<ComplexP> {
    let mut total = ComplexP::one(z.prec());
    for l in 0..p.r() {
        let a = p.a()[l];
        let m = p.m()[l];
        let arg = z
            .scale_integer(&Integer::from(a))
            .add_rational(&Rational::from(-&p.w()[l]));
        let f = phi(p.kind(l), m as usize, &arg)?;
        total = &total * &f.scale_integer(&Integer::from(Integer::u_pow_u(a, m)));
    }
    Ok(total)
}

/// `Φ = Ψ` at the sample points, tolerance `2^{-P/2}` relative to `max(1, |Φ|)`.
pub fn verify_identity(p: &Params, sp: &SamplePolicy, prec: u32) -> Result<VerificationReport> {
    verify_expansion(&Expansion::new(p, prec)?, sp, prec)
}

/// [`verify_identity`] against a prebuilt (possibly corrupted) expansion.
pub fn verify_expansion(e: &Expansion, sp: &SamplePolicy, prec: u32) -> Result<VerificationReport> {
    ensure_precision(prec)?;
    let mut cmp = Comparison::new();
    let work = e.work_prec();
    let pts = sp.points(work)?;
    let values: Vec<(ComplexP, ComplexP, ComplexP)> = pts
        .into_par_iter()
        .map(|z| {
            let lhs = eval_phi(e.params(), &z)?;
            let rhs = e.eval(&z)?;
            Ok((z, lhs, rhs))
        })
        .collect::<Result<_>>()?;
    for (z, lhs, rhs) in values {
        cmp.count_sample();
        let scale = lhs.clone();
        cmp.push(Some(z), lhs, rhs, &scale);
    }
    Ok(cmp.finish("identity", e.params(), e.case(), prec, prec / 2, None))
}
