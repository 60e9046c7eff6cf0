//! Reciprocity laws read off from the Laurent data of `Φ`.
//!
//! The sum law for the residue coefficients `C_{ρ,1}` comes from the limit
//! `z → i∞` of `Ψ`. That limit only constrains `Σ C_{ρ,1}` when the right-hand
//! side is of cot type, so the sum law and everything derived from it is
//! verified in Case I only.

use rayon::prelude::*;
use rug::{Integer, Rational};

use super::expansion::{a_table, signed_subset_sum, Expansion};
use super::{ensure_precision, guard_bits, sum_law_rhs, Comparison, VerificationReport};
use crate::complex::ComplexP;
use crate::error::{Error, Result};
use crate::exact_numbers::{binom, laurent_alpha, Kind, PiScaled};
use crate::laurent::coeff_a;
use crate::oracle::{contour_coefficients, default_radius, CONTOUR_MIN_NODES};
use crate::poles::{
    classify_case, compositions, compositions_k, enumerate_poles, pairwise_coprime, residue_subsets, Params, PoleDatum,
    Sign,
};
use crate::trig_kernel::phi_at_rational;

fn require_case_one(p: &Params, law: &str) -> Result<()> {
    if classify_case(p) == Kind::Csc {
        return Err(Error::Inapplicable(format!(
            "{law} holds for cot-type right-hand sides only; {p} is of csc type"
        )));
    }
    Ok(())
}

/// `Σ_ρ C_{ρ,1}` and the closed form `π^{r-1} sin(πr/2) δ_{j_II,0} Π a_l δ_{m_l,1}`.
///
/// The closed form is only claimed in Case I; see [`verify_reciprocity_sum`].
pub fn reciprocity_sum(p: &Params, prec: u32) -> Result<(ComplexP, PiScaled)> {
    let e = Expansion::new(p, prec)?;
    let lhs: ComplexP = e.terms().iter().map(|t| t.coeffs[0].clone()).sum();
    Ok((lhs.with_prec(prec), sum_law_rhs(p)))
}

pub fn verify_reciprocity_sum(p: &Params, prec: u32) -> Result<VerificationReport> {
    require_case_one(p, "the residue sum law")?;
    let mut cmp = Comparison::new();
    let (lhs, rhs) = reciprocity_sum(p, prec)?;
    let rhs = rhs.to_complex(prec);
    cmp.count_sample();
    cmp.push(None, lhs.clone(), rhs.clone(), &rhs);
    Ok(cmp.finish("reciprocity", p, Kind::Cot, prec, prec / 2, Some((lhs, rhs))))
}

fn check_center(z0: &Rational) -> Result<()> {
    if *z0 < 0 || *z0 >= 1 {
        return Err(Error::OutOfRange(format!("z0 = {z0} must lie in [0, 1)")));
    }
    Ok(())
}

/// Both sides of the order-`μ` coefficient law at `z0` at working precision:
/// the pole expansion's Taylor data against the product of the factors'
/// Laurent data.
fn laurent_sides(e: &Expansion, z0: &Rational, mu: u32) -> (ComplexP, ComplexP) {
    let p = e.params();
    let work = e.work_prec();
    let mut lhs = ComplexP::zero(work);
    for term in e.terms() {
        for (i, c) in term.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let a = coeff_a(e.case(), mu, z0, 1, i as u32 + 1, &term.datum.rho, work).value;
            lhs = &lhs + &(c * &a);
        }
    }
    let datum = PoleDatum::at(p, z0);
    let table = a_table(p, z0, mu + p.total_order(), work);
    let mut rhs = signed_subset_sum(p, &datum, &table, mu, Sign::Plus, None, work);
    if mu == 0 {
        rhs = &rhs - &e.constant().to_complex(work);
    }
    (lhs, rhs)
}

/// Order-`μ` regular coefficient at `z0 ∈ [0, 1)`, computed from the
/// expansion (lhs) and from the factors directly (rhs).
pub fn laurent_reciprocity(p: &Params, z0: &Rational, mu: u32, prec: u32) -> Result<(ComplexP, ComplexP)> {
    check_center(z0)?;
    let e = Expansion::new(p, prec)?;
    let (lhs, rhs) = laurent_sides(&e, z0, mu);
    Ok((lhs.with_prec(prec), rhs.with_prec(prec)))
}

/// The coefficient law for each order in `mus`, with both sides also
/// compared against the contour-integral coefficient of `Φ` at `z0`.
pub fn verify_laurent_reciprocity(p: &Params, z0: &Rational, mus: &[u32], prec: u32) -> Result<VerificationReport> {
    check_center(z0)?;
    let mut cmp = Comparison::new();
    let e = Expansion::new(p, prec)?;
    let poles: Vec<Rational> = enumerate_poles(p).into_iter().map(|d| d.rho).collect();
    let radius = default_radius(z0, &poles);
    let contour_prec = e.work_prec() + 64;
    let orders: Vec<i32> = mus.iter().map(|&m| m as i32).collect();
    let oracle = contour_coefficients(
        |z| super::eval_phi(p, z),
        z0,
        &orders,
        &radius,
        CONTOUR_MIN_NODES,
        contour_prec,
        contour_prec - 32,
    )?;
    let constant = e.constant().to_complex(contour_prec);
    let z = ComplexP::from_rational(prec, z0);
    for (&mu, o) in mus.iter().zip(oracle) {
        let (lhs, rhs) = laurent_sides(&e, z0, mu);
        let o = if mu == 0 { &o - &constant } else { o };
        cmp.count_sample();
        cmp.push(Some(z.clone()), lhs.clone(), rhs.clone(), &rhs);
        cmp.push(Some(z.clone()), lhs, o.with_prec(e.work_prec()), &rhs);
    }
    Ok(cmp.finish("laurent", p, e.case(), prec, prec / 2, None))
}

/// No two factors share a pole.
pub fn check_multiplicity_free(p: &Params) -> bool {
    enumerate_poles(p).iter().all(|d| d.multiplicity() == 1)
}

/// Residue coefficient of each pole in the multiplicity-free case, evaluated
/// from the explicit cot/csc sum (every factor other than the singular one
/// is regular there), sorted by pole.
pub fn multiplicity_free_terms(p: &Params, prec: u32) -> Result<Vec<(Rational, ComplexP)>> {
    if !check_multiplicity_free(p) {
        return Err(Error::NotMultiplicityFree);
    }
    ensure_precision(prec)?;
    let r = p.r();
    let mut out = Vec::new();
    for l in 0..r {
        let others: Vec<usize> = (0..r).filter(|&u| u != l).collect();
        for mu in 0..p.a()[l] {
            let node = Rational::from(&p.w()[l] + mu) / p.a()[l];
            let mut total = ComplexP::zero(prec);
            for nu in compositions(p.m()[l] - 1, others.len()) {
                let mut prod = ComplexP::one(prec);
                for (&u, &nu_u) in others.iter().zip(&nu) {
                    let (a, m) = (p.a()[u], p.m()[u]);
                    let x = Rational::from(&node * a) - &p.w()[u];
                    let f = phi_at_rational(p.kind(u), (m + nu_u) as usize, &x, prec)?;
                    let mut scale = binom(m + nu_u - 1, nu_u) * Integer::from(Integer::u_pow_u(a, m + nu_u));
                    if nu_u % 2 == 1 {
                        scale = -scale;
                    }
                    prod = &prod * &f.scale_integer(&scale);
                }
                total = &total + &prod;
            }
            if p.kind(l).is_csc() && mu % 2 == 1 {
                total = -total;
            }
            out.push((node, total));
        }
    }
    out.sort_by(|x, y| x.0.cmp(&y.0));
    Ok(out)
}

/// The residue sum law evaluated through the explicit multiplicity-free sum.
pub fn multiplicity_free_reciprocity(p: &Params, prec: u32) -> Result<VerificationReport> {
    if !check_multiplicity_free(p) {
        return Err(Error::NotMultiplicityFree);
    }
    require_case_one(p, "the multiplicity-free sum law")?;
    let mut cmp = Comparison::new();
    let work = prec + guard_bits(p);
    let lhs: ComplexP = multiplicity_free_terms(p, work)?.into_iter().map(|(_, v)| v).sum();
    let rhs = sum_law_rhs(p).to_complex(work);
    cmp.count_sample();
    cmp.push(None, lhs.clone(), rhs.clone(), &rhs);
    Ok(cmp.finish(
        "multiplicity_free",
        p,
        Kind::Cot,
        prec,
        prec / 2,
        Some((lhs.with_prec(prec), rhs.with_prec(prec))),
    ))
}

/// `M_n`: the coefficient of `φ_n(z)` at the pole `0` when `w = 0`, as an
/// exact multiple of `π^{|m| - n}`.
pub fn m_coefficient(p: &Params, n: u32) -> Result<PiScaled> {
    if !p.w_is_zero() {
        return Err(Error::InvalidParams("M_n needs all shifts w = 0".into()));
    }
    if !p.pairwise_coprime() {
        return Err(Error::NotCoprime(format!("{:?}", p.a())));
    }
    let total = p.total_order();
    if n == 0 || n > total {
        return Err(Error::OutOfRange(format!("n = {n} must lie in 1..={total}")));
    }
    let origin = PoleDatum::at(p, &Rational::new());
    let mut sum = PiScaled::zero(total - n);
    for lambda in residue_subsets(&origin) {
        let rest: Vec<usize> = (0..p.r()).filter(|u| !lambda.contains(u)).collect();
        for nu in compositions_k(n, Sign::Minus, &lambda, p) {
            let mut prod = PiScaled::one();
            for (&u, &nu_u) in rest.iter().zip(&nu) {
                let (a, m) = (p.a()[u], p.m()[u]);
                let mut factor =
                    Rational::from(binom(m + nu_u - 1, m - 1) * Integer::from(Integer::u_pow_u(a, m + nu_u)));
                if m % 2 == 1 {
                    factor = -factor;
                }
                prod = prod.mul(&laurent_alpha(p.kind(u), m + nu_u)?.scale(&factor));
            }
            let prod = if prod.is_zero() {
                PiScaled::zero(total - n)
            } else {
                prod
            };
            sum = sum.checked_add(&prod).expect("every product has π-power |m| - n");
        }
    }
    Ok(sum)
}

/// Both sides of the Zagier-type law for `m = 1`, `w = 0`:
/// `Σ_l Σ_{μ=1}^{a_l-1} ± Π_{u≠l} a_u φ_1(a_u μ / a_l)` and
/// `π^{r-1} sin(πr/2) δ_{j_II,0} Π a_l - M_1`.
pub fn zagier_sides(a: &[u32], j: (usize, usize), prec: u32) -> Result<(ComplexP, PiScaled)> {
    if !pairwise_coprime(a) {
        return Err(Error::NotCoprime(format!("{a:?}")));
    }
    let p = Params::simple(a, j)?;
    require_case_one(&p, "the Zagier-type law")?;
    ensure_precision(prec)?;
    let work = prec + 64;
    let r = p.r();
    let terms: Vec<ComplexP> = (0..r)
        .into_par_iter()
        .map(|l| {
            let mut acc = ComplexP::zero(work);
            for mu in 1..a[l] {
                let mut prod = ComplexP::one(work);
                for u in (0..r).filter(|&u| u != l) {
                    let x = Rational::from((a[u] * mu, a[l]));
                    let f = phi_at_rational(p.kind(u), 1, &x, work)?;
                    prod = &prod * &f.scale_integer(&Integer::from(a[u]));
                }
                acc = if p.kind(l).is_csc() && mu % 2 == 1 {
                    &acc - &prod
                } else {
                    &acc + &prod
                };
            }
            Ok(acc)
        })
        .collect::<Result<_>>()?;
    let lhs: ComplexP = terms.into_iter().sum();
    let m1 = m_coefficient(&p, 1)?;
    let rhs = sum_law_rhs(&p)
        .checked_add(&PiScaled::new(-m1.coeff, m1.pi_power))
        .expect("both sides carry π^{r-1}");
    Ok((lhs.with_prec(prec), rhs))
}

pub fn zagier_reciprocity(a: &[u32], j: (usize, usize), prec: u32) -> Result<VerificationReport> {
    let mut cmp = Comparison::new();
    let (lhs, rhs) = zagier_sides(a, j, prec)?;
    let p = Params::simple(a, j)?;
    let rhs = rhs.to_complex(prec);
    cmp.count_sample();
    cmp.push(None, lhs.clone(), rhs.clone(), &rhs);
    Ok(cmp.finish("zagier", &p, Kind::Cot, prec, prec / 2, Some((lhs, rhs))))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    fn pi_pow(c: i64, k: u32) -> PiScaled {
        PiScaled::new(Rational::from(c), k)
    }

    fn near(x: &ComplexP, y: &ComplexP, bits: i32) -> bool {
        let (_, rel) = x.rel_err(y, y);
        rel <= 2f64.powi(-bits)
    }

    #[test]
    fn residue_sum_triple_cot() {
        let p = Params::simple(&[1, 1, 1], (3, 0)).unwrap();
        let (lhs, rhs) = reciprocity_sum(&p, 256).unwrap();
        assert_eq!(rhs, pi_pow(-1, 2));
        let (abs, _) = lhs.rel_err(&rhs.to_complex(256), &ComplexP::one(64));
        assert!(abs <= 2f64.powi(-200));
    }

    #[test]
    fn residue_sum_two_three_five() {
        for j in [(3, 0), (0, 3)] {
            let p = Params::simple(&[2, 3, 5], j).unwrap();
            let rep = verify_reciprocity_sum(&p, 256).unwrap();
            assert!(rep.passed, "{j:?}: {}", rep.max_rel_err);
        }
        let (_, rhs) = reciprocity_sum(&Params::simple(&[2, 3, 5], (3, 0)).unwrap(), 64).unwrap();
        assert_eq!(rhs, pi_pow(-30, 2));
    }

    #[test]
    fn residue_sum_fails_as_printed_in_case_two() {
        // csc³: the residue sum is π²/2, not the printed 0
        let p = Params::simple(&[1, 1, 1], (0, 3)).unwrap();
        let (lhs, rhs) = reciprocity_sum(&p, 128).unwrap();
        assert!(rhs.is_zero());
        assert!(near(&lhs, &PiScaled::new(q(1, 2), 2).to_complex(128), 100));
        assert!(matches!(verify_reciprocity_sum(&p, 128), Err(Error::Inapplicable(_))));
    }

    #[test]
    fn coefficient_law_at_regular_zero() {
        let p = Params::simple(&[1, 1], (2, 0)).unwrap();
        // Φ(1/2) = 0, so both sides are 0 minus the constant term -π²
        let (lhs, rhs) = laurent_reciprocity(&p, &q(1, 2), 0, 128).unwrap();
        let pi2 = ComplexP::pi(128).powu(2);
        assert!(near(&lhs, &pi2, 120) && near(&rhs, &pi2, 120));
        let (lhs, rhs) = laurent_reciprocity(&p, &q(1, 2), 1, 128).unwrap();
        assert!(lhs.abs_f64() < 1e-30 && rhs.abs_f64() < 1e-30);
    }

    #[test]
    fn coefficient_law_against_contour() {
        let p = Params::simple(&[2, 3], (2, 0)).unwrap();
        for z0 in [q(0, 1), q(1, 5), q(1, 2)] {
            let rep = verify_laurent_reciprocity(&p, &z0, &[0, 1, 2, 3], 128).unwrap();
            assert!(rep.passed, "z0 = {z0}: {}", rep.max_rel_err);
        }
        let rep = verify_laurent_reciprocity(&p, &q(1, 5), &[2], 256).unwrap();
        assert!(rep.max_rel_err <= 2f64.powi(-128));
        assert!(laurent_reciprocity(&p, &q(1, 1), 0, 64).is_err());
    }

    #[test]
    fn coefficient_law_mixed_shifted() {
        let p = Params::new(vec![1, 2, 3], vec![2, 1, 1], vec![q(0, 1), q(1, 2), q(1, 3)], (1, 2)).unwrap();
        for z0 in [q(0, 1), q(1, 5), q(1, 2)] {
            let rep = verify_laurent_reciprocity(&p, &z0, &[0, 1, 2, 3], 128).unwrap();
            assert!(rep.passed, "z0 = {z0}: {}", rep.max_rel_err);
        }
    }

    #[test]
    fn multiplicity_free_detection() {
        let mk = |a: &[u32], w: Vec<Rational>| Params::new(a.to_vec(), vec![1; a.len()], w, (a.len(), 0)).unwrap();
        assert!(check_multiplicity_free(&mk(&[2, 3], vec![q(0, 1), q(1, 3)])));
        assert!(!check_multiplicity_free(&mk(&[2, 3], vec![q(0, 1), q(0, 1)])));
        assert!(check_multiplicity_free(&mk(&[1, 1], vec![q(0, 1), q(1, 2)])));
        let bad = mk(&[2, 3], vec![q(0, 1), q(0, 1)]);
        assert!(matches!(
            multiplicity_free_reciprocity(&bad, 64),
            Err(Error::NotMultiplicityFree)
        ));
    }

    #[test]
    fn multiplicity_free_law() {
        let p = Params::new(vec![2, 3], vec![1, 1], vec![q(0, 1), q(1, 3)], (2, 0)).unwrap();
        let rep = multiplicity_free_reciprocity(&p, 256).unwrap();
        assert!(rep.passed);
        let p = Params::new(vec![2, 3, 5], vec![1; 3], vec![q(0, 1), q(1, 3), q(1, 5)], (0, 3)).unwrap();
        let rep = multiplicity_free_reciprocity(&p, 256).unwrap();
        assert!(rep.passed);
        assert!(rep.summary.as_ref().unwrap().1.is_zero());
    }

    #[test]
    fn multiplicity_free_terms_match_residues() {
        let p = Params::new(vec![2, 3, 1], vec![2, 1, 1], vec![q(1, 4), q(1, 3), q(1, 7)], (1, 2)).unwrap();
        let e = Expansion::new(&p, 128).unwrap();
        let terms = multiplicity_free_terms(&p, e.work_prec()).unwrap();
        assert_eq!(terms.len(), e.terms().len());
        for (rho, v) in terms {
            let c = e.coefficient(&rho, 1).unwrap();
            let (abs, _) = v.rel_err(c, c);
            assert!(abs <= 2f64.powi(-100) * (1.0 + c.abs_f64()), "rho = {rho}");
        }
    }

    #[test]
    fn m_coefficients_by_hand() {
        let p = Params::simple(&[1, 1, 1], (3, 0)).unwrap();
        assert_eq!(m_coefficient(&p, 1).unwrap(), pi_pow(-1, 2));
        assert!(m_coefficient(&p, 2).unwrap().is_zero());
        assert_eq!(m_coefficient(&p, 3).unwrap(), PiScaled::one());
        let p = Params::new(vec![2, 3], vec![2, 3], vec![q(0, 1); 2], (1, 1)).unwrap();
        assert_eq!(m_coefficient(&p, 5).unwrap(), PiScaled::one());
        assert!(m_coefficient(&p, 6).is_err());
        let p = Params::simple(&[2, 4], (2, 0)).unwrap();
        assert!(matches!(m_coefficient(&p, 1), Err(Error::NotCoprime(_))));
    }

    #[test]
    fn m_coefficients_are_origin_residues() {
        let p = Params::new(vec![2, 3, 5], vec![2, 1, 2], vec![q(0, 1); 3], (1, 2)).unwrap();
        let e = Expansion::new(&p, 128).unwrap();
        for n in 1..=p.total_order() {
            let m = m_coefficient(&p, n).unwrap().to_complex(e.work_prec());
            let c = e.coefficient(&q(0, 1), n as usize).unwrap();
            let (abs, _) = m.rel_err(c, c);
            assert!(abs <= 2f64.powi(-100) * (1.0 + m.abs_f64()), "n = {n}");
        }
    }

    #[test]
    fn zagier_examples() {
        let (lhs, rhs) = zagier_sides(&[1, 1, 1], (3, 0), 128).unwrap();
        assert!(lhs.is_zero());
        assert!(rhs.is_zero());
        for j in [(3, 0), (0, 3)] {
            let rep = zagier_reciprocity(&[2, 3, 5], j, 256).unwrap();
            assert!(rep.passed, "{j:?}: {}", rep.max_rel_err);
        }
        assert!(matches!(
            zagier_sides(&[2, 4, 5], (3, 0), 64),
            Err(Error::NotCoprime(_))
        ));
    }
}
