//! Classical instances: the two-factor product-to-sum identity, the
//! cotangent reciprocity formulas for `(p, q)` in the scaling with poles at
//! `πℤ`, and Apostol's higher-order Dedekind sums.

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use super::expansion::{eval_phi, Expansion};
use super::{ensure_precision, guard_bits, Comparison, VerificationReport};
use crate::complex::ComplexP;
use crate::error::{Error, Result};
use crate::exact_numbers::{bernoulli, factorial, is_integer, Kind};
use crate::laurent::sgn;
use crate::poles::{classify_case, Params};
use crate::trig_kernel::{phi, phi_at_rational, trig_values};

fn gcd(x: u32, y: u32) -> u32 {
    Integer::from(x).gcd(&Integer::from(y)).to_u32().unwrap_or(0)
}

fn require_coprime(p: u32, q: u32) -> Result<()> {
    if p == 0 || q == 0 || gcd(p, q) != 1 {
        return Err(Error::NotCoprime(format!("({p}, {q})")));
    }
    Ok(())
}

/// `(A1, A2)` with `A1 a2 + A2 a1 = 1` and `0 <= A1 < a1`.
pub fn bezout(a1: u32, a2: u32) -> Result<(Integer, Integer)> {
    require_coprime(a1, a2)?;
    let a1i = Integer::from(a1);
    let big_a1 = if a1 == 1 {
        Integer::new()
    } else {
        Integer::from(a2).invert(&a1i).expect("coprime")
    };
    let big_a2 = (Integer::from(1) - Integer::from(&big_a1 * a2)) / &a1i;
    Ok((big_a1, big_a2))
}

/// Sign of the shared pole `A1 w2 + A2 w1` in the two-factor identity.
pub fn r2_shared_sign(
    kinds: (Kind, Kind),
    a: (u32, u32),
    w: (&Rational, &Rational),
    big_a: (&Integer, &Integer),
) -> i32 {
    let center = Rational::from(big_a.0 * w.1) + Rational::from(big_a.1 * w.0);
    if kinds.0 == kinds.1 {
        let w_sum = Rational::from(w.0 + w.1);
        sgn(kinds.0, &center, a.0 + a.1, &w_sum)
    } else {
        sgn(kinds.0, &center, a.0, w.0) * sgn(kinds.1, &center, a.1, w.1)
    }
}

/// `δ_ℤ(a1 w2 - a2 w1) sgn₂ φ_2^{(J)}(z - (A1 w2 + A2 w1))`.
fn shared_pole_term(
    kinds: (Kind, Kind),
    j: Kind,
    a: (u32, u32),
    w: (&Rational, &Rational),
    big_a: (&Integer, &Integer),
    z: &ComplexP,
) -> Result<ComplexP> {
    let cross = Rational::from(w.1 * a.0) - Rational::from(w.0 * a.1);
    if !is_integer(&cross) {
        return Ok(ComplexP::zero(z.prec()));
    }
    let center = Rational::from(big_a.0 * w.1) + Rational::from(big_a.1 * w.0);
    let s = r2_shared_sign(kinds, a, w, big_a);
    let v = phi(j, 2, &z.add_rational(&Rational::from(-&center)))?;
    Ok(if s < 0 { -v } else { v })
}

fn block_split(kinds: (Kind, Kind)) -> Result<(usize, usize)> {
    match kinds {
        (Kind::Cot, Kind::Cot) => Ok((2, 0)),
        (Kind::Cot, Kind::Csc) => Ok((1, 1)),
        (Kind::Csc, Kind::Csc) => Ok((0, 2)),
        (k1, k2) => Err(Error::InadmissibleTriple(k1.to_string(), k2.to_string())),
    }
}

/// `a2 Σ'_{μ=0}^{a1-1} ± φ_1^{(K2)}(a2 (w1+μ)/a1 - w2) φ_1^{(J)}(z - (w1+μ)/a1)`,
/// skipping nodes where the first factor is singular.
fn node_sum(own: (u32, &Rational, Kind), other: (u32, &Rational, Kind), j: Kind, z: &ComplexP) -> Result<ComplexP> {
    let prec = z.prec();
    let (a_own, w_own, k_own) = own;
    let (a_other, w_other, k_other) = other;
    let mut acc = ComplexP::zero(prec);
    for mu in 0..a_own {
        let node = Rational::from(w_own + mu) / a_own;
        let x = Rational::from(&node * a_other) - w_other;
        if is_integer(&x) {
            continue;
        }
        let coeff = phi_at_rational(k_other, 1, &x, prec)?;
        let term = &coeff * &phi(j, 1, &z.add_rational(&Rational::from(-&node)))?;
        acc = if k_own.is_csc() && mu % 2 == 1 {
            &acc - &term
        } else {
            &acc + &term
        };
    }
    Ok(acc.scale_integer(&Integer::from(a_other)))
}

/// `a1 a2 φ_1^{(K1)}(a1 z - w1) φ_1^{(K2)}(a2 z - w2)` against its
/// product-to-sum expansion, at each of `points`.
pub fn r2_identity(
    a: (u32, u32),
    w: (&Rational, &Rational),
    kinds: (Kind, Kind),
    points: &[ComplexP],
    prec: u32,
) -> Result<VerificationReport> {
    ensure_precision(prec)?;
    require_coprime(a.0, a.1)?;
    let split = block_split(kinds)?;
    let p = Params::new(vec![a.0, a.1], vec![1, 1], vec![w.0.clone(), w.1.clone()], split)?;
    let j = classify_case(&p);
    let (big_a1, big_a2) = bezout(a.0, a.1)?;
    let work = prec + guard_bits(&p);
    let mut cmp = Comparison::new();
    for z in points {
        let z = z.with_prec(work);
        let lhs = eval_phi(&p, &z)?;
        let mut rhs = shared_pole_term(kinds, j, a, w, (&big_a1, &big_a2), &z)?;
        if kinds == (Kind::Cot, Kind::Cot) {
            let pi2 = ComplexP::pi(work).powu(2);
            rhs = &rhs - &pi2.scale_integer(&Integer::from(a.0 * a.1));
        }
        rhs = &rhs + &node_sum((a.0, w.0, kinds.0), (a.1, w.1, kinds.1), j, &z)?;
        rhs = &rhs + &node_sum((a.1, w.1, kinds.1), (a.0, w.0, kinds.0), j, &z)?;
        cmp.count_sample();
        let scale = lhs.clone();
        cmp.push(Some(z), lhs, rhs, &scale);
    }
    Ok(cmp.finish("r2", &p, j, prec, prec / 2, None))
}

/// `s_N(q; p) = (1 / (2^{N+1} p)) Σ_{μ=1}^{p-1} cot(π q μ / p) cot^{(N-1)}(π μ / p)`.
pub fn apostol_sum(n: u32, q: u32, p: u32, prec: u32) -> Result<ComplexP> {
    if n == 0 {
        return Err(Error::InvalidParams("s_N needs N >= 1".into()));
    }
    require_coprime(p, q)?;
    ensure_precision(prec)?;
    let work = prec + 32;
    let mut acc = ComplexP::zero(work);
    for mu in 1..p {
        let c = phi_at_rational(Kind::Cot, 1, &Rational::from((q * mu, p)), work)?;
        let d = phi_at_rational(Kind::Cot, n as usize, &Rational::from((mu, p)), work)?;
        acc = &acc + &(&c * &d);
    }
    // cot(πx) = φ_1/π and cot^{(N-1)}(πx) = (-1)^{N-1} (N-1)! π^{-N} φ_N
    let pi = Float::with_val(work, Constant::Pi);
    let pi_pow = Float::with_val(work, pi.pow(n + 1));
    let mut weight = Rational::from((factorial(n - 1), Integer::from(p) << (n + 1)));
    if n.is_multiple_of(2) {
        weight = -weight;
    }
    let v = acc
        .scale_rational(&weight)
        .scale(&Float::with_val(work, pi_pow.recip_ref()));
    Ok(v.with_prec(prec))
}

/// Closed form of `s_{2k+1}(q; p) + s_{2k+1}(p; q)`.
///
/// For `k >= 1` this is
/// `(-1)^k [ B_{2k+2} / (2pq(k+1)) + B_{2k+2} / ((2k+1)(2k+2)) (p^{2k+1}/q + q^{2k+1}/p)
///  + (2k)! Σ_{l=1}^{k} B_{2l} B_{2k+2-2l} / ((2l)! (2k+2-2l)!) p^{2l-1} q^{2k+1-2l} ]`.
pub fn apostol_rhs(k: u32, p: u32, q: u32) -> Rational {
    let (pr, qr) = (Rational::from(p), Rational::from(q));
    if k == 0 {
        let num = Integer::from(p * p) + q * q + 1u32 - Integer::from(3u32 * p * q);
        return Rational::from((num, Integer::from(12u32 * p * q)));
    }
    let b = bernoulli(2 * k as usize + 2);
    let e = 2 * k + 1;
    let mut s = &b / Rational::from(2 * p * q * (k + 1));
    let power_part = Rational::from(Integer::u_pow_u(p, e)) / &qr + Rational::from(Integer::u_pow_u(q, e)) / &pr;
    s += (&b / Rational::from((2 * k + 1) * (2 * k + 2))) * power_part;
    let mut inner = Rational::new();
    for l in 1..=k {
        let term = bernoulli(2 * l as usize) * bernoulli((2 * k + 2 - 2 * l) as usize)
            / Rational::from(factorial(2 * l) * factorial(2 * k + 2 - 2 * l));
        inner += term * Integer::from(Integer::u_pow_u(p, 2 * l - 1)) * Integer::from(Integer::u_pow_u(q, e - 2 * l));
    }
    s += inner * factorial(2 * k);
    if k % 2 == 1 {
        -s
    } else {
        s
    }
}

pub fn apostol_reciprocity(k: u32, p: u32, q: u32, prec: u32) -> Result<VerificationReport> {
    require_coprime(p, q)?;
    let mut cmp = Comparison::new();
    let n = 2 * k + 1;
    let lhs = &apostol_sum(n, q, p, prec + 32)? + &apostol_sum(n, p, q, prec + 32)?;
    let rhs = ComplexP::from_rational(prec + 32, &apostol_rhs(k, p, q));
    cmp.count_sample();
    cmp.push(None, lhs.clone(), rhs.clone(), &rhs);
    let params = Params::simple(&[p, q], (2, 0))?;
    Ok(cmp.finish(
        "apostol",
        &params,
        Kind::Cot,
        prec,
        prec / 2,
        Some((lhs.with_prec(prec), rhs.with_prec(prec))),
    ))
}

/// `Σ_{μ=1}^{p-1} φ_1^{(K1)}(qμ/p) φ_N^{(K2)}(μ/p)`, the raw sum behind the
/// Dedekind-type sums.
pub fn cotangent_sum(kinds: (Kind, Kind), n: u32, q: u32, p: u32, prec: u32) -> Result<ComplexP> {
    if n == 0 {
        return Err(Error::InvalidParams("order N must be >= 1".into()));
    }
    require_coprime(p, q)?;
    ensure_precision(prec)?;
    let work = prec + 32;
    let mut acc = ComplexP::zero(work);
    for mu in 1..p {
        let c = phi_at_rational(kinds.0, 1, &Rational::from((q * mu, p)), work)?;
        let d = phi_at_rational(kinds.1, n as usize, &Rational::from((mu, p)), work)?;
        acc = &acc + &(&c * &d);
    }
    Ok(acc.with_prec(prec))
}

fn fukuhara_kinds(case: u8, p: u32, q: u32) -> Result<(Kind, Kind)> {
    let ok = match case {
        0 => true,
        1 => q.is_multiple_of(2),
        2 => q % 2 == 1,
        3 => (p + q).is_multiple_of(2),
        4 => (p + q) % 2 == 1,
        _ => return Err(Error::OutOfRange(format!("case {case} is not one of 0..=4"))),
    };
    if !ok {
        return Err(Error::ParityMismatch { case, p, q });
    }
    Ok(match case {
        0 => (Kind::Cot, Kind::Cot),
        1 | 2 => (Kind::Cot, Kind::Csc),
        _ => (Kind::Csc, Kind::Csc),
    })
}

/// `cot` or `csc` of `Z` (poles at `πℤ`).
fn trig_of(kind: Kind, z: &ComplexP, pi: &Float) -> Result<ComplexP> {
    let t = trig_values(&z.scale(&Float::with_val(z.prec(), pi.recip_ref())))?;
    Ok(match kind {
        Kind::Cot => t.cot,
        Kind::Csc => t.csc,
    })
}

/// `cot` or `csc` of `π x` at a rational, non-integral `x`.
fn trig_at_rational(kind: Kind, x: &Rational, pi: &Float) -> Result<ComplexP> {
    let v = phi_at_rational(kind, 1, x, pi.prec())?;
    Ok(v.scale(&Float::with_val(pi.prec(), pi.recip_ref())))
}

/// `s Σ_{μ=1}^{d-1} (±1)^μ f(π s μ/d) g(Z - π μ/d)` with `s` the other modulus.
fn fukuhara_sum(
    (d, s): (u32, u32),
    alternating: bool,
    node_kind: Kind,
    shift_kind: Kind,
    z: &ComplexP,
    pi: &Float,
) -> Result<ComplexP> {
    let mut acc = ComplexP::zero(z.prec());
    for mu in 1..d {
        let x = Rational::from((s * mu, d));
        let c = trig_at_rational(node_kind, &x, pi)?;
        let shift = Float::with_val(z.prec(), pi * mu) / d;
        let g = trig_of(shift_kind, &(z - &ComplexP::from_real(shift)), pi)?;
        let term = &c * &g;
        acc = if alternating && mu % 2 == 1 {
            &acc - &term
        } else {
            &acc + &term
        };
    }
    Ok(acc.scale_integer(&Integer::from(s)))
}

/// One of the five cot/csc product formulas for coprime `(p, q)`, in the
/// scaling where the poles sit at `πℤ`, cross-checked against `Φ` and `Ψ`
/// under `z = Z/π`.
///
/// Case 0: `pq cot(pZ) cot(qZ)`. Cases 1, 2 (`q` even, odd):
/// `pq cot(pZ) csc(qZ)`. Cases 3, 4 (`p+q` even, odd): `pq csc(pZ) csc(qZ)`.
pub fn fukuhara_instance(case: u8, p: u32, q: u32, points: &[ComplexP], prec: u32) -> Result<VerificationReport> {
    let kinds = fukuhara_kinds(case, p, q)?;
    require_coprime(p, q)?;
    ensure_precision(prec)?;
    let split = block_split(kinds)?;
    let params = Params::simple(&[p, q], split)?;
    let expansion = Expansion::new(&params, prec)?;
    let work = expansion.work_prec();
    let pi = Float::with_val(work, Constant::Pi);
    let pi2 = Float::with_val(work, &pi * &pi);
    let inv_pi = Float::with_val(work, pi.recip_ref());
    let inv_pi2 = Float::with_val(work, pi2.recip_ref());
    let mut cmp = Comparison::new();
    for z in points {
        let z = z.with_prec(work);
        let pz = z.scale_integer(&Integer::from(p));
        let qz = z.scale_integer(&Integer::from(q));
        let lhs = (&trig_of(kinds.0, &pz, &pi)? * &trig_of(kinds.1, &qz, &pi)?).scale_integer(&Integer::from(p * q));
        let cot = trig_of(Kind::Cot, &z, &pi)?;
        let csc = trig_of(Kind::Csc, &z, &pi)?;
        // -cot' = csc², -csc' = csc·cot
        let (lead, shift_kind) = match case {
            0 | 1 | 3 => (&csc * &csc, Kind::Cot),
            _ => (&csc * &cot, Kind::Csc),
        };
        let mut rhs = lead;
        if case == 0 {
            rhs = &rhs - &ComplexP::from_integer(work, &Integer::from(p * q));
        }
        let (first, second) = match case {
            0 => ((false, Kind::Cot), (false, Kind::Cot)),
            1 | 2 => ((false, Kind::Csc), (true, Kind::Cot)),
            _ => ((true, Kind::Csc), (true, Kind::Csc)),
        };
        rhs = &rhs + &fukuhara_sum((p, q), first.0, first.1, shift_kind, &z, &pi)?;
        rhs = &rhs + &fukuhara_sum((q, p), second.0, second.1, shift_kind, &z, &pi)?;
        let unit = z.scale(&inv_pi);
        let big_phi = eval_phi(&params, &unit)?.scale(&inv_pi2);
        let big_psi = expansion.eval(&unit)?.scale(&inv_pi2);
        cmp.count_sample();
        let scale = lhs.clone();
        cmp.push(Some(z.clone()), lhs.clone(), rhs.clone(), &scale);
        cmp.push(Some(z.clone()), big_phi, lhs, &scale);
        cmp.push(Some(z), big_psi, rhs, &scale);
    }
    Ok(cmp.finish("fukuhara", &params, expansion.case(), prec, prec / 2, None))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    #[test]
    fn bezout_canonical() {
        let (a1, a2) = bezout(2, 3).unwrap();
        assert_eq!((a1.clone(), a2.clone()), (Integer::from(1), Integer::from(-1)));
        assert_eq!(a1 * 3 + a2 * 2, 1);
        let (a1, a2) = bezout(1, 4).unwrap();
        assert_eq!((a1, a2), (Integer::from(0), Integer::from(1)));
        let (a1, a2) = bezout(5, 7).unwrap();
        assert!((0..5).contains(&a1));
        assert_eq!(a1 * 7 + a2 * 5, 1);
        assert!(bezout(4, 6).is_err());
    }

    #[test]
    fn shared_pole_example() {
        let (a1, a2) = bezout(2, 3).unwrap();
        let (w1, w2) = (q(1, 2), q(3, 4));
        let center = Rational::from(&a1 * &w2) + Rational::from(&a2 * &w1);
        assert_eq!(center, q(1, 4));
        assert_eq!(
            r2_shared_sign((Kind::Cot, Kind::Cot), (2, 3), (&w1, &w2), (&a1, &a2)),
            1
        );
    }

    #[test]
    fn shared_term_is_bezout_invariant() {
        let z = ComplexP::new(200, 0.23, 0.41);
        let w = [q(0, 1), q(1, 2), q(1, 3), q(3, 4)];
        for (x, y) in [(2u32, 3u32), (3, 4), (1, 2), (5, 3)] {
            let (a1, a2) = bezout(x, y).unwrap();
            let (b1, b2) = (Integer::from(&a1 + x), Integer::from(&a2 - y));
            for kinds in [(Kind::Cot, Kind::Cot), (Kind::Cot, Kind::Csc), (Kind::Csc, Kind::Csc)] {
                let p = Params::simple(&[x, y], block_split(kinds).unwrap()).unwrap();
                let j = classify_case(&p);
                for w1 in &w {
                    for w2 in &w {
                        let t0 = shared_pole_term(kinds, j, (x, y), (w1, w2), (&a1, &a2), &z).unwrap();
                        let t1 = shared_pole_term(kinds, j, (x, y), (w1, w2), (&b1, &b2), &z).unwrap();
                        assert!((&t0 - &t1).abs_f64() < 1e-50, "{x},{y} {kinds:?} {w1} {w2}");
                    }
                }
            }
        }
    }

    #[test]
    fn two_factor_identity() {
        let pts = super::super::SamplePolicy::with_seed(3, 8).points(128).unwrap();
        let w = [q(0, 1), q(1, 2), q(3, 4), q(1, 3)];
        for (x, y) in [(1u32, 1u32), (2, 3), (3, 2), (4, 5)] {
            for kinds in [(Kind::Cot, Kind::Cot), (Kind::Cot, Kind::Csc), (Kind::Csc, Kind::Csc)] {
                for w1 in &w {
                    for w2 in &w {
                        let rep = r2_identity((x, y), (w1, w2), kinds, &pts, 128).unwrap();
                        assert!(rep.passed, "{x},{y} {kinds:?} {w1} {w2}: {}", rep.max_rel_err);
                    }
                }
            }
        }
        let z = [ComplexP::new(64, 0.3, 0.3)];
        assert!(matches!(
            r2_identity((2, 3), (&q(0, 1), &q(0, 1)), (Kind::Csc, Kind::Cot), &z, 64),
            Err(Error::InadmissibleTriple(..))
        ));
    }

    #[test]
    fn apostol_small_sums() {
        assert!(apostol_sum(1, 3, 2, 128).unwrap().abs_f64() < 1e-35);
        assert!(apostol_sum(1, 1, 1, 128).unwrap().is_zero());
        let v = apostol_sum(1, 2, 3, 256).unwrap();
        let want = ComplexP::from_rational(256, &q(-1, 18));
        assert!((&v - &want).abs_f64() < 1e-70);
        assert!(matches!(apostol_sum(1, 2, 4, 64), Err(Error::NotCoprime(_))));
    }

    #[test]
    fn apostol_closed_forms() {
        assert_eq!(apostol_rhs(0, 2, 3), q(-1, 18));
        assert_eq!(apostol_rhs(0, 1, 1), q(0, 1));
        let want = [
            ((2, 3), 1, q(-1, 27)),
            ((2, 3), 2, q(-1, 9)),
            ((3, 4), 1, q(-19, 216)),
            ((3, 4), 2, q(-37, 72)),
            ((5, 7), 1, q(-43, 175)),
            ((5, 7), 2, q(-5111, 1225)),
        ];
        for ((p, qq), k, v) in want {
            assert_eq!(apostol_rhs(k, p, qq), v, "({p},{qq}) k={k}");
        }
    }

    #[test]
    fn apostol_laws() {
        for (p, qq) in [(2, 3), (3, 4), (5, 7), (1, 1)] {
            for k in 0..=2 {
                let rep = apostol_reciprocity(k, p, qq, 256).unwrap();
                assert!(rep.passed, "({p},{qq}) k={k}: {}", rep.max_rel_err);
            }
        }
    }

    #[test]
    fn fukuhara_formulas() {
        let z = [ComplexP::new(128, 0.37, 0.21), ComplexP::new(128, 0.7, 0.3)];
        for case in 0..=4u8 {
            for (p, qq) in [(1, 1), (3, 2), (2, 3), (3, 5), (4, 7)] {
                match fukuhara_instance(case, p, qq, &z, 256) {
                    Ok(rep) => assert!(rep.passed, "case {case} ({p},{qq}): {}", rep.max_rel_err),
                    Err(Error::ParityMismatch { .. }) => {}
                    Err(e) => panic!("{e}"),
                }
            }
        }
        assert!(matches!(
            fukuhara_instance(1, 2, 3, &z, 64),
            Err(Error::ParityMismatch { case: 1, p: 2, q: 3 })
        ));
        assert!(fukuhara_instance(0, 2, 4, &z, 64).is_err());
    }

    #[test]
    fn raw_sum_is_dedekind_scaled() {
        // s(q, p) = (1/4p) Σ cot cot; s(1, 3) = 1/18
        let v = cotangent_sum((Kind::Cot, Kind::Cot), 1, 1, 3, 128).unwrap();
        let pi2 = ComplexP::pi(128).powu(2);
        let s = (&v / &pi2).scale_rational(&q(1, 12));
        assert!((&s - &ComplexP::from_rational(128, &q(1, 18))).abs_f64() < 1e-35);
    }
}
