//! Brute-force evaluators that share no code path with the closed forms:
//! truncated bilateral series, trapezoidal contour extraction of Laurent
//! coefficients, and central finite differences.

use rayon::prelude::*;
use rug::float::Constant;
use rug::ops::Pow;
use rug::{Float, Rational};

use crate::complex::ComplexP;
use crate::error::{Error, Result};
use crate::exact_numbers::Kind;
use crate::trig_kernel::phi;

/// Smallest distance from an integer accepted by the series oracle.
pub const SERIES_EXCLUSION: f64 = 1e-3;

/// First node count tried by the contour extractor.
pub const CONTOUR_MIN_NODES: usize = 256;

/// Node cap after which the contour extractor gives up.
pub const CONTOUR_MAX_NODES: usize = 1 << 16;

#[derive(Clone, Debug)]
pub struct SeriesResult {
    pub value: ComplexP,
    pub truncation: u64,
    /// Guaranteed bound on `|value - φ_N(z)|`.
    pub tail_bound: f64,
}

fn check_series_args(z: &ComplexP, terms: u64) -> Result<f64> {
    let (x, y) = z.to_f64_pair();
    let dist = (x - x.round()).hypot(y);
    if dist < SERIES_EXCLUSION {
        return Err(Error::PoleProximity {
            arg: format!("{z:.20}"),
            threshold: format!("{SERIES_EXCLUSION}"),
        });
    }
    let az = z.abs_f64();
    if (terms as f64) < 4.0 * (az + 1.0) {
        return Err(Error::InvalidParams(format!(
            "series truncation M = {terms} must be at least 4(|z| + 1)"
        )));
    }
    Ok(az)
}

/// Tail bound of the symmetric partial sum with `terms` pairs.
///
/// For `N = 1` the two families behave differently: the cot pairs
/// `2z/(z² - n²)` decay like `1/n²` and sum to `O(|z|/M)`, while the
/// alternating csc pairs cancel once more and leave `O(|z|/M²)`.
pub fn series_tail_bound(kind: Kind, n: usize, abs_z: f64, terms: u64) -> f64 {
    let gap = terms as f64 - abs_z;
    match (n, kind) {
        (1, Kind::Cot) => 2.0 * abs_z / gap,
        (1, Kind::Csc) => 4.0 * abs_z / (gap * gap),
        _ => {
            let nf = n as f64;
            2.0 * (nf / (nf - 1.0)) * gap.powf(1.0 - nf)
        }
    }
}

fn rounding_allowance(terms: u64, prec: u32, value: &ComplexP) -> f64 {
    let scale = value.abs_f64().max(1.0);
    terms as f64 * 2f64.powi(-(prec as i32 - 8)) * scale
}

/// Symmetric partial sum `z^{-N} + Σ_{n=1}^{M} (±1)^n [(z+n)^{-N} + (z-n)^{-N}]`.
pub fn phi_series(kind: Kind, n: usize, z: &ComplexP, terms: u64) -> Result<SeriesResult> {
    if n == 0 {
        return Err(Error::InvalidParams("phi requires N >= 1".into()));
    }
    Ok(phi_series_batch(z, n, terms)?
        .into_iter()
        .find(|(k, order, _)| *k == kind && *order == n)
        .map(|(_, _, s)| s)
        .expect("batch covers every order up to n"))
}

/// Every `φ_N` for both families and `1 <= N <= max_n` from one pass over
/// the reciprocals `1/(z ± n)`.
pub fn phi_series_batch(z: &ComplexP, max_n: usize, terms: u64) -> Result<Vec<(Kind, usize, SeriesResult)>> {
    let abs_z = check_series_args(z, terms)?;
    let prec = z.prec();
    let mut cot: Vec<ComplexP> = Vec::with_capacity(max_n);
    let mut csc: Vec<ComplexP> = Vec::with_capacity(max_n);
    let inv = z.recip();
    let mut p = inv.clone();
    for _ in 0..max_n {
        cot.push(p.clone());
        csc.push(p.clone());
        p = &p * &inv;
    }
    for k in 1..=terms {
        let kf = rug::Integer::from(k);
        let plus = ComplexP::from_integer(prec, &kf);
        let up = (z + &plus).recip();
        let down = (z - &plus).recip();
        let mut pu = up.clone();
        let mut pd = down.clone();
        let odd = k % 2 == 1;
        for order in 0..max_n {
            let pair = &pu + &pd;
            cot[order] = &cot[order] + &pair;
            csc[order] = if odd { &csc[order] - &pair } else { &csc[order] + &pair };
            if order + 1 < max_n {
                pu = &pu * &up;
                pd = &pd * &down;
            }
        }
    }
    let mut out = Vec::with_capacity(2 * max_n);
    for (kind, values) in [(Kind::Cot, cot), (Kind::Csc, csc)] {
        for (i, value) in values.into_iter().enumerate() {
            let order = i + 1;
            let tail_bound = series_tail_bound(kind, order, abs_z, terms) + rounding_allowance(terms, prec, &value);
            out.push((
                kind,
                order,
                SeriesResult {
                    value,
                    truncation: terms,
                    tail_bound,
                },
            ));
        }
    }
    Ok(out)
}

/// Half the distance from `z0` to the nearest other point of `poles + ℤ`
/// (at most `1/2`, the gap to the integer translates of `z0` itself).
pub fn default_radius(z0: &Rational, poles: &[Rational]) -> Rational {
    let mut best = Rational::from(1);
    for rho in poles {
        let d = Rational::from(rho - z0);
        let (frac, _) = crate::exact_numbers::frac_floor(&d);
        for cand in [frac.clone(), Rational::from(1) - frac] {
            if cand > 0 && cand < best {
                best = cand;
            }
        }
    }
    best / 2
}

/// Trapezoid-rule Laurent coefficients of `f` around `z0` for each order in
/// `orders`, sharing one set of nodes on `|z - z0| = radius`.
///
/// Node counts double from `nodes` (a power of two, at least 256) until each
/// coefficient agrees with the previous level to `2^{-tol_bits}` relative to
/// `max(|c|, max|f| radius^{-order})`.
pub fn contour_coefficients<F>(
    f: F,
    z0: &Rational,
    orders: &[i32],
    radius: &Rational,
    nodes: usize,
    prec: u32,
    tol_bits: u32,
) -> Result<Vec<ComplexP>>
where
    F: Fn(&ComplexP) -> Result<ComplexP> + Sync,
{
    if !nodes.is_power_of_two() || nodes < CONTOUR_MIN_NODES {
        return Err(Error::InvalidParams(format!(
            "contour node count {nodes} must be a power of two >= {CONTOUR_MIN_NODES}"
        )));
    }
    if *radius <= 0 {
        return Err(Error::InvalidParams("contour radius must be positive".into()));
    }
    let center = ComplexP::from_rational(prec, z0);
    let r = Float::with_val(prec, radius);
    let two_pi = Float::with_val(prec, Constant::Pi) * 2u32;
    let sample = |j: usize, total: usize| -> Result<ComplexP> {
        let theta = Float::with_val(prec, &two_pi * j as u32) / total as u32;
        let offset = ComplexP::cis(&theta).scale(&r);
        f(&(&center + &offset))
    };

    let mut count = nodes;
    let mut values: Vec<ComplexP> = (0..count)
        .into_par_iter()
        .map(|j| sample(j, count))
        .collect::<Result<_>>()?;
    let mut previous = extract(&values, orders, &r, &two_pi);
    loop {
        let next_count = count * 2;
        if next_count > CONTOUR_MAX_NODES {
            return Err(Error::NoConvergence { nodes: count });
        }
        let odd: Vec<ComplexP> = (0..count)
            .into_par_iter()
            .map(|j| sample(2 * j + 1, next_count))
            .collect::<Result<_>>()?;
        let mut merged = Vec::with_capacity(next_count);
        for (even, odd) in values.into_iter().zip(odd) {
            merged.push(even);
            merged.push(odd);
        }
        values = merged;
        count = next_count;
        let current = extract(&values, orders, &r, &two_pi);
        let fmax = values
            .iter()
            .map(|v| v.abs())
            .fold(Float::new(prec), |acc, x| if x > acc { x } else { acc });
        let tol = Float::with_val(prec, Float::u_exp(1, -(tol_bits as i32)));
        let converged = orders.iter().zip(current.iter().zip(&previous)).all(|(&k, (c, p))| {
            let r_pow = Float::with_val(prec, r.clone().pow(-k));
            let mut scale = Float::with_val(prec, &fmax * &r_pow);
            let cabs = c.abs();
            if cabs > scale {
                scale = cabs;
            }
            (c - p).abs() <= Float::with_val(prec, &tol * &scale)
        });
        if converged {
            return Ok(current);
        }
        previous = current;
    }
}

fn extract(values: &[ComplexP], orders: &[i32], r: &Float, two_pi: &Float) -> Vec<ComplexP> {
    let prec = r.prec();
    let total = values.len();
    // e^{-2πij/N}
    let roots: Vec<ComplexP> = (0..total)
        .into_par_iter()
        .map(|j| ComplexP::cis(&(-Float::with_val(prec, two_pi * j as u32) / total as u32)))
        .collect();
    let inv_total = Float::with_val(prec, 1.0 / total as f64);
    orders
        .iter()
        .map(|&k| {
            // (1/N) Σ f(z_j) (r e^{iθ_j})^{-k}
            let mut acc = ComplexP::zero(prec);
            for (j, v) in values.iter().enumerate() {
                let idx = (k as i64 * j as i64).rem_euclid(total as i64) as usize;
                acc = &acc + &(v * &roots[idx]);
            }
            let r_pow = Float::with_val(prec, r.clone().pow(-k));
            acc.scale(&r_pow).scale(&inv_total)
        })
        .collect()
}

/// Single-order wrapper around [`contour_coefficients`] at tolerance `2^{-P/2}`.
pub fn contour_coefficient<F>(
    f: F,
    z0: &Rational,
    order: i32,
    radius: &Rational,
    nodes: usize,
    prec: u32,
) -> Result<ComplexP>
where
    F: Fn(&ComplexP) -> Result<ComplexP> + Sync,
{
    Ok(contour_coefficients(f, z0, &[order], radius, nodes, prec, prec / 2)?.remove(0))
}

/// `|(φ_N(z+h) - φ_N(z-h))/(2h) + N φ_{N+1}(z)|`, which is `O(h²)`.
pub fn finite_diff_check(kind: Kind, n: usize, z: &ComplexP, h: f64) -> Result<f64> {
    let (x, y) = z.to_f64_pair();
    if (x - x.round()).hypot(y) < 10.0 * h {
        return Err(Error::PoleProximity {
            arg: format!("{z:.20}"),
            threshold: format!("{}", 10.0 * h),
        });
    }
    let prec = z.prec();
    let step = ComplexP::new(prec, h, 0.0);
    let fwd = phi(kind, n, &(z + &step))?;
    let bwd = phi(kind, n, &(z - &step))?;
    let diff = (&fwd - &bwd).scale(&Float::with_val(prec, 0.5 / h));
    let next = phi(kind, n + 1, z)?.scale_integer(&rug::Integer::from(n));
    Ok((&diff + &next).abs_f64())
}
