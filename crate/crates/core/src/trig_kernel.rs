//! Closed-form evaluation of `φ_N` for complex arguments.
//!
//! With `c = cot πz` and `s = csc πz`,
//!
//! ```text
//! φ_N^{cot}(z) = π^N P_N(c),       P_1 = c, P_{N+1} = (1 + c²) P_N' / N
//! φ_N^{csc}(z) = π^N s Q_N(c),     Q_1 = 1, Q_{N+1} = (c Q_N + (1 + c²) Q_N') / N
//! ```
//!
//! which follows from `φ_N' = -N φ_{N+1}` and `φ_1 = π cot πz`, `π csc πz`.

use std::sync::{Arc, OnceLock, RwLock};

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use crate::complex::ComplexP;
use crate::error::{Error, Result};
use crate::exact_numbers::{frac_floor, is_integer, Kind};

/// Polynomial in `c = cot πz` with exact rational coefficients, lowest degree
/// first and no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrigPoly {
    coeffs: Vec<Rational>,
}

impl TrigPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| *c == 0) {
            coeffs.pop();
        }
        TrigPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Degree, with the zero polynomial reported as `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn derivative(&self) -> TrigPoly {
        TrigPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| Rational::from(c * k as u32))
                .collect(),
        )
    }

    fn add(&self, other: &TrigPoly) -> TrigPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        TrigPoly::new((0..n).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    /// Multiply by `c^shift`.
    fn shift(&self, shift: usize) -> TrigPoly {
        let mut coeffs = vec![Rational::new(); shift];
        coeffs.extend(self.coeffs.iter().cloned());
        TrigPoly::new(coeffs)
    }

    /// Multiply by `1 + c²`.
    fn times_one_plus_c2(&self) -> TrigPoly {
        self.add(&self.shift(2))
    }

    fn divide(&self, n: u32) -> TrigPoly {
        TrigPoly::new(self.coeffs.iter().map(|c| Rational::from(c / n)).collect())
    }

    /// Horner evaluation at a complex point.
    pub fn eval(&self, c: &ComplexP) -> ComplexP {
        let prec = c.prec();
        let mut acc = ComplexP::zero(prec);
        for coeff in self.coeffs.iter().rev() {
            acc = (&acc * c).add_rational(coeff);
        }
        acc
    }

    pub fn eval_real(&self, c: &Float) -> Float {
        let prec = c.prec();
        let mut acc = Float::new(prec);
        for coeff in self.coeffs.iter().rev() {
            acc *= c;
            acc += coeff;
        }
        acc
    }
}

type PolyTable = RwLock<Vec<Arc<TrigPoly>>>;

fn memoized(table: &'static PolyTable, n: usize, next: impl Fn(&TrigPoly, u32) -> TrigPoly) -> Arc<TrigPoly> {
    assert!(n >= 1, "polynomial index starts at 1");
    if let Some(p) = table.read().expect("poly table poisoned").get(n - 1) {
        return Arc::clone(p);
    }
    let mut t = table.write().expect("poly table poisoned");
    while t.len() < n {
        let k = t.len();
        let p = next(&t[k - 1], k as u32);
        t.push(Arc::new(p));
    }
    Arc::clone(&t[n - 1])
}

/// `P_N` with `φ_N^{cot}(z) = π^N P_N(cot πz)`.
pub fn cot_poly(n: usize) -> Arc<TrigPoly> {
    static TABLE: OnceLock<PolyTable> = OnceLock::new();
    let table =
        TABLE.get_or_init(|| RwLock::new(vec![Arc::new(TrigPoly::new(vec![Rational::new(), Rational::from(1)]))]));
    memoized(table, n, |p, k| p.derivative().times_one_plus_c2().divide(k))
}

/// `Q_N` with `φ_N^{csc}(z) = π^N csc(πz) Q_N(cot πz)`.
pub fn csc_poly(n: usize) -> Arc<TrigPoly> {
    static TABLE: OnceLock<PolyTable> = OnceLock::new();
    let table = TABLE.get_or_init(|| RwLock::new(vec![Arc::new(TrigPoly::new(vec![Rational::from(1)]))]));
    memoized(table, n, |q, k| {
        q.shift(1).add(&q.derivative().times_one_plus_c2()).divide(k)
    })
}

/// `cot πz` and `csc πz` at one point, the inputs to every `φ_N` there.
#[derive(Clone, Debug)]
pub struct TrigValues {
    pub cot: ComplexP,
    pub csc: ComplexP,
}

/// Smallest allowed distance from an integer, `2^{-P/4}`.
pub fn pole_threshold(prec: u32) -> Float {
    Float::with_val(prec, Float::u_exp(1, -((prec / 4) as i32)))
}

fn nearest_integer_distance(z: &ComplexP) -> Float {
    let prec = z.prec();
    let rounded = Float::with_val(prec, z.re().round_ref());
    let dx = Float::with_val(prec, z.re() - &rounded);
    Float::with_val(prec, dx.hypot_ref(z.im()))
}

/// `cot πz` and `csc πz` through the exponential form.
///
/// The real part is reduced modulo 1 (flipping `csc` on odd shifts) and the
/// exponential is always taken with nonpositive real exponent, so large
/// imaginary parts cannot overflow.
pub fn trig_values(z: &ComplexP) -> Result<TrigValues> {
    let prec = z.prec();
    if !z.is_finite() || nearest_integer_distance(z) < pole_threshold(prec) {
        return Err(Error::PoleProximity {
            arg: format!("{z:.20}"),
            threshold: format!("2^-{}", prec / 4),
        });
    }
    let work = prec + 16;
    let floor = Float::with_val(prec, z.re().floor_ref());
    let odd_shift = floor.to_integer().map(|k: Integer| k.is_odd()).unwrap_or(false);
    let x = Float::with_val(work, z.re() - &floor);
    let upper = *z.im() >= 0;
    // w = ±πz so that Im w >= 0
    let pi = Float::with_val(work, Constant::Pi);
    let (wx, wy) = if upper {
        (Float::with_val(work, &x * &pi), Float::with_val(work, z.im() * &pi))
    } else {
        (-Float::with_val(work, &x * &pi), -Float::with_val(work, z.im() * &pi))
    };
    // e = e^{iw}, |e| <= 1
    let e = ComplexP::from_parts(Float::with_val(work, -&wy), wx).exp();
    let q = &e * &e;
    let one = ComplexP::one(work);
    let den = &q - &one;
    let cot = (&(&q + &one) / &den).mul_i();
    let csc = (&e / &den).mul_i().scale_integer(&Integer::from(2));
    let (mut cot, mut csc) = if upper { (cot, csc) } else { (-cot, -csc) };
    if odd_shift {
        csc = -csc;
    }
    cot = cot.with_prec(prec);
    csc = csc.with_prec(prec);
    Ok(TrigValues { cot, csc })
}

/// `φ_N` of the given family from precomputed `cot πz`, `csc πz`.
pub fn phi_from_trig(kind: Kind, n: usize, t: &TrigValues) -> ComplexP {
    let prec = t.cot.prec();
    let pi_n = Float::with_val(prec, Float::with_val(prec, Constant::Pi).pow(n as u32));
    match kind {
        Kind::Cot => cot_poly(n).eval(&t.cot).scale(&pi_n),
        Kind::Csc => (&t.csc * &csc_poly(n).eval(&t.cot)).scale(&pi_n),
    }
}

/// `φ_N(z)` at the precision of `z`.
pub fn phi(kind: Kind, n: usize, z: &ComplexP) -> Result<ComplexP> {
    if n == 0 {
        return Err(Error::InvalidParams("phi requires N >= 1".into()));
    }
    Ok(phi_from_trig(kind, n, &trig_values(z)?))
}

/// `φ_N(x)` at a rational, non-integral point, computed with real MPFR
/// trigonometry after exact reduction of `x` modulo 1.
///
/// Returns an exact zero at `x ≡ 1/2` whenever the polynomial factor has no
/// constant term (`P_N` for odd `N`, `Q_N` for even `N`).
pub fn phi_at_rational(kind: Kind, n: usize, x: &Rational, prec: u32) -> Result<ComplexP> {
    if n == 0 {
        return Err(Error::InvalidParams("phi requires N >= 1".into()));
    }
    if is_integer(x) {
        return Err(Error::IntegerArgument(x.to_string()));
    }
    let (frac, floor) = frac_floor(x);
    let poly = match kind {
        Kind::Cot => cot_poly(n),
        Kind::Csc => csc_poly(n),
    };
    if frac == Rational::from((1, 2)) && poly.coeff(0) == 0 {
        return Ok(ComplexP::zero(prec));
    }
    let work = prec + 16;
    let pi = Float::with_val(work, Constant::Pi);
    let arg = Float::with_val(work, &pi * &frac);
    let cot = Float::with_val(work, arg.cot_ref());
    let mut value = poly.eval_real(&cot);
    if kind == Kind::Csc {
        let mut csc = Float::with_val(work, arg.csc_ref());
        if floor.is_odd() {
            csc = -csc;
        }
        value *= &csc;
    }
    value *= Float::with_val(work, pi.pow(n as u32));
    Ok(ComplexP::from_real(Float::with_val(prec, value)))
}
