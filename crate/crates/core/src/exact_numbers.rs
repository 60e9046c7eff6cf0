//! Exact rationals and the integer combinatorics shared by every module:
//! Bernoulli numbers, the even-zeta constants `α_μ`, binomials and rising
//! factorials.

use std::fmt;
use std::sync::{OnceLock, RwLock};

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Float, Integer, Rational};
use serde::{Deserialize, Serialize};

use crate::complex::ComplexP;
use crate::error::{Error, Result};

/// Which of the two periodic families a factor belongs to.
///
/// `Cot` is the cotangent family (period 1), `Csc` the cosecant family
/// (anti-period 1: `φ(z + 1) = -φ(z)`). They print as `I` and `II`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Kind {
    #[serde(rename = "I")]
    Cot,
    #[serde(rename = "II")]
    Csc,
}

impl Kind {
    pub fn is_csc(self) -> bool {
        self == Kind::Csc
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Cot => "I",
            Kind::Csc => "II",
        })
    }
}

impl std::str::FromStr for Kind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "I" | "i" | "1" | "cot" => Ok(Kind::Cot),
            "II" | "ii" | "2" | "csc" => Ok(Kind::Csc),
            _ => Err(Error::Parse {
                what: "kind",
                input: s.to_string(),
            }),
        }
    }
}

/// Exact value `coeff · π^pi_power`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiScaled {
    pub coeff: Rational,
    pub pi_power: u32,
}

impl PiScaled {
    pub fn new(coeff: Rational, pi_power: u32) -> Self {
        PiScaled { coeff, pi_power }
    }

    pub fn zero(pi_power: u32) -> Self {
        PiScaled::new(Rational::new(), pi_power)
    }

    pub fn one() -> Self {
        PiScaled::new(Rational::from(1), 0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.cmp0() == std::cmp::Ordering::Equal
    }

    pub fn mul(&self, other: &PiScaled) -> PiScaled {
        PiScaled::new(
            Rational::from(&self.coeff * &other.coeff),
            self.pi_power + other.pi_power,
        )
    }

    pub fn scale(&self, factor: &Rational) -> PiScaled {
        PiScaled::new(Rational::from(&self.coeff * factor), self.pi_power)
    }

    /// Sum of two values, `None` when both are nonzero with different π powers.
    pub fn checked_add(&self, other: &PiScaled) -> Option<PiScaled> {
        if other.is_zero() {
            return Some(self.clone());
        }
        if self.is_zero() {
            return Some(other.clone());
        }
        (self.pi_power == other.pi_power)
            .then(|| PiScaled::new(Rational::from(&self.coeff + &other.coeff), self.pi_power))
    }

    pub fn to_float(&self, prec: u32) -> Float {
        let pi = Float::with_val(prec, Constant::Pi);
        let pow = Float::with_val(prec, pi.pow(self.pi_power));
        Float::with_val(prec, &self.coeff * pow)
    }

    pub fn to_complex(&self, prec: u32) -> ComplexP {
        ComplexP::from_real(self.to_float(prec))
    }
}

impl fmt::Display for PiScaled {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.pi_power {
            0 => write!(f, "{}", self.coeff),
            1 => write!(f, "({})·π", self.coeff),
            n => write!(f, "({})·π^{}", self.coeff, n),
        }
    }
}

fn bernoulli_table() -> &'static RwLock<Vec<Rational>> {
    static TABLE: OnceLock<RwLock<Vec<Rational>>> = OnceLock::new();
    TABLE.get_or_init(|| RwLock::new(vec![Rational::from(1)]))
}

/// Bernoulli number `B_m` of `t / (e^t - 1)`, so `B_1 = -1/2`.
///
/// Computed from `Σ_{k=0}^{m} C(m+1, k) B_k = 0` and memoized.
pub fn bernoulli(m: usize) -> Rational {
    {
        let table = bernoulli_table().read().expect("bernoulli table poisoned");
        if let Some(b) = table.get(m) {
            return b.clone();
        }
    }
    let mut table = bernoulli_table().write().expect("bernoulli table poisoned");
    while table.len() <= m {
        let n = table.len();
        if n >= 3 && n % 2 == 1 {
            table.push(Rational::new());
            continue;
        }
        let mut acc = Rational::new();
        for (k, b) in table.iter().enumerate() {
            acc += Rational::from(binom(n as u32 + 1, k as u32)) * b;
        }
        acc /= -(n as i64 + 1);
        table.push(acc);
    }
    table[m].clone()
}

/// `α_μ` of the given family as an exact multiple of `π^μ`.
///
/// Zero for odd `μ`; for even `μ` this is `2ζ(μ)` (cot family) or
/// `2(1 - 2^{1-μ})ζ(μ)` (csc family).
pub fn alpha(kind: Kind, mu: u32) -> Result<PiScaled> {
    if mu == 0 {
        return Err(Error::InvalidParams("alpha requires mu >= 1".into()));
    }
    if mu % 2 == 1 {
        return Ok(PiScaled::zero(mu));
    }
    let sign: i32 = if (mu / 2 + 1).is_multiple_of(2) { 1 } else { -1 };
    let b_over_fact = bernoulli(mu as usize) / Rational::from(factorial(mu));
    let two_pow = Rational::from(Integer::from(1) << mu);
    let coeff = match kind {
        Kind::Cot => b_over_fact * two_pow * sign,
        Kind::Csc => {
            let weight = ((Integer::from(1) << (mu - 1)) - 1) * 2;
            b_over_fact * Rational::from(weight) * sign
        }
    };
    Ok(PiScaled::new(coeff, mu))
}

/// Coefficient that actually multiplies `(-1)^N C(N+ν-1, N-1) z^ν` in the
/// expansion of `φ_N` at 0: `alpha` for the cot family and `-alpha` for the
/// csc family, since `Σ_{n≠0} (-1)^n n^{-μ} = -2(1 - 2^{1-μ})ζ(μ)`.
pub fn laurent_alpha(kind: Kind, mu: u32) -> Result<PiScaled> {
    let a = alpha(kind, mu)?;
    Ok(match kind {
        Kind::Cot => a,
        Kind::Csc => PiScaled::new(-a.coeff, a.pi_power),
    })
}

pub fn factorial(n: u32) -> Integer {
    Integer::from(Integer::factorial(n))
}

/// Binomial coefficient, zero when `k > n`.
pub fn binom(n: u32, k: u32) -> Integer {
    if k > n {
        return Integer::new();
    }
    Integer::from(Integer::binomial_u(n, k))
}

/// Rising factorial `(m)_ν = m (m+1) ⋯ (m+ν-1)`, with `(m)_0 = 1`.
pub fn pochhammer(m: u32, nu: u32) -> Integer {
    (0..nu).fold(Integer::from(1), |acc, i| acc * (m + i))
}

/// `x - floor(x)`, with the floor returned alongside.
pub fn frac_floor(x: &Rational) -> (Rational, Integer) {
    let floor = Integer::from(x.floor_ref());
    (Rational::from(x - &floor), floor)
}

pub fn is_integer(x: &Rational) -> bool {
    *x.denom() == 1
}

/// Parse `"p/q"`, `"p"` or a terminating decimal such as `"0.25"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    let err = || Error::Parse {
        what: "rational",
        input: s.to_string(),
    };
    if let Some((int, frac)) = t.split_once('.') {
        if frac.is_empty() || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(err());
        }
        let digits = format!("{int}{frac}");
        let num: Integer = digits.parse().map_err(|_| err())?;
        let den = Integer::from(Integer::u_pow_u(10, frac.len() as u32));
        return Ok(Rational::from((num, den)));
    }
    let q: Rational = t.parse().map_err(|_| err())?;
    Ok(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    #[test]
    fn bernoulli_values() {
        assert_eq!(bernoulli(0), q(1, 1));
        assert_eq!(bernoulli(1), q(-1, 2));
        assert_eq!(bernoulli(2), q(1, 6));
        assert_eq!(bernoulli(4), q(-1, 30));
        assert_eq!(bernoulli(12), q(-691, 2730));
    }

    #[test]
    fn odd_bernoulli_vanish() {
        for m in (3..=41).step_by(2) {
            assert_eq!(bernoulli(m), 0, "B_{m}");
        }
    }

    #[test]
    fn bernoulli_recurrence_holds() {
        for m in 1..40u32 {
            let s: Rational = (0..=m)
                .map(|k| Rational::from(binom(m + 1, k)) * bernoulli(k as usize))
                .sum();
            assert_eq!(s, 0, "m = {m}");
        }
    }

    #[test]
    fn alpha_values() {
        assert!(alpha(Kind::Cot, 3).unwrap().is_zero());
        assert_eq!(alpha(Kind::Cot, 2).unwrap(), PiScaled::new(q(1, 3), 2));
        assert_eq!(alpha(Kind::Csc, 2).unwrap(), PiScaled::new(q(1, 6), 2));
        // 2ζ(4) = π^4/45
        assert_eq!(alpha(Kind::Cot, 4).unwrap(), PiScaled::new(q(1, 45), 4));
        assert!(alpha(Kind::Cot, 0).is_err());
    }

    #[test]
    fn laurent_alpha_matches_csc_expansion() {
        // π csc πz = 1/z + (π²/6) z + (7π⁴/360) z³ + ...
        assert_eq!(laurent_alpha(Kind::Csc, 2).unwrap(), PiScaled::new(q(-1, 6), 2));
        assert_eq!(laurent_alpha(Kind::Csc, 4).unwrap(), PiScaled::new(q(-7, 360), 4));
        assert_eq!(laurent_alpha(Kind::Cot, 2).unwrap(), alpha(Kind::Cot, 2).unwrap());
    }

    #[test]
    fn alpha_positive_and_ratio() {
        for mu in (2..=40).step_by(2) {
            let a1 = alpha(Kind::Cot, mu).unwrap();
            let a2 = alpha(Kind::Csc, mu).unwrap();
            assert!(a1.coeff > 0 && a2.coeff > 0, "mu = {mu}");
            let ratio = Rational::from(&a2.coeff / &a1.coeff);
            let expected = Rational::from(1) - Rational::from((1, Integer::from(1) << (mu - 1)));
            assert_eq!(ratio, expected, "mu = {mu}");
        }
    }

    #[test]
    fn alpha_matches_zeta_numerically() {
        // 2ζ(2) = π²/3, 2ζ(6) = 2π^6/945
        let v = alpha(Kind::Cot, 6).unwrap();
        assert_eq!(v.coeff, q(2, 945));
        let f = v.to_float(128);
        assert!((f.to_f64() - 2.0 * 1.017_343_061_984_449).abs() < 1e-12);
    }

    #[test]
    fn binom_and_pochhammer() {
        assert_eq!(binom(4, 2), 6);
        assert_eq!(binom(2, 4), 0);
        assert_eq!(pochhammer(3, 0), 1);
        assert_eq!(pochhammer(2, 3), 24);
        for m in 1..=10u32 {
            for nu in 1..=10u32 {
                let r = Rational::from(pochhammer(m, nu)) / Rational::from(binom(m + nu - 1, m - 1));
                assert_eq!(r, Rational::from(factorial(nu)));
            }
        }
    }

    #[test]
    fn pi_scaled_arithmetic() {
        let a = PiScaled::new(q(1, 3), 2);
        let b = PiScaled::new(q(1, 6), 2);
        assert_eq!(a.checked_add(&b).unwrap(), PiScaled::new(q(1, 2), 2));
        assert_eq!(a.mul(&b), PiScaled::new(q(1, 18), 4));
        assert!(a.checked_add(&PiScaled::new(q(1, 1), 3)).is_none());
        assert_eq!(a.checked_add(&PiScaled::zero(7)).unwrap(), a);
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rational("1/3").unwrap(), q(1, 3));
        assert_eq!(parse_rational(" 0 ").unwrap(), q(0, 1));
        assert_eq!(parse_rational("0.25").unwrap(), q(1, 4));
        assert_eq!(parse_rational("6/8").unwrap(), q(3, 4));
        assert!(parse_rational("x").is_err());
        assert!(parse_rational("1/0").is_err());
    }
}
