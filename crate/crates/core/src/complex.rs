use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use rug::float::Constant;
use rug::{Assign, Float, Integer, Rational};

/// Complex number with MPFR real and imaginary parts at a fixed precision.
///
/// Binary operations produce the larger of the two operand precisions.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexP {
    re: Float,
    im: Float,
}

impl ComplexP {
    pub fn zero(prec: u32) -> Self {
        ComplexP {
            re: Float::new(prec),
            im: Float::new(prec),
        }
    }

    pub fn one(prec: u32) -> Self {
        Self::from_real(Float::with_val(prec, 1))
    }

    pub fn new(prec: u32, re: f64, im: f64) -> Self {
        ComplexP {
            re: Float::with_val(prec, re),
            im: Float::with_val(prec, im),
        }
    }

    pub fn from_parts(re: Float, im: Float) -> Self {
        let prec = re.prec().max(im.prec());
        ComplexP {
            re: Float::with_val(prec, re),
            im: Float::with_val(prec, im),
        }
    }

    pub fn from_real(re: Float) -> Self {
        let prec = re.prec();
        ComplexP {
            re,
            im: Float::new(prec),
        }
    }

    pub fn from_rational(prec: u32, x: &Rational) -> Self {
        Self::from_real(Float::with_val(prec, x))
    }

    pub fn from_integer(prec: u32, x: &Integer) -> Self {
        Self::from_real(Float::with_val(prec, x))
    }

    pub fn pi(prec: u32) -> Self {
        Self::from_real(Float::with_val(prec, Constant::Pi))
    }

    pub fn i(prec: u32) -> Self {
        ComplexP {
            re: Float::new(prec),
            im: Float::with_val(prec, 1),
        }
    }

    /// `e^{iθ}` for real `θ`.
    pub fn cis(theta: &Float) -> Self {
        let prec = theta.prec();
        let (s, c) = theta.clone().sin_cos(Float::new(prec));
        ComplexP { re: c, im: s }
    }

    pub fn prec(&self) -> u32 {
        self.re.prec()
    }

    pub fn re(&self) -> &Float {
        &self.re
    }

    pub fn im(&self) -> &Float {
        &self.im
    }

    /// Same value rounded (or zero-extended) to `prec` bits.
    pub fn with_prec(&self, prec: u32) -> Self {
        ComplexP {
            re: Float::with_val(prec, &self.re),
            im: Float::with_val(prec, &self.im),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    pub fn conj(&self) -> Self {
        ComplexP {
            re: self.re.clone(),
            im: Float::with_val(self.prec(), -&self.im),
        }
    }

    pub fn abs(&self) -> Float {
        Float::with_val(self.prec(), self.re.hypot_ref(&self.im))
    }

    pub fn abs_f64(&self) -> f64 {
        self.abs().to_f64()
    }

    pub fn norm_sqr(&self) -> Float {
        let prec = self.prec();
        Float::with_val(prec, self.re.square_ref()) + Float::with_val(prec, self.im.square_ref())
    }

    pub fn scale(&self, s: &Float) -> Self {
        let prec = self.prec().max(s.prec());
        ComplexP {
            re: Float::with_val(prec, &self.re * s),
            im: Float::with_val(prec, &self.im * s),
        }
    }

    pub fn scale_rational(&self, s: &Rational) -> Self {
        let prec = self.prec();
        ComplexP {
            re: Float::with_val(prec, &self.re * s),
            im: Float::with_val(prec, &self.im * s),
        }
    }

    pub fn scale_integer(&self, s: &Integer) -> Self {
        let prec = self.prec();
        ComplexP {
            re: Float::with_val(prec, &self.re * s),
            im: Float::with_val(prec, &self.im * s),
        }
    }

    pub fn add_rational(&self, s: &Rational) -> Self {
        ComplexP {
            re: Float::with_val(self.prec(), &self.re + s),
            im: self.im.clone(),
        }
    }

    pub fn mul_i(&self) -> Self {
        ComplexP {
            re: Float::with_val(self.prec(), -&self.im),
            im: self.re.clone(),
        }
    }

    pub fn recip(&self) -> Self {
        ComplexP::one(self.prec()) / self
    }

    pub fn powu(&self, n: u32) -> Self {
        let mut acc = ComplexP::one(self.prec());
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// `e^{z}`.
    pub fn exp(&self) -> Self {
        let prec = self.prec();
        let r = Float::with_val(prec, self.re.exp_ref());
        let (s, c) = self.im.clone().sin_cos(Float::new(prec));
        ComplexP {
            re: Float::with_val(prec, &r * &c),
            im: Float::with_val(prec, &r * &s),
        }
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }

    /// Decimal rendering of both parts with `digits` significant digits.
    pub fn to_decimal_pair(&self, digits: usize) -> (String, String) {
        (float_to_decimal(&self.re, digits), float_to_decimal(&self.im, digits))
    }

    /// Absolute distance `|self - other|` relative to `max(1, |reference|)`.
    pub fn rel_err(&self, other: &ComplexP, reference: &ComplexP) -> (f64, f64) {
        let abs = (self - other).abs();
        let mut scale = reference.abs();
        if scale < 1 {
            scale.assign(1);
        }
        let rel = Float::with_val(abs.prec(), &abs / &scale);
        (abs.to_f64(), rel.to_f64())
    }
}

/// Significant decimal digits that faithfully represent a `prec`-bit float.
pub fn faithful_digits(prec: u32) -> usize {
    (prec as f64 * std::f64::consts::LOG10_2).ceil() as usize + 1
}

pub fn float_to_decimal(x: &Float, digits: usize) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    x.to_string_radix(10, Some(digits))
}

impl fmt::Display for ComplexP {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(faithful_digits(self.prec()));
        let (re, im) = self.to_decimal_pair(digits);
        if let Some(mag) = im.strip_prefix('-') {
            write!(f, "{re} - {mag}i")
        } else {
            write!(f, "{re} + {im}i")
        }
    }
}

impl Add<&ComplexP> for &ComplexP {
    type Output = ComplexP;
    fn add(self, rhs: &ComplexP) -> ComplexP {
        let prec = self.prec().max(rhs.prec());
        ComplexP {
            re: Float::with_val(prec, &self.re + &rhs.re),
            im: Float::with_val(prec, &self.im + &rhs.im),
        }
    }
}

impl Sub<&ComplexP> for &ComplexP {
    type Output = ComplexP;
    fn sub(self, rhs: &ComplexP) -> ComplexP {
        let prec = self.prec().max(rhs.prec());
        ComplexP {
            re: Float::with_val(prec, &self.re - &rhs.re),
            im: Float::with_val(prec, &self.im - &rhs.im),
        }
    }
}

impl Mul<&ComplexP> for &ComplexP {
    type Output = ComplexP;
    fn mul(self, rhs: &ComplexP) -> ComplexP {
        let prec = self.prec().max(rhs.prec());
        let ac = Float::with_val(prec, &self.re * &rhs.re);
        let bd = Float::with_val(prec, &self.im * &rhs.im);
        let ad = Float::with_val(prec, &self.re * &rhs.im);
        let bc = Float::with_val(prec, &self.im * &rhs.re);
        ComplexP {
            re: ac - bd,
            im: ad + bc,
        }
    }
}

impl Div<&ComplexP> for &ComplexP {
    type Output = ComplexP;
    fn div(self, rhs: &ComplexP) -> ComplexP {
        let prec = self.prec().max(rhs.prec());
        let den = rhs.norm_sqr();
        let ac = Float::with_val(prec, &self.re * &rhs.re);
        let bd = Float::with_val(prec, &self.im * &rhs.im);
        let bc = Float::with_val(prec, &self.im * &rhs.re);
        let ad = Float::with_val(prec, &self.re * &rhs.im);
        ComplexP {
            re: (ac + bd) / &den,
            im: (bc - ad) / &den,
        }
    }
}

impl Neg for &ComplexP {
    type Output = ComplexP;
    fn neg(self) -> ComplexP {
        ComplexP {
            re: Float::with_val(self.prec(), -&self.re),
            im: Float::with_val(self.prec(), -&self.im),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<ComplexP> for ComplexP {
            type Output = ComplexP;
            fn $m(self, rhs: ComplexP) -> ComplexP {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&ComplexP> for ComplexP {
            type Output = ComplexP;
            fn $m(self, rhs: &ComplexP) -> ComplexP {
                (&self).$m(rhs)
            }
        }
        impl $tr<ComplexP> for &ComplexP {
            type Output = ComplexP;
            fn $m(self, rhs: ComplexP) -> ComplexP {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for ComplexP {
    type Output = ComplexP;
    fn neg(self) -> ComplexP {
        -&self
    }
}

impl std::iter::Sum for ComplexP {
    fn sum<I: Iterator<Item = ComplexP>>(iter: I) -> ComplexP {
        let mut it = iter;
        match it.next() {
            None => ComplexP::zero(crate::MIN_PRECISION),
            Some(first) => it.fold(first, |acc, x| acc + x),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_operations() {
        let a = ComplexP::new(128, 1.5, -2.0);
        let b = ComplexP::new(128, 0.25, 3.0);
        let q = &a / &b;
        let back = &q * &b;
        assert!((&back - &a).abs_f64() < 1e-35);
        assert_eq!((&a + &b).to_f64_pair(), (1.75, 1.0));
        assert_eq!((&a * &b).to_f64_pair(), (1.5 * 0.25 + 6.0, 4.5 - 0.5));
        assert_eq!(a.mul_i().to_f64_pair(), (2.0, 1.5));
        assert_eq!(a.powu(3), &(&a * &a) * &a);
    }

    #[test]
    fn exp_of_i_pi() {
        let z = ComplexP::pi(200).mul_i();
        let e = z.exp();
        assert!((&e + &ComplexP::one(200)).abs_f64() < 1e-58);
    }

    #[test]
    fn display_and_digits() {
        assert_eq!(faithful_digits(53), 17);
        let z = ComplexP::new(64, 0.5, -0.25);
        assert_eq!(format!("{z:.3}"), "5.00e-1 - 2.50e-1i");
    }

    #[test]
    fn mixed_precision_takes_max() {
        let a = ComplexP::new(64, 1.0, 0.0);
        let b = ComplexP::new(300, 1.0, 0.0);
        assert_eq!((&a + &b).prec(), 300);
    }
}
