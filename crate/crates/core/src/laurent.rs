//! Laurent and Taylor coefficients of a single factor `a^m φ_m(az - w)`
//! around a rational center `z0`:
//!
//! ```text
//! a^m φ_m(az - w) = sgn(z0) (z - z0)^{-m} + Σ_{ν≥0} A_ν(z0) (z - z0)^ν
//! ```

use rug::{Integer, Rational};

use crate::complex::ComplexP;
use crate::exact_numbers::{binom, is_integer, laurent_alpha, Kind, PiScaled};
use crate::trig_kernel::phi_at_rational;

/// Exact decision whether `a·z0 - w` is an integer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShiftTest {
    pub is_integral: bool,
    /// The integer `a·z0 - w`, present exactly when `is_integral`.
    pub integer_value: Option<Integer>,
}

pub fn shift_test(a: u32, w: &Rational, z0: &Rational) -> ShiftTest {
    let x = Rational::from(z0 * a) - w;
    if is_integer(&x) {
        ShiftTest {
            is_integral: true,
            integer_value: Some(x.numer().clone()),
        }
    } else {
        ShiftTest {
            is_integral: false,
            integer_value: None,
        }
    }
}

/// Sign of the pole of `φ(az - w)` at `z0`: `0` if `z0` is not a pole,
/// otherwise `1` for the cot family and `(-1)^{a z0 - w}` for csc.
pub fn sgn(kind: Kind, z0: &Rational, a: u32, w: &Rational) -> i32 {
    match shift_test(a, w, z0).integer_value {
        None => 0,
        Some(k) if kind.is_csc() && k.is_odd() => -1,
        Some(_) => 1,
    }
}

/// A Laurent/Taylor coefficient. `exact_part` is present on the integral
/// branch, where the coefficient is a rational multiple of a power of π.
#[derive(Clone, Debug)]
pub struct ACoeff {
    pub value: ComplexP,
    pub exact_part: Option<PiScaled>,
}

/// `A_ν(z0; a, m, w)`, the order-`ν` Taylor coefficient of
/// `a^m φ_m(az - w)` at `z0` after removing the pole term.
pub fn coeff_a(kind: Kind, nu: u32, z0: &Rational, a: u32, m: u32, w: &Rational, prec: u32) -> ACoeff {
    assert!(a >= 1 && m >= 1, "coeff_a needs a, m >= 1");
    let scale = Integer::from(Integer::u_pow_u(a, m + nu));
    let sign = sgn(kind, z0, a, w);
    if sign != 0 {
        let al = laurent_alpha(kind, m + nu).expect("m + nu >= 1");
        let mut factor = Rational::from(binom(m + nu - 1, m - 1) * scale);
        if (m % 2 == 1) != (sign < 0) {
            factor = -factor;
        }
        let exact = al.scale(&factor);
        let value = exact.to_complex(prec);
        ACoeff {
            value,
            exact_part: Some(exact),
        }
    } else {
        let x = Rational::from(z0 * a) - w;
        let phi = phi_at_rational(kind, (m + nu) as usize, &x, prec).expect("non-integral argument");
        // (m)_ν / ν! = C(m + ν - 1, ν)
        let mut factor = binom(m + nu - 1, nu) * scale;
        if nu % 2 == 1 {
            factor = -factor;
        }
        ACoeff {
            value: phi.scale_integer(&factor),
            exact_part: None,
        }
    }
}
