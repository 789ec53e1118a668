//! Scalar abstraction shared by norms, profiles and bounds.
//!
//! Exact rationals and binary floats implement the same trait so that every
//! characteristic can be computed in whichever arithmetic the norm admits.

use std::fmt::{Debug, Display};

use num_integer::Roots;
use num_rational::Ratio;
use num_traits::{FromPrimitive, Signed, ToPrimitive, Zero};

use crate::report::ReportValue;

/// Numeric type a norm or characteristic can be evaluated in.
pub trait Scalar:
    Clone + Debug + Display + PartialOrd + Signed + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    /// `true` when arithmetic in this type never rounds.
    const EXACT: bool;

    fn from_int(v: i128) -> Self;

    /// Approximation of a real constant. Exact types return `None`.
    fn from_real(v: f64) -> Option<Self>;

    /// `self^p` for `self >= 0`; `None` when the result is not representable.
    fn pow_real(&self, p: f64) -> Option<Self>;

    /// The `p`-th root of `self >= 0`; `None` when not representable.
    fn root_real(&self, p: f64) -> Option<Self>;

    /// Parses `"a"`, `"a/b"` or a finite decimal such as `"1.75"`.
    fn parse_number(s: &str) -> Option<Self>;

    fn to_report(&self) -> ReportValue;

    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Relative tolerance used when comparing values of this type.
    fn tolerance() -> f64 {
        if Self::EXACT {
            0.0
        } else {
            1e-9
        }
    }

    /// `a <= b` up to [`Scalar::tolerance`].
    fn approx_le(a: &Self, b: &Self) -> bool {
        if Self::EXACT {
            return a <= b;
        }
        let (x, y) = (a.to_f64_lossy(), b.to_f64_lossy());
        x <= y + Self::tolerance() * x.abs().max(y.abs()).max(1.0)
    }

    fn approx_eq(a: &Self, b: &Self) -> bool {
        Self::approx_le(a, b) && Self::approx_le(b, a)
    }
}

/// Integer exponent if `p` is a small non-negative whole number.
pub(crate) fn integral_exponent(p: f64) -> Option<u32> {
    if p.fract() == 0.0 && (0.0..=64.0).contains(&p) {
        Some(p as u32)
    } else {
        None
    }
}

fn parse_decimal_parts(s: &str) -> Option<(i128, i128)> {
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let num: i128 = num.trim().parse().ok()?;
        let den: i128 = den.trim().parse().ok()?;
        if den == 0 {
            return None;
        }
        return Some((num, den));
    }
    let (sign, body) = match s.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let num: i128 = digits.parse().ok()?;
    let den = 10i128.checked_pow(frac_part.len() as u32)?;
    Some((sign * num, den))
}

macro_rules! float_scalar {
    ($t:ty) => {
        impl Scalar for $t {
            const EXACT: bool = false;

            fn from_int(v: i128) -> Self {
                v as $t
            }

            fn from_real(v: f64) -> Option<Self> {
                Some(v as $t)
            }

            fn pow_real(&self, p: f64) -> Option<Self> {
                Some(match integral_exponent(p) {
                    Some(e) => self.powi(e as i32),
                    None => self.powf(p as $t),
                })
            }

            fn root_real(&self, p: f64) -> Option<Self> {
                if p == 1.0 {
                    return Some(*self);
                }
                if p == 2.0 {
                    return Some(self.sqrt());
                }
                let r = self.powf(1.0 / p as $t);
                // snap to an exact integer root when one exists
                if let Some(e) = integral_exponent(p) {
                    let k = r.round();
                    if k.powi(e as i32) == *self {
                        return Some(k);
                    }
                }
                Some(r)
            }

            fn parse_number(s: &str) -> Option<Self> {
                if let Some((n, d)) = s.split_once('/') {
                    let n: $t = n.trim().parse().ok()?;
                    let d: $t = d.trim().parse().ok()?;
                    return (d != 0.0).then(|| n / d);
                }
                s.trim().parse().ok().filter(|v: &$t| v.is_finite())
            }

            fn to_report(&self) -> ReportValue {
                ReportValue::Float(*self as f64)
            }
        }
    };
}

float_scalar!(f32);
float_scalar!(f64);

fn checked_pow_i128(base: i128, e: u32) -> Option<i128> {
    base.checked_pow(e)
}

fn exact_root_i128(v: i128, e: u32) -> Option<i128> {
    if v < 0 {
        return None;
    }
    let r = v.nth_root(e);
    (checked_pow_i128(r, e)? == v).then_some(r)
}

impl Scalar for Ratio<i128> {
    const EXACT: bool = true;

    fn from_int(v: i128) -> Self {
        Ratio::from_integer(v)
    }

    fn from_real(_: f64) -> Option<Self> {
        None
    }

    fn pow_real(&self, p: f64) -> Option<Self> {
        let e = integral_exponent(p)?;
        Some(Ratio::new_raw(
            checked_pow_i128(*self.numer(), e)?,
            checked_pow_i128(*self.denom(), e)?,
        ))
    }

    fn root_real(&self, p: f64) -> Option<Self> {
        let e = integral_exponent(p).filter(|&e| e > 0)?;
        if self.is_zero() {
            return Some(Self::zero());
        }
        Some(Ratio::new(
            exact_root_i128(*self.numer(), e)?,
            exact_root_i128(*self.denom(), e)?,
        ))
    }

    fn parse_number(s: &str) -> Option<Self> {
        let (n, d) = parse_decimal_parts(s)?;
        Some(Ratio::new(n, d))
    }

    fn to_report(&self) -> ReportValue {
        if self.is_integer() {
            ReportValue::Int(*self.numer())
        } else {
            ReportValue::Rational(self.to_string())
        }
    }
}
