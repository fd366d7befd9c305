use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::Field;
use crate::error::{Error, Result};

/// Arbitrary-precision rational, always in lowest terms with positive denominator.
pub type Q = BigRational;

pub fn q(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

pub fn qi(v: i64) -> Q {
    Q::from_integer(BigInt::from(v))
}

/// Parses `"p/q"`, `"p"` or `"-p/q"`.
pub fn parse_rational(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Q::new(num, den))
}

pub(crate) fn rational_to_f64(x: &Q) -> f64 {
    match (x.numer().to_f64(), x.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => {
            // Huge numerator/denominator: shift both down before dividing.
            let bits = x.numer().bits().max(x.denom().bits()) as i64 - 60;
            let shift = bits.max(0) as usize;
            let n = (x.numer() >> shift).to_f64().unwrap_or(0.0);
            let d = (x.denom() >> shift).to_f64().unwrap_or(1.0);
            n / d
        }
    }
}

impl Field for Q {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
    fn from_rational(value: &Q) -> Self {
        value.clone()
    }
    fn conj(&self) -> Self {
        self.clone()
    }
    fn to_complex(&self) -> Complex64 {
        Complex64::new(rational_to_f64(self), 0.0)
    }
    fn as_rational(&self) -> Option<Q> {
        Some(self.clone())
    }
    fn is_one(&self) -> bool {
        One::is_one(self)
    }
}
