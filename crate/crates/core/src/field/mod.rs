//! Exact scalar fields.
//!
//! Two fields implement [`Field`]: the rationals [`Q`] and the cyclotomic
//! fields [`Cyclo`].  Prime fields live in [`fp`] and are used by the
//! p-curvature code through their own polynomial type, since an element of
//! 𝔽_p cannot produce a zero without knowing `p`.

pub mod cyclo;
pub mod fp;
mod rational;

use std::fmt;

use num_complex::Complex64;

pub use cyclo::{cyclotomic_polynomial, euler_phi, Cyclo};
pub use fp::{is_prime, Fp};
pub use rational::{parse_rational, q, qi, Q};

/// A field with exact arithmetic and a fixed embedding into ℂ.
pub trait Field: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Multiplicative inverse, `None` for zero.
    fn inv(&self) -> Option<Self>;
    fn from_rational(value: &Q) -> Self;
    /// Complex conjugation (ζ ↦ ζ⁻¹ on cyclotomic fields).
    fn conj(&self) -> Self;
    /// Image under the embedding ζ_N ↦ e^{2πi/N}.
    fn to_complex(&self) -> Complex64;
    /// Returns the value if the element lies in ℚ.
    fn as_rational(&self) -> Option<Q>;

    fn from_i64(value: i64) -> Self {
        Self::from_rational(&qi(value))
    }

    fn is_one(&self) -> bool {
        self.sub(&Self::one()).is_zero()
    }

    fn div(&self, rhs: &Self) -> Option<Self> {
        rhs.inv().map(|r| self.mul(&r))
    }

    fn pow(&self, mut exp: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            exp >>= 1;
        }
        acc
    }
}
