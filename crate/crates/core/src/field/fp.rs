use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::Q;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// An element of 𝔽_p.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp {
    p: u64,
    value: u64,
}

impl Fp {
    pub fn new(p: u64, value: i64) -> Self {
        debug_assert!(is_prime(p));
        Fp { p, value: value.rem_euclid(p as i64) as u64 }
    }

    /// Reduction of a rational; `None` when `p` divides the denominator.
    pub fn from_rational(p: u64, x: &Q) -> Option<Self> {
        let pb = BigInt::from(p);
        let den = x.denom().mod_floor(&pb).to_u64()?;
        if den == 0 {
            return None;
        }
        let num = x.numer().mod_floor(&pb).to_u64()?;
        let d = Fp { p, value: den };
        Some(Fp { p, value: num }.mul(d.inv()?))
    }

    pub fn p(self) -> u64 {
        self.p
    }

    pub fn value(self) -> u64 {
        self.value
    }

    pub fn add(self, rhs: Fp) -> Fp {
        Fp { p: self.p, value: (self.value + rhs.value) % self.p }
    }

    pub fn sub(self, rhs: Fp) -> Fp {
        Fp { p: self.p, value: (self.value + self.p - rhs.value) % self.p }
    }

    pub fn mul(self, rhs: Fp) -> Fp {
        Fp { p: self.p, value: ((self.value as u128 * rhs.value as u128) % self.p as u128) as u64 }
    }

    pub fn neg(self) -> Fp {
        Fp { p: self.p, value: (self.p - self.value) % self.p }
    }

    pub fn pow(self, mut e: u64) -> Fp {
        let mut base = self;
        let mut acc = Fp { p: self.p, value: 1 % self.p };
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(base);
            }
            base = base.mul(base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(self) -> Option<Fp> {
        if self.value == 0 {
            None
        } else {
            Some(self.pow(self.p - 2))
        }
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }
}

impl fmt::Debug for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.p)
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::q;

    #[test]
    fn reduction_of_rationals() {
        assert_eq!(Fp::from_rational(7, &q(1, 2)).unwrap().value(), 4);
        assert_eq!(Fp::from_rational(5, &q(-7, 288)).unwrap().mul(Fp::new(5, 288)), Fp::new(5, -7));
        assert!(Fp::from_rational(3, &q(1, 6)).is_none());
    }

    #[test]
    fn fermat() {
        for p in [2u64, 3, 5, 7, 11, 13, 47] {
            for a in 0..p as i64 {
                let x = Fp::new(p, a);
                assert_eq!(x.pow(p), x);
            }
        }
        assert!(is_prime(47) && !is_prime(49) && !is_prime(1));
    }
}
