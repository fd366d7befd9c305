//! Dense polynomials over 𝔽_p with `u64` coefficients.

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpPoly {
    p: u64,
    coeffs: Vec<u64>,
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

impl FpPoly {
    pub fn new(p: u64, coeffs: Vec<u64>) -> Self {
        let mut out = FpPoly { p, coeffs: coeffs.into_iter().map(|c| c % p).collect() };
        out.trim();
        out
    }

    pub fn zero(p: u64) -> Self {
        FpPoly { p, coeffs: Vec::new() }
    }

    pub fn constant(p: u64, c: u64) -> Self {
        FpPoly::new(p, vec![c])
    }

    /// `x − t`.
    pub fn linear(p: u64, t: u64) -> Self {
        FpPoly::new(p, vec![(p - t % p) % p, 1])
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn add(&self, rhs: &FpPoly) -> FpPoly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let p = self.p;
        let coeffs = (0..len)
            .map(|i| {
                let a = self.coeffs.get(i).copied().unwrap_or(0);
                let b = rhs.coeffs.get(i).copied().unwrap_or(0);
                (a + b) % p
            })
            .collect();
        let mut out = FpPoly { p, coeffs };
        out.trim();
        out
    }

    pub fn add_assign(&mut self, rhs: &FpPoly) {
        if self.coeffs.len() < rhs.coeffs.len() {
            self.coeffs.resize(rhs.coeffs.len(), 0);
        }
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a = (*a + b) % self.p;
        }
        self.trim();
    }

    pub fn neg(&self) -> FpPoly {
        let p = self.p;
        FpPoly { p, coeffs: self.coeffs.iter().map(|&c| (p - c) % p).collect() }
    }

    pub fn sub(&self, rhs: &FpPoly) -> FpPoly {
        self.add(&rhs.neg())
    }

    pub fn scale(&self, c: u64) -> FpPoly {
        let p = self.p;
        FpPoly::new(p, self.coeffs.iter().map(|&a| mulmod(a, c % p, p)).collect())
    }

    pub fn mul(&self, rhs: &FpPoly) -> FpPoly {
        if self.is_zero() || rhs.is_zero() {
            return FpPoly::zero(self.p);
        }
        let p = self.p;
        let mut acc = vec![0u128; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                acc[i + j] += a as u128 * b as u128;
            }
        }
        FpPoly::new(p, acc.into_iter().map(|c| (c % p as u128) as u64).collect())
    }

    pub fn derivative(&self) -> FpPoly {
        let p = self.p;
        FpPoly::new(p, self.coeffs.iter().enumerate().skip(1).map(|(i, &c)| mulmod(c, i as u64 % p, p)).collect())
    }

    pub fn eval(&self, x: u64) -> u64 {
        self.coeffs.iter().rev().fold(0, |acc, &c| (mulmod(acc, x, self.p) + c) % self.p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_mod_seven() {
        let a = FpPoly::linear(7, 3); // x - 3
        let b = FpPoly::linear(7, 4); // x - 4
        assert_eq!(a.mul(&b), FpPoly::new(7, vec![12, 0, 1])); // x² - 7x + 12
        assert_eq!(a.sub(&b), FpPoly::constant(7, 1));
        assert_eq!(a.mul(&b).derivative(), FpPoly::new(7, vec![0, 2]));
        assert_eq!(a.mul(&b).eval(3), 0);
    }

    #[test]
    fn frobenius_derivative_vanishes() {
        let x5 = FpPoly::new(5, vec![0, 0, 0, 0, 0, 1]);
        assert!(x5.derivative().is_zero());
    }
}
