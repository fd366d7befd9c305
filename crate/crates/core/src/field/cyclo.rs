//! Cyclotomic fields ℚ(ζ_N) in the power basis 1, ζ, …, ζ^{φ(N)−1}.
//!
//! Every element carries its order N.  Binary operations on elements of
//! different orders first lift both operands into ℚ(ζ_lcm), so rationals
//! (order 1) mix freely with any cyclotomic element.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, LazyLock, RwLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::rational::rational_to_f64;
use super::{Field, Q};
use crate::poly::Poly;

pub fn euler_phi(n: u32) -> usize {
    let mut n = n;
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result as usize
}

/// Integer coefficients of Φ_N, lowest degree first.
pub fn cyclotomic_polynomial(n: u32) -> Vec<BigInt> {
    assert!(n >= 1, "cyclotomic order must be positive");
    // x^N - 1
    let mut num = vec![BigInt::zero(); n as usize + 1];
    num[0] = -BigInt::one();
    num[n as usize] = BigInt::one();
    for d in 1..n {
        if n.is_multiple_of(d) {
            num = div_monic(&num, &cyclotomic_polynomial(d));
        }
    }
    num
}

fn div_monic(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let qd = rem.len() - 1 - dd;
    let mut quot = vec![BigInt::zero(); qd + 1];
    for k in (0..=qd).rev() {
        let c = rem[k + dd].clone();
        if c.is_zero() {
            continue;
        }
        for (j, dj) in den.iter().enumerate() {
            rem[k + j] -= &c * dj;
        }
        quot[k] = c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero));
    quot
}

pub(crate) struct CycloCtx {
    order: u32,
    phi: usize,
    modulus: Poly<Q>,
    /// `powers[k]` = ζ^k in the power basis, for 0 ≤ k < N.
    powers: Vec<Vec<Q>>,
}

impl CycloCtx {
    fn build(order: u32) -> Self {
        let phi = euler_phi(order);
        let modulus_int = cyclotomic_polynomial(order);
        let modulus = Poly::new(modulus_int.iter().map(|c| Q::from_integer(c.clone())).collect());
        let mut powers = Vec::with_capacity(order as usize);
        let mut cur = vec![<Q as Zero>::zero(); phi];
        cur[0] = <Q as One>::one();
        for _ in 0..order {
            powers.push(cur.clone());
            // multiply by ζ: shift, then reduce x^phi = -Σ m_i x^i
            let top = cur[phi - 1].clone();
            let mut next = vec![<Q as Zero>::zero(); phi];
            for i in (1..phi).rev() {
                next[i] = cur[i - 1].clone();
            }
            if !Zero::is_zero(&top) {
                for (i, mi) in modulus_int.iter().take(phi).enumerate() {
                    next[i] -= &top * Q::from_integer(mi.clone());
                }
            }
            cur = next;
        }
        CycloCtx { order, phi, modulus, powers }
    }
}

static CONTEXTS: LazyLock<RwLock<HashMap<u32, Arc<CycloCtx>>>> = LazyLock::new(Default::default);

pub(crate) fn context(order: u32) -> Arc<CycloCtx> {
    if let Some(ctx) = CONTEXTS.read().expect("cyclotomic cache poisoned").get(&order) {
        return ctx.clone();
    }
    let ctx = Arc::new(CycloCtx::build(order));
    CONTEXTS
        .write()
        .expect("cyclotomic cache poisoned")
        .entry(order)
        .or_insert(ctx)
        .clone()
}

/// An element of ℚ(ζ_N).
#[derive(Clone)]
pub struct Cyclo {
    ctx: Arc<CycloCtx>,
    coeffs: Vec<Q>,
}

impl Cyclo {
    /// Builds an element from power-basis coordinates. Extra coordinates are
    /// reduced modulo Φ_N.
    pub fn from_coeffs(order: u32, coeffs: Vec<Q>) -> Self {
        let ctx = context(order);
        let mut out = vec![<Q as Zero>::zero(); ctx.phi];
        for (k, c) in coeffs.into_iter().enumerate() {
            if Zero::is_zero(&c) {
                continue;
            }
            for (o, p) in out.iter_mut().zip(&ctx.powers[k % order as usize]) {
                if !Zero::is_zero(p) {
                    *o += &c * p;
                }
            }
        }
        Cyclo { ctx, coeffs: out }
    }

    pub fn rational(value: Q) -> Self {
        Cyclo { ctx: context(1), coeffs: vec![value] }
    }

    /// ζ_N^k.
    pub fn root_of_unity(order: u32, k: i64) -> Self {
        let ctx = context(order);
        let idx = k.rem_euclid(order as i64) as usize;
        let coeffs = ctx.powers[idx].clone();
        Cyclo { ctx, coeffs }
    }

    /// e^{2πiμ} for rational μ = n₁/n₂, i.e. ζ_{n₂}^{n₁}.
    pub fn exp_2pi_i(mu: &Q) -> Self {
        let den: u32 = mu.denom().try_into().expect("denominator too large for a cyclotomic order");
        let num = mu.numer().mod_floor(&BigInt::from(den));
        let num: i64 = num.try_into().expect("reduced numerator fits");
        Self::root_of_unity(den, num)
    }

    pub fn order(&self) -> u32 {
        self.ctx.order
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    /// Re-expresses the element in ℚ(ζ_M); `M` must be a multiple of the order.
    pub fn lift_to(&self, order: u32) -> Cyclo {
        let from = self.ctx.order;
        assert!(order.is_multiple_of(from), "cannot lift order {from} to {order}");
        if order == from {
            return self.clone();
        }
        let step = (order / from) as usize;
        let ctx = context(order);
        let mut out = vec![<Q as Zero>::zero(); ctx.phi];
        for (j, c) in self.coeffs.iter().enumerate() {
            if Zero::is_zero(c) {
                continue;
            }
            for (o, p) in out.iter_mut().zip(&ctx.powers[(j * step) % order as usize]) {
                if !Zero::is_zero(p) {
                    *o += c * p;
                }
            }
        }
        Cyclo { ctx, coeffs: out }
    }

    fn common(&self, rhs: &Cyclo) -> (Cyclo, Cyclo) {
        let l = self.ctx.order.lcm(&rhs.ctx.order);
        (self.lift_to(l), rhs.lift_to(l))
    }

    fn with_same_order<R>(&self, rhs: &Cyclo, f: impl FnOnce(&Cyclo, &Cyclo) -> R) -> R {
        if Arc::ptr_eq(&self.ctx, &rhs.ctx) || self.ctx.order == rhs.ctx.order {
            f(self, rhs)
        } else {
            let (a, b) = self.common(rhs);
            f(&a, &b)
        }
    }

    fn as_poly(&self) -> Poly<Q> {
        Poly::new(self.coeffs.clone())
    }

    fn from_poly(ctx: Arc<CycloCtx>, p: &Poly<Q>) -> Cyclo {
        let r = p.rem(&ctx.modulus);
        let mut coeffs = r.coeffs().to_vec();
        coeffs.resize(ctx.phi, <Q as Zero>::zero());
        Cyclo { ctx, coeffs }
    }
}

/// ζ_{2N}^k, a square root of ζ_N^k, as an element of ℚ(ζ_{2N}).
pub fn cyclo_sqrt_root(order: u32, k: i64) -> Cyclo {
    Cyclo::root_of_unity(2 * order, k)
}

impl PartialEq for Cyclo {
    fn eq(&self, other: &Self) -> bool {
        self.with_same_order(other, |a, b| a.coeffs == b.coeffs)
    }
}

impl fmt::Debug for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyclo[{}]{:?}", self.ctx.order, self.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>())
    }
}

impl fmt::Display for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.as_rational() {
            return write!(f, "{r}");
        }
        let mut first = true;
        for (j, c) in self.coeffs.iter().enumerate() {
            if Zero::is_zero(c) {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match j {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})*z{}", self.ctx.order)?,
                _ => write!(f, "({c})*z{}^{j}", self.ctx.order)?,
            }
        }
        Ok(())
    }
}

impl Field for Cyclo {
    fn zero() -> Self {
        Cyclo::rational(<Q as Zero>::zero())
    }
    fn one() -> Self {
        Cyclo::rational(<Q as One>::one())
    }
    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }
    fn add(&self, rhs: &Self) -> Self {
        self.with_same_order(rhs, |a, b| Cyclo {
            ctx: a.ctx.clone(),
            coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect(),
        })
    }
    fn sub(&self, rhs: &Self) -> Self {
        self.with_same_order(rhs, |a, b| Cyclo {
            ctx: a.ctx.clone(),
            coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x - y).collect(),
        })
    }
    fn mul(&self, rhs: &Self) -> Self {
        if let Some(r) = rhs.as_rational_ref() {
            return Cyclo { ctx: self.ctx.clone(), coeffs: self.coeffs.iter().map(|c| c * r).collect() };
        }
        if let Some(r) = self.as_rational_ref() {
            return Cyclo { ctx: rhs.ctx.clone(), coeffs: rhs.coeffs.iter().map(|c| c * r).collect() };
        }
        self.with_same_order(rhs, |a, b| {
            let ctx = &a.ctx;
            let phi = ctx.phi;
            let mut raw = vec![<Q as Zero>::zero(); 2 * phi - 1];
            for (i, x) in a.coeffs.iter().enumerate() {
                if Zero::is_zero(x) {
                    continue;
                }
                for (j, y) in b.coeffs.iter().enumerate() {
                    if !Zero::is_zero(y) {
                        raw[i + j] += x * y;
                    }
                }
            }
            let mut out: Vec<Q> = raw[..phi].to_vec();
            for (k, c) in raw.iter().enumerate().skip(phi) {
                if Zero::is_zero(c) {
                    continue;
                }
                for (o, p) in out.iter_mut().zip(&ctx.powers[k % ctx.order as usize]) {
                    if !Zero::is_zero(p) {
                        *o += c * p;
                    }
                }
            }
            Cyclo { ctx: ctx.clone(), coeffs: out }
        })
    }
    fn neg(&self) -> Self {
        Cyclo { ctx: self.ctx.clone(), coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if let Some(r) = self.as_rational_ref() {
            return Some(Cyclo { ctx: self.ctx.clone(), coeffs: {
                let mut v = vec![<Q as Zero>::zero(); self.ctx.phi];
                v[0] = r.recip();
                v
            } });
        }
        let (g, s, _) = self.as_poly().ext_gcd(&self.ctx.modulus);
        // Φ_N is irreducible, so g is a nonzero constant.
        debug_assert_eq!(g.degree(), Some(0));
        let s = s.scale(&g.coeffs()[0].recip());
        Some(Cyclo::from_poly(self.ctx.clone(), &s))
    }
    fn from_rational(value: &Q) -> Self {
        Cyclo::rational(value.clone())
    }
    fn conj(&self) -> Self {
        let n = self.ctx.order as usize;
        let mut out = vec![<Q as Zero>::zero(); self.ctx.phi];
        for (j, c) in self.coeffs.iter().enumerate() {
            if Zero::is_zero(c) {
                continue;
            }
            for (o, p) in out.iter_mut().zip(&self.ctx.powers[(n - j % n) % n]) {
                if !Zero::is_zero(p) {
                    *o += c * p;
                }
            }
        }
        Cyclo { ctx: self.ctx.clone(), coeffs: out }
    }
    fn to_complex(&self) -> Complex64 {
        let n = self.ctx.order as f64;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !Zero::is_zero(*c))
            .map(|(j, c)| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * j as f64 / n) * rational_to_f64(c))
            .sum()
    }
    fn as_rational(&self) -> Option<Q> {
        self.as_rational_ref().cloned()
    }
}

impl Cyclo {
    fn as_rational_ref(&self) -> Option<&Q> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{q, qi};

    #[test]
    fn small_cyclotomic_polynomials() {
        let ints = |v: &[i64]| v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
        assert_eq!(cyclotomic_polynomial(1), ints(&[-1, 1]));
        assert_eq!(cyclotomic_polynomial(4), ints(&[1, 0, 1]));
        assert_eq!(cyclotomic_polynomial(6), ints(&[1, -1, 1]));
        assert_eq!(cyclotomic_polynomial(12), ints(&[1, 0, -1, 0, 1]));
        assert_eq!(euler_phi(12), 4);
        assert_eq!(euler_phi(1), 1);
    }

    #[test]
    fn zeta_power_and_minimal_polynomial_vanish() {
        for n in [1u32, 2, 3, 4, 5, 6, 8, 9, 12, 15] {
            let z = Cyclo::root_of_unity(n, 1);
            assert!(z.pow(n as u64).is_one(), "ζ_{n}^{n} ≠ 1");
            let phi = cyclotomic_polynomial(n);
            let mut acc = Cyclo::zero();
            for (k, c) in phi.iter().enumerate() {
                acc = acc.add(&z.pow(k as u64).mul(&Cyclo::rational(Q::from_integer(c.clone()))));
            }
            assert!(acc.is_zero(), "Φ_{n}(ζ) ≠ 0");
        }
    }

    #[test]
    fn conjugation_of_i() {
        let i = Cyclo::root_of_unity(4, 1);
        assert_eq!(i.conj(), Cyclo::root_of_unity(4, 3));
        assert_eq!(i.conj(), i.neg());
        let r = Cyclo::rational(q(3, 7));
        assert_eq!(r.conj(), r);
    }

    #[test]
    fn sqrt_of_minus_one() {
        let s = cyclo_sqrt_root(2, 1);
        assert_eq!(s, Cyclo::root_of_unity(4, 1));
        assert_eq!(s.mul(&s), Cyclo::from_i64(-1));
    }

    #[test]
    fn mixed_orders_lift_to_lcm() {
        let z3 = Cyclo::root_of_unity(3, 1);
        let z4 = Cyclo::root_of_unity(4, 1);
        let p = z3.mul(&z4);
        assert_eq!(p.order(), 12);
        assert_eq!(p, Cyclo::root_of_unity(12, 7));
        assert_eq!(z3.add(&Cyclo::from_i64(1)).order(), 3);
        assert_eq!(Cyclo::root_of_unity(6, 2), z3);
    }

    #[test]
    fn inverse_and_exp() {
        let x = Cyclo::from_coeffs(5, vec![qi(2), qi(-1), q(1, 3), qi(0)]);
        let xi = x.inv().unwrap();
        assert!(x.mul(&xi).is_one());
        assert_eq!(Cyclo::exp_2pi_i(&q(-1, 3)), Cyclo::root_of_unity(3, 2));
        assert_eq!(Cyclo::exp_2pi_i(&q(1, 2)), Cyclo::from_i64(-1));
        let c = Cyclo::root_of_unity(8, 3).to_complex();
        let e = Complex64::from_polar(1.0, 3.0 * std::f64::consts::PI / 4.0);
        assert!((c - e).norm() < 1e-14);
    }
}
