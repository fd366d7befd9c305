//! Dense univariate polynomials and rational functions over a [`Field`].

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};

use crate::field::{Field, Q};

/// Polynomial with coefficients lowest degree first and no trailing zeros.
#[derive(Clone, PartialEq)]
pub struct Poly<F: Field> {
    coeffs: Vec<F>,
}

impl<F: Field> Poly<F> {
    pub fn new(mut coeffs: Vec<F>) -> Self {
        while coeffs.last().is_some_and(Field::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: F) -> Self {
        Poly::new(vec![c])
    }

    /// The polynomial `x`.
    pub fn x() -> Self {
        Poly::new(vec![F::zero(), F::one()])
    }

    /// `x - root`.
    pub fn linear(root: &F) -> Self {
        Poly::new(vec![root.neg(), F::one()])
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&F> {
        self.coeffs.last()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let zero = F::zero();
        Poly::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&zero).add(rhs.coeffs.get(i).unwrap_or(&zero)))
                .collect(),
        )
    }

    pub fn neg(&self) -> Self {
        Poly { coeffs: self.coeffs.iter().map(Field::neg).collect() }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![F::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        Poly::new(out)
    }

    pub fn scale(&self, c: &F) -> Self {
        Poly::new(self.coeffs.iter().map(|a| a.mul(c)).collect())
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead_inv = divisor.coeffs[dd].inv().expect("nonzero leading coefficient");
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut quot = vec![F::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = rem[k + dd].mul(&lead_inv);
            if c.is_zero() {
                continue;
            }
            for (j, dj) in divisor.coeffs.iter().enumerate() {
                rem[k + j] = rem[k + j].sub(&c.mul(dj));
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Poly::new(quot), Poly::new(rem))
    }

    pub fn rem(&self, divisor: &Self) -> Self {
        self.div_rem(divisor).1
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(l) => self.scale(&l.inv().expect("nonzero leading coefficient")),
            None => Poly::zero(),
        }
    }

    /// Returns `(g, s, t)` with `s·self + t·other = g`; `g` is not normalized.
    pub fn ext_gcd(&self, other: &Self) -> (Self, Self, Self) {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Poly::constant(F::one()), Poly::zero());
        let (mut t0, mut t1) = (Poly::zero(), Poly::constant(F::one()));
        while !r1.is_zero() {
            let (quot, rem) = r0.div_rem(&r1);
            let s2 = s0.sub(&quot.mul(&s1));
            let t2 = t0.sub(&quot.mul(&t1));
            r0 = std::mem::replace(&mut r1, rem);
            s0 = std::mem::replace(&mut s1, s2);
            t0 = std::mem::replace(&mut t1, t2);
        }
        (r0, s0, t0)
    }

    /// Monic greatest common divisor (zero if both are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        self.ext_gcd(other).0.monic()
    }

    pub fn derivative(&self) -> Self {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.mul(&F::from_i64(k as i64)))
                .collect(),
        )
    }

    pub fn eval(&self, x: &F) -> F {
        self.coeffs.iter().rev().fold(F::zero(), |acc, c| acc.mul(x).add(c))
    }
}

/// Distinct rational roots, in increasing order.
///
/// With `f` the squarefree integer part of degree `d` and leading
/// coefficient `c`, the roots `x` correspond to the integer roots `y = c·x` of
/// the monic `g(y) = c^{d−1} f(y/c)`. Those are found by Hensel lifting the
/// simple roots of `g` mod a small prime past the Cauchy bound.
pub fn rational_roots(p: &Poly<Q>) -> Vec<Q> {
    if p.is_zero() {
        return Vec::new();
    }
    let mut coeffs = p.coeffs().to_vec();
    let mut roots = Vec::new();
    if coeffs[0].is_zero() {
        roots.push(Q::zero());
        let lead = coeffs.iter().position(|c| !c.is_zero()).expect("nonzero polynomial");
        coeffs.drain(..lead);
    }
    let f = Poly::new(coeffs);
    let (sqfree, _) = f.div_rem(&f.gcd(&f.derivative()));
    let f = integer_coeffs(&sqfree);
    let d = f.len() - 1;
    if d == 0 {
        return roots;
    }
    let c = f[d].clone();
    let mut scale = BigInt::one();
    let mut g = vec![BigInt::one(); d + 1];
    for i in (0..d).rev() {
        g[i] = &f[i] * &scale;
        scale *= &c;
    }
    let bound = g.iter().map(|x| x.abs()).max().expect("nonempty") + BigInt::one();
    for y in integer_roots_of_monic(&g, &bound) {
        roots.push(Q::new(y, c.clone()));
    }
    roots.sort();
    roots.dedup();
    roots
}

/// Integer coefficients with the denominators of `p` cleared.
fn integer_coeffs(p: &Poly<Q>) -> Vec<BigInt> {
    let lcm = p.coeffs().iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    p.coeffs().iter().map(|c| (c * Q::from_integer(lcm.clone())).to_integer()).collect()
}

fn eval_int(g: &[BigInt], x: &BigInt) -> BigInt {
    g.iter().rev().fold(BigInt::from(0), |acc, c| acc * x + c)
}

fn derivative_int(g: &[BigInt]) -> Vec<BigInt> {
    g.iter().enumerate().skip(1).map(|(k, c)| c * BigInt::from(k)).collect()
}

/// All integer roots of the monic squarefree `g` with `|y| < bound`.
fn integer_roots_of_monic(g: &[BigInt], bound: &BigInt) -> Vec<BigInt> {
    let dg = derivative_int(g);
    let small_primes = (3u64..).filter(|&n| (2..n).take_while(|k| k * k <= n).all(|k| n % k != 0));
    for p in small_primes {
        let pb = BigInt::from(p);
        let residues: Vec<u64> = (0..p).filter(|&r| eval_int(g, &BigInt::from(r)).mod_floor(&pb).sign() == num_bigint::Sign::NoSign).collect();
        // every root mod p must be simple so that each lifts uniquely
        if residues.iter().any(|&r| eval_int(&dg, &BigInt::from(r)).mod_floor(&pb).sign() == num_bigint::Sign::NoSign) {
            continue;
        }
        let target = bound * BigInt::from(2);
        return residues
            .into_iter()
            .filter_map(|r| {
                let mut y = BigInt::from(r);
                let mut m = pb.clone();
                while m <= target {
                    m = &m * &m;
                    let inv = mod_inverse(&eval_int(&dg, &y), &m)?;
                    y = (&y - eval_int(g, &y) * inv).mod_floor(&m);
                }
                if &y * BigInt::from(2) > m {
                    y -= &m;
                }
                (eval_int(g, &y).sign() == num_bigint::Sign::NoSign).then_some(y)
            })
            .collect();
    }
    unreachable!("a squarefree polynomial has simple roots mod all but finitely many primes")
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    e.gcd.is_one().then(|| e.x.mod_floor(m))
}

impl<F: Field> fmt::Debug for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<F: Field> fmt::Display for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| match k {
                0 => format!("({c})"),
                1 => format!("({c})*x"),
                _ => format!("({c})*x^{k}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

/// Quotient of polynomials in lowest terms with monic denominator.
#[derive(Clone, PartialEq)]
pub struct RatFun<F: Field> {
    num: Poly<F>,
    den: Poly<F>,
}

impl<F: Field> RatFun<F> {
    /// Panics when `den` is zero.
    pub fn new(num: Poly<F>, den: Poly<F>) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return RatFun { num, den: Poly::constant(F::one()) };
        }
        let g = num.gcd(&den);
        let (mut num, _) = num.div_rem(&g);
        let (mut den, _) = den.div_rem(&g);
        let lead = den.leading().expect("nonzero").inv().expect("nonzero");
        num = num.scale(&lead);
        den = den.scale(&lead);
        RatFun { num, den }
    }

    pub fn from_poly(p: Poly<F>) -> Self {
        RatFun { num: p, den: Poly::constant(F::one()) }
    }

    pub fn constant(c: F) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    pub fn zero() -> Self {
        Self::from_poly(Poly::zero())
    }

    /// `c / (x - t)`.
    pub fn simple_pole(c: F, t: &F) -> Self {
        RatFun::new(Poly::constant(c), Poly::linear(t))
    }

    pub fn num(&self) -> &Poly<F> {
        &self.num
    }

    pub fn den(&self) -> &Poly<F> {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        RatFun::new(self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den)), self.den.mul(&rhs.den))
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        RatFun { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        RatFun::new(self.num.mul(&rhs.num), self.den.mul(&rhs.den))
    }

    /// `None` when dividing by zero.
    pub fn div(&self, rhs: &Self) -> Option<Self> {
        if rhs.is_zero() {
            return None;
        }
        Some(RatFun::new(self.num.mul(&rhs.den), self.den.mul(&rhs.num)))
    }

    /// Formal derivative by the quotient rule, in lowest terms.
    pub fn derivative(&self) -> Self {
        let num = self.num.derivative().mul(&self.den).sub(&self.num.mul(&self.den.derivative()));
        RatFun::new(num, self.den.mul(&self.den))
    }

    /// `None` at a pole.
    pub fn eval(&self, x: &F) -> Option<F> {
        self.num.eval(x).div(&self.den.eval(x))
    }
}

impl<F: Field> fmt::Debug for RatFun<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] / [{}]", self.num, self.den)
    }
}
