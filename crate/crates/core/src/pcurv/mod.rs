//! p-curvature of Fuchsian and Okubo systems over 𝔽_p(x).
//!
//! All rational functions that occur share the scalar denominator
//! `D(x) = Π(x − t̄ᵢ)` over the distinct singular points, so a matrix is kept
//! as `P(x) / D(x)^e` with `P` a polynomial matrix.

mod fppoly;

use std::time::{Duration, Instant};

use num_traits::Zero;
use rayon::prelude::*;

pub use fppoly::FpPoly;

use crate::error::{Error, Result};
use crate::field::{is_prime, Fp, Q};
use crate::fuchsian::{conv_add, mc_add, FuchsianSystem, OkuboSystem};
use crate::matrix::Matrix;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix {
    p: u64,
    size: usize,
    entries: Vec<FpPoly>,
}

impl PolyMatrix {
    pub fn zero(p: u64, size: usize) -> Self {
        PolyMatrix { p, size, entries: vec![FpPoly::zero(p); size * size] }
    }

    pub fn identity(p: u64, size: usize) -> Self {
        let mut m = PolyMatrix::zero(p, size);
        for i in 0..size {
            m.entries[i * size + i] = FpPoly::constant(p, 1);
        }
        m
    }

    /// Reduction of a rational constant matrix.
    pub fn from_rational(p: u64, m: &Matrix<Q>) -> Option<Self> {
        let size = m.rows();
        let mut entries = Vec::with_capacity(size * size);
        for i in 0..size {
            for j in 0..size {
                entries.push(FpPoly::constant(p, Fp::from_rational(p, &m[(i, j)])?.value()));
            }
        }
        Some(PolyMatrix { p, size, entries })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, i: usize, j: usize) -> &FpPoly {
        &self.entries[i * self.size + j]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(FpPoly::is_zero)
    }

    pub fn add(&self, rhs: &PolyMatrix) -> PolyMatrix {
        let entries = self.entries.iter().zip(&rhs.entries).map(|(a, b)| a.add(b)).collect();
        PolyMatrix { entries, ..*self }
    }

    pub fn mul(&self, rhs: &PolyMatrix) -> PolyMatrix {
        let n = self.size;
        let mut out = PolyMatrix::zero(self.p, n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        out.entries[i * n + j].add_assign(&a.mul(b));
                    }
                }
            }
        }
        out
    }

    pub fn scale(&self, f: &FpPoly) -> PolyMatrix {
        PolyMatrix { entries: self.entries.iter().map(|e| e.mul(f)).collect(), ..*self }
    }

    fn map(&self, f: impl Fn(&FpPoly) -> FpPoly) -> PolyMatrix {
        PolyMatrix { entries: self.entries.iter().map(f).collect(), ..*self }
    }

    /// Left multiplication by `diag(d)`.
    fn row_scale(&self, d: &[FpPoly]) -> PolyMatrix {
        let n = self.size;
        let entries = (0..n * n).map(|idx| self.entries[idx].mul(&d[idx / n])).collect();
        PolyMatrix { entries, ..*self }
    }

    fn sub_scalar(&self, c: u64) -> PolyMatrix {
        let mut m = self.clone();
        for i in 0..self.size {
            let e = &mut m.entries[i * self.size + i];
            *e = e.sub(&FpPoly::constant(self.p, c));
        }
        m
    }
}

/// `P(x) / D(x)^e` over 𝔽_p.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpRatFunMatrix {
    numer: PolyMatrix,
    denom: FpPoly,
    exponent: u32,
}

impl FpRatFunMatrix {
    pub fn p(&self) -> u64 {
        self.numer.p
    }
    pub fn size(&self) -> usize {
        self.numer.size
    }
    pub fn numerator(&self) -> &PolyMatrix {
        &self.numer
    }
    pub fn denominator(&self) -> &FpPoly {
        &self.denom
    }
    pub fn exponent(&self) -> u32 {
        self.exponent
    }
    pub fn is_zero(&self) -> bool {
        self.numer.is_zero()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PrimeStatus {
    Good,
    Bad(String),
}

impl PrimeStatus {
    pub fn is_good(&self) -> bool {
        matches!(self, PrimeStatus::Good)
    }
}

fn divides_denominator(p: u64, x: &Q) -> bool {
    Fp::from_rational(p, x).is_none()
}

fn check_prime<'a>(p: u64, points: &[Q], entries: impl Iterator<Item = &'a Q>, mu: Option<&Q>) -> PrimeStatus {
    if !is_prime(p) {
        return PrimeStatus::Bad(format!("{p} is not prime"));
    }
    if let Some(t) = points.iter().find(|t| divides_denominator(p, t)) {
        return PrimeStatus::Bad(format!("p divides the denominator of the point {t}"));
    }
    for (i, s) in points.iter().enumerate() {
        for t in &points[..i] {
            if s != t && Fp::from_rational(p, s) == Fp::from_rational(p, t) {
                return PrimeStatus::Bad(format!("points {t} and {s} coincide mod p"));
            }
        }
    }
    let mut entries = entries;
    if let Some(x) = entries.find(|x| divides_denominator(p, x)) {
        return PrimeStatus::Bad(format!("p divides the denominator of the residue entry {x}"));
    }
    if let Some(mu) = mu {
        let n1n2 = mu.numer() * mu.denom();
        if (n1n2 % num_bigint::BigInt::from(p)).is_zero() {
            return PrimeStatus::Bad(format!("p divides n1·n2 for μ = {mu}"));
        }
    }
    PrimeStatus::Good
}

/// Whether `a(𝔭)` of `sys` (and of its convolutions with parameter `μ`) is
/// defined at `p`.
pub fn good_prime(sys: &FuchsianSystem<Q>, mu: Option<&Q>, p: u64) -> PrimeStatus {
    check_prime(p, sys.points(), sys.residues().iter().flat_map(|m| m.entries()), mu)
}

pub fn good_prime_okubo(ok: &OkuboSystem<Q>, mu: Option<&Q>, p: u64) -> PrimeStatus {
    check_prime(p, &ok.distinct_points(), ok.b().entries(), mu)
}

fn reduce_points(p: u64, points: &[Q]) -> Vec<u64> {
    points.iter().map(|t| Fp::from_rational(p, t).expect("good prime").value()).collect()
}

fn product_of_linears(p: u64, roots: &[u64]) -> FpPoly {
    roots.iter().fold(FpPoly::constant(p, 1), |acc, &t| acc.mul(&FpPoly::linear(p, t)))
}

fn require_good(status: PrimeStatus, p: u64) -> Result<()> {
    match status {
        PrimeStatus::Good => Ok(()),
        PrimeStatus::Bad(reason) => Err(Error::BadPrime { p, reason }),
    }
}

/// `Σ aᵢ/(x − tᵢ)` reduced mod p.
pub fn system_matrix(sys: &FuchsianSystem<Q>, p: u64) -> Result<FpRatFunMatrix> {
    require_good(good_prime(sys, None, p), p)?;
    let ts = reduce_points(p, sys.points());
    let mut numer = PolyMatrix::zero(p, sys.n());
    for (i, a) in sys.residues().iter().enumerate() {
        let others: Vec<u64> = ts.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &t)| t).collect();
        let a_bar = PolyMatrix::from_rational(p, a).expect("good prime");
        numer = numer.add(&a_bar.scale(&product_of_linears(p, &others)));
    }
    Ok(FpRatFunMatrix { numer, denom: product_of_linears(p, &ts), exponent: 1 })
}

/// Per-row factors `D/(x − T_ii)` for an Okubo system.
fn okubo_row_factors(ok: &OkuboSystem<Q>, p: u64) -> (FpPoly, Vec<FpPoly>) {
    let distinct = ok.distinct_points();
    let ds = reduce_points(p, &distinct);
    let rows = ok
        .t()
        .iter()
        .map(|t| {
            let others: Vec<u64> = distinct.iter().zip(&ds).filter(|(s, _)| *s != t).map(|(_, &v)| v).collect();
            product_of_linears(p, &others)
        })
        .collect();
    (product_of_linears(p, &ds), rows)
}

/// `(x − T)⁻¹ b` reduced mod p.
pub fn okubo_system_matrix(ok: &OkuboSystem<Q>, p: u64) -> Result<FpRatFunMatrix> {
    require_good(good_prime_okubo(ok, None, p), p)?;
    let (denom, rows) = okubo_row_factors(ok, p);
    let b = PolyMatrix::from_rational(p, ok.b()).expect("good prime");
    Ok(FpRatFunMatrix { numer: b.row_scale(&rows), denom, exponent: 1 })
}

/// `â(n)` from `â(1) = a`, `â(m+1) = â(m)′ + â(m)·a`.
pub fn deriv_recursion(a: &FpRatFunMatrix, n: usize) -> FpRatFunMatrix {
    assert!(n >= 1, "derivative order must be positive");
    assert_eq!(a.exponent, 1, "recursion expects the system matrix A/D");
    let p = a.p();
    let d = &a.denom;
    let d_prime = d.derivative();
    let mut cur = a.numer.clone();
    // (P/D^m)' = (P'·D − m·D'·P) / D^{m+1}
    for m in 1..n {
        let m_dp = d_prime.scale(m as u64 % p);
        let deriv = cur.map(|e| e.derivative().mul(d).sub(&m_dp.mul(e)));
        cur = deriv.add(&cur.mul(&a.numer));
    }
    FpRatFunMatrix { numer: cur, denom: d.clone(), exponent: n as u32 }
}

/// `a(𝔭) = â(p) mod p` of a Fuchsian system.
pub fn p_curv_fuchsian(sys: &FuchsianSystem<Q>, mu: Option<&Q>, p: u64) -> Result<FpRatFunMatrix> {
    require_good(good_prime(sys, mu, p), p)?;
    Ok(deriv_recursion(&system_matrix(sys, p)?, p as usize))
}

/// `a(𝔭)` of an Okubo system from the closed product
/// `(x−T)⁻¹(b−p+1) ⋯ (x−T)⁻¹(b−1)·(x−T)⁻¹b`.
pub fn p_curv_okubo(ok: &OkuboSystem<Q>, p: u64) -> Result<FpRatFunMatrix> {
    require_good(good_prime_okubo(ok, None, p), p)?;
    let (denom, rows) = okubo_row_factors(ok, p);
    let b = PolyMatrix::from_rational(p, ok.b()).expect("good prime");
    let mut acc = PolyMatrix::identity(p, ok.size());
    for k in (0..p).rev() {
        acc = acc.mul(&b.sub_scalar(k).row_scale(&rows));
    }
    Ok(FpRatFunMatrix { numer: acc, denom, exponent: p as u32 })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Nilpotence {
    Index(usize),
    NotNilpotent,
}

impl Nilpotence {
    pub fn index(self) -> Option<usize> {
        match self {
            Nilpotence::Index(k) => Some(k),
            Nilpotence::NotNilpotent => None,
        }
    }

    fn at_most(self, bound: usize) -> bool {
        self.index().is_some_and(|k| k <= bound)
    }
}

/// Smallest `k` with `M^k = 0`. Only the numerator matters since the
/// denominator is scalar.
pub fn nilpotence_index(m: &FpRatFunMatrix) -> Nilpotence {
    if m.numer.is_zero() {
        return Nilpotence::Index(1);
    }
    let mut pow = m.numer.clone();
    for k in 2..=m.size() {
        pow = pow.mul(&m.numer);
        if pow.is_zero() {
            return Nilpotence::Index(k);
        }
    }
    Nilpotence::NotNilpotent
}

#[derive(Clone, Debug)]
pub struct PCurvReport {
    pub prime: u64,
    pub status: PrimeStatus,
    /// `None` for bad primes.
    pub nilpotence: Option<Nilpotence>,
    pub elapsed: Duration,
}

fn primes_up_to(p_max: u64) -> Vec<u64> {
    (2..=p_max).filter(|&p| is_prime(p)).collect()
}

fn scan_with(p_max: u64, status: impl Fn(u64) -> PrimeStatus + Sync, curv: impl Fn(u64) -> Result<FpRatFunMatrix> + Sync) -> Vec<PCurvReport> {
    primes_up_to(p_max)
        .into_par_iter()
        .map(|p| {
            let start = Instant::now();
            let status = status(p);
            let nilpotence = status.is_good().then(|| nilpotence_index(&curv(p).expect("good prime")));
            PCurvReport { prime: p, status, nilpotence, elapsed: start.elapsed() }
        })
        .collect()
}

pub fn scan_fuchsian(sys: &FuchsianSystem<Q>, mu: Option<&Q>, p_max: u64) -> Vec<PCurvReport> {
    scan_with(p_max, |p| good_prime(sys, mu, p), |p| p_curv_fuchsian(sys, None, p))
}

pub fn scan_okubo(ok: &OkuboSystem<Q>, mu: Option<&Q>, p_max: u64) -> Vec<PCurvReport> {
    scan_with(p_max, |p| good_prime_okubo(ok, mu, p), |p| p_curv_okubo(ok, p))
}

/// Nilpotence indices of a seed and of its convolutions at one prime.
#[derive(Clone, Debug)]
pub struct NilpoReport {
    pub prime: u64,
    pub seed: Nilpotence,
    /// `c_{−1}` and `mc_{−1}`.
    pub conv_minus_one: Nilpotence,
    pub mc_minus_one: Nilpotence,
    /// `c_{μ−1}` and `mc_{μ−1}`.
    pub conv_mu: Nilpotence,
    pub mc_mu: Nilpotence,
}

impl NilpoReport {
    /// `index(c_{−1}), index(mc_{−1}) ≤ k+1` and
    /// `index(c_{μ−1}), index(mc_{μ−1}) ≤ k+2`; vacuous when the seed is not
    /// nilpotent.
    pub fn bounds_hold(&self) -> bool {
        match self.seed {
            Nilpotence::NotNilpotent => true,
            Nilpotence::Index(k) => {
                self.conv_minus_one.at_most(k + 1)
                    && self.mc_minus_one.at_most(k + 1)
                    && self.conv_mu.at_most(k + 2)
                    && self.mc_mu.at_most(k + 2)
            }
        }
    }
}

fn index_of(sys: &FuchsianSystem<Q>, p: u64) -> Nilpotence {
    if sys.n() == 0 {
        return Nilpotence::Index(1);
    }
    nilpotence_index(&p_curv_fuchsian(sys, None, p).expect("good prime"))
}

/// Measures the seed index `k` and the indices of `c_{−1}`, `mc_{−1}`,
/// `c_{μ−1}`, `mc_{μ−1}` at every prime `p ≤ p_max` that is good for all five
/// systems.
pub fn nilpo_scan(sys: &FuchsianSystem<Q>, mu: &Q, p_max: u64) -> Vec<NilpoReport> {
    let minus_one = Q::from_integer((-1).into());
    let shifted = mu + &minus_one;
    let c1 = conv_add(sys, &minus_one);
    let m1 = mc_add(sys, &minus_one).system;
    let c2 = conv_add(sys, &shifted);
    let m2 = mc_add(sys, &shifted).system;
    primes_up_to(p_max)
        .into_par_iter()
        // the quotient coordinates of mc can carry denominators of their own
        .filter(|&p| {
            good_prime(sys, Some(mu), p).is_good()
                && [&c1, &m1, &c2, &m2].iter().all(|s| s.n() == 0 || good_prime(s, None, p).is_good())
        })
        .map(|p| NilpoReport {
            prime: p,
            seed: index_of(sys, p),
            conv_minus_one: index_of(&c1, p),
            mc_minus_one: index_of(&m1, p),
            conv_mu: index_of(&c2, p),
            mc_mu: index_of(&m2, p),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{q, qi};

    fn nilpotent_jordan() -> Matrix<Q> {
        Matrix::from_i64(&[&[0, 1], &[0, 0]])
    }

    #[test]
    fn prime_conditions() {
        let sys = FuchsianSystem::new(vec![qi(0), q(1, 2), q(-1, 2)], vec![Matrix::from_i64(&[&[1]]); 3]).unwrap();
        assert!(!good_prime(&sys, None, 2).is_good());
        let sys = FuchsianSystem::new(vec![qi(0), qi(1), qi(3)], vec![Matrix::from_i64(&[&[1]]); 3]).unwrap();
        assert!(!good_prime(&sys, None, 3).is_good());
        let sys = FuchsianSystem::new(vec![qi(0), qi(1)], vec![Matrix::from_i64(&[&[1]]); 2]).unwrap();
        assert!(good_prime(&sys, Some(&q(1, 3)), 5).is_good());
        assert!(!good_prime(&sys, Some(&q(1, 3)), 3).is_good());
        assert!(!good_prime(&sys, Some(&q(5, 3)), 5).is_good());
        assert!(!good_prime(&sys, None, 9).is_good());
    }

    #[test]
    fn first_derivative_is_the_system() {
        let sys = FuchsianSystem::new(vec![qi(0), qi(1)], vec![nilpotent_jordan(), Matrix::from_i64(&[&[1, 0], &[2, 3]])]).unwrap();
        let a = system_matrix(&sys, 7).unwrap();
        assert_eq!(deriv_recursion(&a, 1), a);
    }

    #[test]
    fn single_point_rank_one_vanishes() {
        for (alpha, p) in [(q(1, 3), 5), (q(2, 7), 11), (qi(4), 13)] {
            let sys = FuchsianSystem::new(vec![q(1, 2)], vec![Matrix::from_rows(vec![vec![alpha]])]).unwrap();
            assert!(p_curv_fuchsian(&sys, None, p).unwrap().is_zero());
        }
    }

    #[test]
    fn unipotent_example_mod_five() {
        let sys = FuchsianSystem::new(vec![qi(0)], vec![nilpotent_jordan()]).unwrap();
        let m = p_curv_fuchsian(&sys, None, 5).unwrap();
        // â(n) = (−1)^{n−1}(n−1)!·N/xⁿ, so â(5) = 24N/x⁵ ≡ 4N/x⁵.
        assert_eq!(m.exponent(), 5);
        assert_eq!(m.denominator(), &FpPoly::new(5, vec![0, 1]));
        assert_eq!(m.numerator().get(0, 1), &FpPoly::constant(5, 4));
        assert!(m.numerator().get(0, 0).is_zero() && m.numerator().get(1, 0).is_zero());
        assert_eq!(nilpotence_index(&m), Nilpotence::Index(2));
        let ok = OkuboSystem::new(vec![qi(0), qi(0)], nilpotent_jordan()).unwrap();
        assert_eq!(p_curv_okubo(&ok, 5).unwrap(), m);
    }

    #[test]
    fn nilpotence_examples() {
        let zero = FpRatFunMatrix { numer: PolyMatrix::zero(5, 3), denom: FpPoly::constant(5, 1), exponent: 0 };
        assert_eq!(nilpotence_index(&zero), Nilpotence::Index(1));
        let inv = FpRatFunMatrix { numer: PolyMatrix::identity(5, 2), denom: FpPoly::constant(5, 1), exponent: 0 };
        assert_eq!(nilpotence_index(&inv), Nilpotence::NotNilpotent);
    }

    #[test]
    fn okubo_closed_form_matches_recursion() {
        let ok = OkuboSystem::new(
            vec![qi(0), qi(1), qi(1)],
            Matrix::from_rows(vec![
                vec![q(1, 2), qi(1), qi(-2)],
                vec![qi(3), q(-1, 3), qi(0)],
                vec![qi(1), qi(1), q(2, 5)],
            ]),
        )
        .unwrap();
        let direct = p_curv_okubo(&ok, 7).unwrap();
        let recursive = deriv_recursion(&okubo_system_matrix(&ok, 7).unwrap(), 7);
        assert_eq!(direct, recursive);
    }

    #[test]
    fn bad_prime_is_an_error() {
        let sys = FuchsianSystem::new(vec![q(1, 5)], vec![nilpotent_jordan()]).unwrap();
        assert!(matches!(p_curv_fuchsian(&sys, None, 5), Err(Error::BadPrime { p: 5, .. })));
    }

    #[test]
    fn scan_skips_bad_primes_in_order() {
        let sys = FuchsianSystem::new(vec![qi(0)], vec![nilpotent_jordan()]).unwrap();
        let reports = scan_fuchsian(&sys, Some(&q(1, 3)), 13);
        let primes: Vec<u64> = reports.iter().map(|r| r.prime).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13]);
        assert!(reports[1].nilpotence.is_none());
        assert!(reports.iter().filter(|r| r.status.is_good()).all(|r| r.nilpotence == Some(Nilpotence::Index(2))));
    }
}
