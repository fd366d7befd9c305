//! Seeded generators shared by the integration tests.
#![allow(dead_code)]

use katz_core::field::{q, qi, Cyclo, Field, Q};
use katz_core::fuchsian::{FuchsianSystem, OkuboSystem};
use katz_core::lame::LameEquation;
use katz_core::tuple::{check_star, check_starstar, irreducible_abs, MatTuple};
use katz_core::Matrix;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn int_matrix<F: Field>(rng: &mut ChaCha8Rng, n: usize, bound: i64) -> Matrix<F> {
    Matrix::from_fn(n, n, |_, _| F::from_i64(rng.gen_range(-bound..=bound)))
}

pub fn invertible<F: Field>(rng: &mut ChaCha8Rng, n: usize, bound: i64) -> Matrix<F> {
    loop {
        let m = int_matrix(rng, n, bound);
        if m.is_invertible() {
            return m;
        }
    }
}

/// Invertible integer matrices with entries in `[−3, 3]`.
pub fn random_tuple<F: Field>(rng: &mut ChaCha8Rng, n: usize, r: usize) -> MatTuple<F> {
    MatTuple::new((0..r).map(|_| invertible(rng, n, 3)).collect()).unwrap()
}

/// Like [`random_tuple`], redrawn until (*), (**) and absolute
/// irreducibility hold.
pub fn good_tuple<F: Field>(rng: &mut ChaCha8Rng, n: usize, r: usize, bound: i64) -> MatTuple<F> {
    loop {
        let t = MatTuple::new((0..r).map(|_| invertible(rng, n, bound)).collect()).unwrap();
        if irreducible_abs(&t) && check_star(&t) && check_starstar(&t) {
            return t;
        }
    }
}

pub fn to_cyclo(t: &MatTuple<Q>) -> MatTuple<Cyclo> {
    MatTuple::new(t.matrices().iter().map(|m| m.map(|x| Cyclo::rational(x.clone()))).collect()).unwrap()
}

/// Monomial matrix with entries `ζ_order^k`: unitary for the standard form.
pub fn monomial(rng: &mut ChaCha8Rng, n: usize, order: u32) -> Matrix<Cyclo> {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut m = Matrix::zeros(n, n);
    for (i, &j) in perm.iter().enumerate() {
        m[(i, j)] = Cyclo::root_of_unity(order, rng.gen_range(0..order as i64));
    }
    m
}

pub fn small_rational(rng: &mut ChaCha8Rng) -> Q {
    q(rng.gen_range(-6..=6), rng.gen_range(1..=3))
}

/// Random Okubo system with integer points in `[−2, 2]`.
pub fn random_okubo(rng: &mut ChaCha8Rng, size: usize) -> OkuboSystem<Q> {
    let t = (0..size).map(|_| qi(rng.gen_range(-2..=2))).collect();
    let b = Matrix::from_fn(size, size, |_, _| small_rational(rng));
    OkuboSystem::new(t, b).unwrap()
}

pub fn scalar_system(points: &[Q], residues: &[Q]) -> FuchsianSystem<Q> {
    FuchsianSystem::new(points.to_vec(), residues.iter().map(|a| Matrix::from_rows(vec![vec![a.clone()]])).collect()).unwrap()
}

/// `L_{1/6}(4x³ − x, 0)` with roots `0, ±1/2`.
pub fn lame() -> LameEquation {
    LameEquation::new(q(1, 6), qi(0), [qi(0), q(1, 2), q(-1, 2)]).unwrap()
}

/// `Y′ = N/x · Y` with `N` a 2×2 Jordan block.
pub fn unipotent() -> FuchsianSystem<Q> {
    FuchsianSystem::new(vec![qi(0)], vec![Matrix::from_i64(&[&[0, 1], &[0, 0]])]).unwrap()
}
