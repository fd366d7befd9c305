mod common;

use std::f64::consts::PI;

use katz_core::field::{q, qi, Field, Q};
use katz_core::fuchsian::FuchsianSystem;
use katz_core::mult::mc_mult;
use katz_core::numeric::linalg::to_complex;
use katz_core::numeric::{
    abel_residual, monodromy_tuple, numeric_braid_act, numeric_conjugacy, numeric_mc, verify_rh, CMatrix, LoopConfig,
    RhConfig, RhStatus,
};
use katz_core::tuple::braid_act;
use katz_core::Matrix;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use common::*;

fn small_system(rng: &mut ChaCha8Rng, n: usize, r: usize) -> FuchsianSystem<Q> {
    let points = (0..r as i64).map(|k| qi(k - 1)).collect();
    let residues = (0..r)
        .map(|_| Matrix::from_fn(n, n, |_, _| q(rng.gen_range(-3..=3), rng.gen_range(4..=7))))
        .collect();
    FuchsianSystem::new(points, residues).unwrap()
}

fn dist(a: &CMatrix, b: &CMatrix) -> f64 {
    (a - b).norm()
}

#[test]
fn scalar_monodromy_is_exponential() {
    let sys = scalar_system(&[qi(-1), qi(0), q(3, 2)], &[q(1, 3), q(-1, 5), q(2, 7)]);
    let tuple = monodromy_tuple(&sys, &LoopConfig::default()).unwrap();
    for (&i, m) in tuple.loops.order.iter().zip(&tuple.matrices) {
        let a = [1.0 / 3.0, -0.2, 2.0 / 7.0][i];
        assert!((m[(0, 0)] - Complex64::from_polar(1.0, 2.0 * PI * a)).norm() < 1e-9);
    }
    assert!(tuple.product_residual < 1e-9);
    assert!(abel_residual(&sys, &tuple) < 1e-9);
}

#[test]
fn unipotent_monodromy() {
    let tuple = monodromy_tuple(&unipotent(), &LoopConfig::default()).unwrap();
    let expected = CMatrix::from_row_slice(
        2,
        2,
        &[Complex64::new(1.0, 0.0), Complex64::new(0.0, 2.0 * PI), Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
    );
    assert!(dist(&tuple.matrices[0], &expected) < 1e-9);
}

#[test]
fn constant_gauge_conjugates_the_monodromy() {
    let mut rng = rng(31);
    for _ in 0..4 {
        let sys = small_system(&mut rng, 2, 3);
        let s: Matrix<Q> = invertible(&mut rng, 2, 2);
        let s_inv = s.inverse().unwrap();
        let gauged =
            FuchsianSystem::new(sys.points().to_vec(), sys.residues().iter().map(|a| s_inv.mul(a).mul(&s)).collect())
                .unwrap();
        let m = monodromy_tuple(&sys, &LoopConfig::default()).unwrap();
        let g = monodromy_tuple(&gauged, &LoopConfig::default()).unwrap();
        let (sc, sc_inv) = (to_complex(&s), to_complex(&s_inv));
        for (a, b) in m.matrices.iter().zip(&g.matrices) {
            let scale = 1.0 + a.norm();
            assert!(dist(&(&sc_inv * a * &sc), b) < 1e-8 * scale);
        }
    }
}

#[test]
fn abel_relation_on_random_systems() {
    let mut rng = rng(32);
    for _ in 0..5 {
        let sys = small_system(&mut rng, 2, 3);
        let tuple = monodromy_tuple(&sys, &LoopConfig::default()).unwrap();
        assert!(abel_residual(&sys, &tuple) < 1e-8);
        assert!(tuple.product_residual < 1e-6 * (1.0 + tuple.product().norm()));
    }
}

#[test]
fn numeric_convolution_matches_exact() {
    let mut rng = rng(33);
    for lambda in [qi(2), qi(-1), q(1, 3)] {
        for _ in 0..5 {
            let n = rng.gen_range(1..=2);
            let a = good_tuple::<Q>(&mut rng, n, 3, 2);
            let exact = mc_mult(&a, &lambda).unwrap().quotient;
            let ca: Vec<CMatrix> = a.matrices().iter().map(to_complex).collect();
            let num = numeric_mc(&ca, lambda.to_complex(), 1e-10);
            assert_eq!(num.quotient[0].nrows(), exact.n());
            let ce: Vec<CMatrix> = exact.matrices().iter().map(to_complex).collect();
            let fit = numeric_conjugacy(&ce, &num.quotient, 1e-8).unwrap();
            assert!(fit.success, "residual {}", fit.residual);
        }
    }
}

#[test]
fn numeric_braids_match_exact() {
    let mut rng = rng(34);
    let a = random_tuple::<Q>(&mut rng, 2, 3);
    let ca: Vec<CMatrix> = a.matrices().iter().map(to_complex).collect();
    for word in [vec![1], vec![-2], vec![1, 2, -1], vec![2, 2, 1]] {
        let exact = braid_act(&word, &a).unwrap();
        let num = numeric_braid_act(&word, &ca).unwrap();
        for (e, m) in exact.matrices().iter().zip(&num) {
            assert!(dist(&to_complex(e), m) < 1e-9);
        }
    }
    assert!(numeric_braid_act(&[3], &ca).is_err());
}

#[test]
fn riemann_hilbert_on_random_systems() {
    let mut rng = rng(35);
    let mut passed = 0;
    for _ in 0..4 {
        let sys = small_system(&mut rng, 2, 2);
        let rep = verify_rh(&sys, &q(2, 5), &RhConfig::default()).unwrap();
        if !rep.hypotheses.hold() {
            assert_eq!(rep.status, RhStatus::HypothesisViolation);
            continue;
        }
        assert_eq!(rep.status, RhStatus::Pass, "residual {}", rep.residual);
        assert_eq!(rep.mc_dim, rep.convolved.n());
        passed += 1;
    }
    assert!(passed > 0);
}

#[test]
fn shifted_sum_rank_is_part_of_the_hypotheses() {
    // a₁+a₂+1/4 has eigenvalue 0 while a₁+a₂−3/4 is invertible, so mc_{−3/4}
    // is 3-dimensional but MC_λ(Mon) only 2-dimensional
    let sys = FuchsianSystem::new(
        vec![qi(0), qi(1)],
        vec![
            Matrix::from_rows(vec![vec![q(1, 4), q(1, 3)], vec![qi(0), q(1, 2)]]),
            Matrix::from_rows(vec![vec![qi(0), qi(0)], vec![q(1, 2), q(-5, 12)]]),
        ],
    )
    .unwrap();
    let rep = verify_rh(&sys, &q(1, 4), &RhConfig::default()).unwrap();
    assert_eq!(rep.hypotheses.sum_rank, (1, 1));
    assert_eq!(rep.hypotheses.shifted_sum_rank, 2);
    assert_eq!(rep.status, RhStatus::HypothesisViolation);
    assert_eq!((rep.mc_dim, rep.convolved.n()), (2, 3));
}
