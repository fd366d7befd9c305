use katz_core::field::{q, qi, Cyclo, Field, Q};
use katz_core::{quotient_action, Matrix, Subspace};
use num_complex::Complex64;
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Q> {
    (-5i64..=5, 1i64..=4).prop_map(|(n, d)| q(n, d))
}

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = Matrix<Q>> {
    prop::collection::vec(rational(), rows * cols)
        .prop_map(move |v| Matrix::from_fn(rows, cols, |i, j| v[i * cols + j].clone()))
}

fn low_rank(n: usize) -> impl Strategy<Value = Matrix<Q>> {
    // product of n×k and k×n factors has rank ≤ k
    (0..=n).prop_flat_map(move |k| (matrix(n, k.max(1)), matrix(k.max(1), n)))
        .prop_map(|(a, b)| a.mul(&b))
}

fn cyclo(order: u32) -> impl Strategy<Value = Cyclo> {
    prop::collection::vec(-3i64..=3, order as usize).prop_map(move |c| Cyclo::from_coeffs(order, c.into_iter().map(qi).collect()))
}

fn close(a: Complex64, b: Complex64) -> bool {
    (a - b).norm() <= 1e-9 * (1.0 + a.norm().max(b.norm()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn rank_nullity_and_kernel(m in (1usize..=4, 1usize..=5).prop_flat_map(|(r, c)| matrix(r, c))) {
        let k = m.kernel();
        prop_assert_eq!(m.rank() + k.dim(), m.cols());
        for v in k.vectors() {
            prop_assert!(m.mul_vec(v).iter().all(Field::is_zero));
        }
        let r = m.rref();
        prop_assert_eq!(r.reduced.rref().reduced, r.reduced.clone());
        prop_assert_eq!(r.pivots.len(), r.rank);
    }

    #[test]
    fn determinant_detects_rank(m in (1usize..=4).prop_flat_map(low_rank)) {
        prop_assert_eq!(m.det().is_zero(), m.rank() < m.rows());
        if let Ok(inv) = m.inverse() {
            prop_assert!(m.mul(&inv).is_identity());
        }
    }

    #[test]
    fn sum_and_intersection_dimensions(a in matrix(3, 5), b in matrix(2, 5)) {
        let u = Subspace::from_vectors(5, a.to_rows());
        let v = Subspace::from_vectors(5, b.to_rows());
        let s = u.sum(&v).unwrap();
        let i = u.intersect(&v).unwrap();
        prop_assert_eq!(s.dim() + i.dim(), u.dim() + v.dim());
        prop_assert!(s.contains_subspace(&u) && s.contains_subspace(&v));
        prop_assert!(u.contains_subspace(&i) && v.contains_subspace(&i));
    }

    #[test]
    fn quotient_of_block_triangular_tuple(blocks in prop::collection::vec((matrix(2, 2), matrix(2, 3), matrix(3, 3)), 1..=3)) {
        // W = first two coordinates is invariant; F^5/W carries the lower right block
        let tuple: Vec<Matrix<Q>> = blocks
            .iter()
            .map(|(a, b, c)| {
                let mut m = Matrix::zeros(5, 5);
                m.set_block(0, 0, a);
                m.set_block(0, 2, b);
                m.set_block(2, 2, c);
                m
            })
            .collect();
        let w = Subspace::from_vectors(5, vec![vec![qi(1), qi(0), qi(0), qi(0), qi(0)], vec![qi(0), qi(1), qi(0), qi(0), qi(0)]]);
        let quot = quotient_action(&tuple, &w).unwrap();
        for (qm, (_, _, c)) in quot.iter().zip(&blocks) {
            prop_assert_eq!(qm, c);
        }
    }

    #[test]
    fn charpoly_annihilates(m in (1usize..=4).prop_flat_map(|n| matrix(n, n))) {
        let cp = m.charpoly();
        let n = m.rows();
        let mut acc: Matrix<Q> = Matrix::zeros(n, n);
        for c in cp.coeffs().iter().rev() {
            acc = acc.mul(&m).add(&Matrix::identity(n).scale(c));
        }
        prop_assert!(acc.is_zero());
        prop_assert_eq!(cp.coeffs()[0].clone(), if n % 2 == 0 { m.det() } else { m.det().neg() });
    }

    #[test]
    fn cyclotomic_field_axioms(a in cyclo(12), b in cyclo(12), c in cyclo(12)) {
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        if let Some(inv) = a.inv() {
            prop_assert!(a.mul(&inv).is_one());
        } else {
            prop_assert!(a.is_zero());
        }
    }

    #[test]
    fn embedding_is_a_homomorphism(a in cyclo(15), b in cyclo(15)) {
        prop_assert!(close(a.mul(&b).to_complex(), a.to_complex() * b.to_complex()));
        prop_assert!(close(a.add(&b).to_complex(), a.to_complex() + b.to_complex()));
        prop_assert!(close(a.conj().to_complex(), a.to_complex().conj()));
    }

    #[test]
    fn mixed_orders_agree_with_the_embedding(a in cyclo(4), b in cyclo(6)) {
        prop_assert!(close(a.mul(&b).to_complex(), a.to_complex() * b.to_complex()));
    }
}

#[test]
fn roots_of_unity_relations() {
    let z = Cyclo::root_of_unity(5, 1);
    let sum = (0..5).fold(Cyclo::zero(), |acc, k| acc.add(&z.pow(k)));
    assert!(sum.is_zero());
    assert_eq!(z.pow(5), Cyclo::one());
    assert_eq!(Cyclo::root_of_unity(6, 2), Cyclo::root_of_unity(3, 1));
    assert_eq!(Cyclo::exp_2pi_i(&q(-1, 4)), Cyclo::root_of_unity(4, 3));
    assert_eq!(z.conj(), z.inv().unwrap());
}
