//! Multiplicative convolution `C_λ` and middle convolution `MC_λ`.
//!
//! Block row `k` of `B_k` is
//! `(λ(A₁−1), …, λ(A_{k−1}−1), λA_k, A_{k+1}−1, …, A_r−1)`; all other
//! block rows are those of the identity.

use crate::error::{Error, Result};
use crate::field::Field;
use crate::matrix::Matrix;
use crate::subspace::{quotient_action, Subspace};
use crate::tuple::MatTuple;

/// `C_λ(A) = (B₁,…,B_r)` acting on `V^r`.
pub fn conv_mult<F: Field>(a: &MatTuple<F>, lambda: &F) -> Result<MatTuple<F>> {
    if lambda.is_zero() {
        return Err(Error::ZeroScalar("λ".into()));
    }
    let (n, r) = (a.n(), a.r());
    let id = Matrix::<F>::identity(n);
    let shifted: Vec<Matrix<F>> = a.matrices().iter().map(|m| m.sub(&id)).collect();
    let bs = (0..r)
        .map(|k| {
            let mut b = Matrix::identity(n * r);
            for j in 0..r {
                let block = match j.cmp(&k) {
                    std::cmp::Ordering::Less => shifted[j].scale(lambda),
                    std::cmp::Ordering::Equal => a.get(k).scale(lambda),
                    std::cmp::Ordering::Greater => shifted[j].clone(),
                };
                b.set_block(k * n, j * n, &block);
            }
            b
        })
        .collect();
    Ok(MatTuple::from_invertible(n * r, bs))
}

/// The invariant subspaces `𝒦 = ⊕𝒦_k` and `ℒ` of `C_λ(A)`.
pub fn mc_subspaces<F: Field>(a: &MatTuple<F>, lambda: &F) -> Result<(Subspace<F>, Subspace<F>)> {
    let (n, r) = (a.n(), a.r());
    let id = Matrix::<F>::identity(n);
    let mut k = Subspace::zero(n * r);
    for (idx, m) in a.matrices().iter().enumerate() {
        let block = Subspace::embed_block(&m.sub(&id).kernel(), idx, r);
        k = k.sum(&block)?;
    }
    let l = if lambda.is_one() {
        let b = conv_mult(a, lambda)?;
        let big = Matrix::<F>::identity(n * r);
        b.matrices()
            .iter()
            .map(|bk| bk.sub(&big).kernel())
            .try_fold(Subspace::full(n * r), |acc, s| acc.intersect(&s))?
    } else {
        if lambda.is_zero() {
            return Err(Error::ZeroScalar("λ".into()));
        }
        // tails[k] = A_{k+2}⋯A_r (1-based), tails[r-1] = 1
        let mut tails = vec![id.clone(); r];
        for k in (0..r.saturating_sub(1)).rev() {
            tails[k] = a.get(k + 1).mul(&tails[k + 1]);
        }
        let kernel = a.product().scale(lambda).sub(&id).kernel();
        let vectors = kernel
            .vectors()
            .map(|v| tails.iter().flat_map(|t| t.mul_vec(v)).collect())
            .collect();
        Subspace::from_vectors(n * r, vectors)
    };
    Ok((k, l))
}

/// Output of [`mc_mult`].
#[derive(Clone, Debug)]
pub struct ConvolutionResult<F: Field> {
    /// `C_λ(A)`.
    pub convolution: MatTuple<F>,
    pub k: Subspace<F>,
    pub l: Subspace<F>,
    /// `MC_λ(A)`, the action on `V^r/(𝒦+ℒ)`.
    pub quotient: MatTuple<F>,
}

impl<F: Field> ConvolutionResult<F> {
    pub fn dim(&self) -> usize {
        self.quotient.n()
    }
}

/// `MC_λ(A)`.
pub fn mc_mult<F: Field>(a: &MatTuple<F>, lambda: &F) -> Result<ConvolutionResult<F>> {
    let convolution = conv_mult(a, lambda)?;
    let (k, l) = mc_subspaces(a, lambda)?;
    let kl = k.sum(&l)?;
    if !lambda.is_one() {
        debug_assert_eq!(kl.dim(), k.dim() + l.dim(), "𝒦 + ℒ is not direct");
    }
    let mats = quotient_action(convolution.matrices(), &kl)
        .unwrap_or_else(|e| panic!("𝒦 + ℒ must be invariant under C_λ: {e}"));
    let quotient = MatTuple::from_invertible(convolution.n() - kl.dim(), mats);
    Ok(ConvolutionResult { convolution, k, l, quotient })
}

/// `Σ rk(A_k − 1) − (n − rk(λA₁⋯A_r − 1))`, valid for `λ ≠ 1`.
pub fn dim_formula<F: Field>(a: &MatTuple<F>, lambda: &F) -> Result<i64> {
    if lambda.is_one() {
        return Err(Error::LambdaIsOne);
    }
    let id = Matrix::<F>::identity(a.n());
    let ranks: i64 = a.matrices().iter().map(|m| m.sub(&id).rank() as i64).sum();
    let tail = a.product().scale(lambda).sub(&id).rank() as i64;
    Ok(ranks - (a.n() as i64 - tail))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{q, Cyclo, Q};

    fn scalars(v: &[i64]) -> MatTuple<Q> {
        MatTuple::new(v.iter().map(|&x| Matrix::from_i64(&[&[x]])).collect()).unwrap()
    }

    #[test]
    fn convolution_of_scalars() {
        let b = conv_mult(&scalars(&[2, 3]), &Q::from_i64(5)).unwrap();
        assert_eq!(b.get(0), &Matrix::from_i64(&[&[10, 2], &[0, 1]]));
        assert_eq!(b.get(1), &Matrix::from_i64(&[&[1, 0], &[5, 15]]));
        assert!(matches!(conv_mult(&scalars(&[2, 3]), &Q::zero()), Err(Error::ZeroScalar(_))));
    }

    #[test]
    fn convolution_of_identity_tuple() {
        let a = MatTuple::<Q>::new(vec![Matrix::identity(2); 3]).unwrap();
        let lam = Q::from_i64(7);
        let b = conv_mult(&a, &lam).unwrap();
        for k in 0..3 {
            let mut expected = Matrix::identity(6);
            expected.set_block(2 * k, 2 * k, &Matrix::scalar(2, lam.clone()));
            assert_eq!(b.get(k), &expected);
        }
    }

    #[test]
    fn subspaces_of_scalar_examples() {
        let (k, l) = mc_subspaces(&scalars(&[2, 3]), &Q::from_i64(5)).unwrap();
        assert!(k.is_zero() && l.is_zero());
        let (k, l) = mc_subspaces(&scalars(&[2, 3]), &q(1, 6)).unwrap();
        assert!(k.is_zero());
        assert_eq!(l, Subspace::from_vectors(2, vec![vec![Q::from_i64(3), Q::from_i64(1)]]));
        let (k, _) = mc_subspaces(&scalars(&[1, 1]), &Q::from_i64(5)).unwrap();
        assert_eq!(k.dim(), 2);
    }

    #[test]
    fn middle_convolution_dimensions() {
        let a = scalars(&[2, 3]);
        let res = mc_mult(&a, &Q::from_i64(5)).unwrap();
        assert_eq!(res.dim(), 2);
        assert_eq!(res.quotient, res.convolution);
        assert_eq!(dim_formula(&a, &Q::from_i64(5)).unwrap(), 2);
        assert_eq!(mc_mult(&a, &q(1, 6)).unwrap().dim(), 1);
        assert_eq!(dim_formula(&a, &q(1, 6)).unwrap(), 1);
        assert_eq!(mc_mult(&scalars(&[1, 1]), &Q::from_i64(-1)).unwrap().dim(), 0);
        assert_eq!(dim_formula(&scalars(&[1, 1]), &Q::from_i64(-1)).unwrap(), 0);
        assert_eq!(dim_formula(&a, &Q::one()), Err(Error::LambdaIsOne));
    }

    #[test]
    fn l_is_kernel_of_product_minus_one() {
        let a = MatTuple::<Cyclo>::new(vec![
            Matrix::from_i64(&[&[1, 2], &[0, -1]]),
            Matrix::from_i64(&[&[2, 1], &[1, 1]]),
        ])
        .unwrap();
        for lam in [Cyclo::from_i64(-1), Cyclo::root_of_unity(3, 1), Cyclo::one()] {
            let b = conv_mult(&a, &lam).unwrap();
            let big = Matrix::identity(4);
            let direct = b
                .matrices()
                .iter()
                .fold(Subspace::full(4), |acc, bk| acc.intersect(&bk.sub(&big).kernel()).unwrap());
            assert_eq!(direct, b.product().sub(&big).kernel());
            assert_eq!(mc_subspaces(&a, &lam).unwrap().1, direct);
        }
    }
}
