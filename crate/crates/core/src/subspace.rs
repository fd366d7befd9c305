//! Subspaces of F^n in canonical reduced-echelon form.

use crate::error::{Error, Result};
use crate::field::Field;
use crate::matrix::Matrix;

/// A subspace stored by the nonzero rows of a reduced row-echelon matrix.
///
/// Two subspaces are equal iff their canonical bases are equal.
#[derive(Clone, Debug, PartialEq)]
pub struct Subspace<F: Field> {
    ambient: usize,
    basis: Matrix<F>,
    pivots: Vec<usize>,
}

impl<F: Field> Subspace<F> {
    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, basis: Matrix::zeros(0, ambient), pivots: Vec::new() }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace { ambient, basis: Matrix::identity(ambient), pivots: (0..ambient).collect() }
    }

    /// Span of arbitrary vectors of length `ambient`.
    pub fn from_vectors(ambient: usize, vectors: Vec<Vec<F>>) -> Self {
        if vectors.is_empty() {
            return Self::zero(ambient);
        }
        assert!(vectors.iter().all(|v| v.len() == ambient), "vector length differs from ambient dimension");
        let r = Matrix::from_rows(vectors).rref();
        let basis = r.reduced.submatrix(0, 0, r.rank, ambient);
        Subspace { ambient, basis, pivots: r.pivots }
    }

    /// The `k`-th coordinate block of `(F^n)^r`, filled by `inner`.
    pub fn embed_block(inner: &Subspace<F>, block: usize, blocks: usize) -> Self {
        let n = inner.ambient;
        let vectors = inner
            .vectors()
            .map(|v| {
                let mut w = vec![F::zero(); n * blocks];
                w[block * n..(block + 1) * n].clone_from_slice(v);
                w
            })
            .collect();
        Self::from_vectors(n * blocks, vectors)
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn is_zero(&self) -> bool {
        self.pivots.is_empty()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Basis vectors, in pivot order.
    pub fn vectors(&self) -> impl Iterator<Item = &[F]> {
        (0..self.dim()).map(|i| self.basis.row(i))
    }

    /// Basis vectors as the columns of an `ambient × dim` matrix.
    pub fn basis_columns(&self) -> Matrix<F> {
        self.basis.transpose()
    }

    /// Indices not occupied by a pivot, i.e. the coordinates of the
    /// canonical complement.
    pub fn complement_indices(&self) -> Vec<usize> {
        let mut mask = vec![true; self.ambient];
        for &p in &self.pivots {
            mask[p] = false;
        }
        (0..self.ambient).filter(|&i| mask[i]).collect()
    }

    /// Reduces `v` modulo the subspace, zeroing every pivot coordinate.
    pub fn reduce(&self, v: &[F]) -> Vec<F> {
        let mut out = v.to_vec();
        for (i, &p) in self.pivots.iter().enumerate() {
            let c = out[p].clone();
            if c.is_zero() {
                continue;
            }
            for (o, b) in out.iter_mut().zip(self.basis.row(i)) {
                if !b.is_zero() {
                    *o = o.sub(&c.mul(b));
                }
            }
        }
        out
    }

    pub fn contains(&self, v: &[F]) -> bool {
        self.reduce(v).iter().all(Field::is_zero)
    }

    pub fn contains_subspace(&self, other: &Subspace<F>) -> bool {
        other.vectors().all(|v| self.contains(v))
    }

    fn check_ambient(&self, other: &Subspace<F>) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::DimensionMismatch(format!(
                "subspaces of dimensions {} and {}",
                self.ambient, other.ambient
            )));
        }
        Ok(())
    }

    pub fn sum(&self, other: &Subspace<F>) -> Result<Self> {
        self.check_ambient(other)?;
        let vectors = self.vectors().chain(other.vectors()).map(<[F]>::to_vec).collect();
        Ok(Self::from_vectors(self.ambient, vectors))
    }

    /// Intersection through the kernel of `[U | -V]`.
    pub fn intersect(&self, other: &Subspace<F>) -> Result<Self> {
        self.check_ambient(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.ambient));
        }
        let u = self.basis_columns();
        let v = other.basis_columns().neg();
        let k = Matrix::hstack(&[&u, &v]).kernel();
        let du = self.dim();
        let vectors = k.vectors().map(|coef| u.mul_vec(&coef[..du])).collect();
        Ok(Self::from_vectors(self.ambient, vectors))
    }

    /// `M·U`.
    pub fn image_under(&self, m: &Matrix<F>) -> Self {
        Self::from_vectors(m.rows(), self.vectors().map(|v| m.mul_vec(v)).collect())
    }

    pub fn is_invariant_under(&self, m: &Matrix<F>) -> bool {
        self.vectors().all(|v| self.contains(&m.mul_vec(v)))
    }
}

/// Incrementally built row-echelon basis; used for span closures where
/// rebuilding the canonical form after every insertion would be wasteful.
#[derive(Clone, Debug)]
pub struct EchelonBuilder<F: Field> {
    len: usize,
    rows: Vec<(usize, Vec<F>)>,
}

impl<F: Field> EchelonBuilder<F> {
    pub fn new(len: usize) -> Self {
        EchelonBuilder { len, rows: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Inserts `v` if it is independent of the current rows; returns whether
    /// it was inserted.
    pub fn insert(&mut self, v: &[F]) -> bool {
        debug_assert_eq!(v.len(), self.len);
        let mut v = v.to_vec();
        for (p, row) in &self.rows {
            let c = v[*p].clone();
            if c.is_zero() {
                continue;
            }
            for (x, b) in v.iter_mut().zip(row) {
                if !b.is_zero() {
                    *x = x.sub(&c.mul(b));
                }
            }
        }
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = v[p].inv().expect("nonzero");
        let v: Vec<F> = v.iter().map(|x| x.mul(&inv)).collect();
        self.rows.push((p, v));
        true
    }
}

/// Action of each matrix on `F^n / W` in the coordinates of the canonical
/// complement (the non-pivot standard vectors of `W`).
pub fn quotient_action<F: Field>(tuple: &[Matrix<F>], w: &Subspace<F>) -> Result<Vec<Matrix<F>>> {
    let comp = w.complement_indices();
    tuple
        .iter()
        .enumerate()
        .map(|(index, m)| {
            if m.rows() != w.ambient() || m.cols() != w.ambient() {
                return Err(Error::DimensionMismatch(format!(
                    "matrix {index} is {}x{}, subspace lives in dimension {}",
                    m.rows(),
                    m.cols(),
                    w.ambient()
                )));
            }
            if !w.is_invariant_under(m) {
                return Err(Error::NotInvariant { index });
            }
            let mut q = Matrix::zeros(comp.len(), comp.len());
            for (jj, &j) in comp.iter().enumerate() {
                let image = w.reduce(&m.col(j));
                for (ii, &i) in comp.iter().enumerate() {
                    q[(ii, jj)] = image[i].clone();
                }
            }
            Ok(q)
        })
        .collect()
}
