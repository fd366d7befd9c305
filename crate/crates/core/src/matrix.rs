//! Dense matrices over an exact field and Gaussian elimination.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::subspace::Subspace;

#[derive(Clone, PartialEq)]
pub struct Matrix<F: Field> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

/// Output of [`Matrix::rref`].
#[derive(Clone, Debug, PartialEq)]
pub struct Rref<F: Field> {
    pub rank: usize,
    pub pivots: Vec<usize>,
    pub reduced: Matrix<F>,
}

impl<F: Field> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![F::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, F::one())
    }

    pub fn scalar(n: usize, c: F) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = c.clone();
        }
        m
    }

    pub fn diagonal(entries: &[F]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, e) in entries.iter().enumerate() {
            m[(i, i)] = e.clone();
        }
        m
    }

    /// Panics on ragged input.
    pub fn from_rows(rows: Vec<Vec<F>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> F) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| F::from_i64(x)).collect()).collect())
    }

    /// Column vector.
    pub fn column(v: &[F]) -> Self {
        Matrix { rows: v.len(), cols: 1, data: v.to_vec() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<F> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<F>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn entries(&self) -> impl Iterator<Item = &F> {
        self.data.iter()
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> Matrix<G> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Field::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..self.cols).all(|j| if i == j { self[(i, j)].is_one() } else { self[(i, j)].is_zero() }))
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch in add");
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.add(b)).collect() }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch in sub");
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.sub(b)).collect() }
    }

    pub fn neg(&self) -> Self {
        self.map(Field::neg)
    }

    pub fn scale(&self, c: &F) -> Self {
        self.map(|a| a.mul(c))
    }

    /// `self + c·1`.
    pub fn add_scalar(&self, c: &F) -> Self {
        assert!(self.is_square());
        let mut m = self.clone();
        for i in 0..self.rows {
            m[(i, i)] = m[(i, i)].add(c);
        }
        m
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in mul");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] = out[(i, j)].add(&a.mul(b));
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(F::zero(), |acc, (a, b)| acc.add(&a.mul(b)))
            })
            .collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    /// Entrywise complex conjugate of the transpose.
    pub fn conj_transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn pow(&self, mut e: u64) -> Self {
        assert!(self.is_square());
        let mut base = self.clone();
        let mut acc = Self::identity(self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    pub fn trace(&self) -> F {
        (0..self.rows.min(self.cols)).fold(F::zero(), |acc, i| acc.add(&self[(i, i)]))
    }

    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |i, j| self[(r0 + i, c0 + j)].clone())
    }

    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])].clone())
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Self) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self[(r0 + i, c0 + j)] = block[(i, j)].clone();
            }
        }
    }

    pub fn hstack(blocks: &[&Self]) -> Self {
        let rows = blocks.first().map_or(0, |b| b.rows);
        assert!(blocks.iter().all(|b| b.rows == rows));
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(rows, cols);
        let mut c0 = 0;
        for b in blocks {
            out.set_block(0, c0, b);
            c0 += b.cols;
        }
        out
    }

    pub fn vstack(blocks: &[&Self]) -> Self {
        let cols = blocks.first().map_or(0, |b| b.cols);
        assert!(blocks.iter().all(|b| b.cols == cols));
        let rows = blocks.iter().map(|b| b.rows).sum();
        let mut out = Self::zeros(rows, cols);
        let mut r0 = 0;
        for b in blocks {
            out.set_block(r0, 0, b);
            r0 += b.rows;
        }
        out
    }

    /// Kronecker product.
    pub fn kron(&self, rhs: &Self) -> Self {
        Self::from_fn(self.rows * rhs.rows, self.cols * rhs.cols, |i, j| {
            self[(i / rhs.rows, j / rhs.cols)].mul(&rhs[(i % rhs.rows, j % rhs.cols)])
        })
    }

    /// Reduced row-echelon form by plain Gaussian elimination.
    pub fn rref(&self) -> Rref<F> {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&i| !m[(i, col)].is_zero()) else {
                continue;
            };
            m.swap_rows(row, p);
            let inv = m[(row, col)].inv().expect("pivot is nonzero");
            for j in col..m.cols {
                m[(row, j)] = m[(row, j)].mul(&inv);
            }
            for i in 0..m.rows {
                if i == row || m[(i, col)].is_zero() {
                    continue;
                }
                let factor = m[(i, col)].clone();
                for j in col..m.cols {
                    if !m[(row, j)].is_zero() {
                        let v = m[(i, j)].sub(&factor.mul(&m[(row, j)]));
                        m[(i, j)] = v;
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        Rref { rank: pivots.len(), pivots, reduced: m }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Null space `{v : M v = 0}` in canonical form.
    pub fn kernel(&self) -> Subspace<F> {
        let Rref { pivots, reduced, .. } = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let vectors: Vec<Vec<F>> = (0..self.cols)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut v = vec![F::zero(); self.cols];
                v[f] = F::one();
                for (i, &p) in pivots.iter().enumerate() {
                    v[p] = reduced[(i, f)].neg();
                }
                v
            })
            .collect();
        Subspace::from_vectors(self.cols, vectors)
    }

    /// Column span.
    pub fn image(&self) -> Subspace<F> {
        Subspace::from_vectors(self.rows, (0..self.cols).map(|j| self.col(j)).collect())
    }

    pub fn det(&self) -> F {
        assert!(self.is_square());
        let mut m = self.clone();
        let n = m.rows;
        let mut det = F::one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&i| !m[(i, col)].is_zero()) else {
                return F::zero();
            };
            if p != col {
                m.swap_rows(p, col);
                det = det.neg();
            }
            let pivot = m[(col, col)].clone();
            det = det.mul(&pivot);
            let inv = pivot.inv().expect("nonzero pivot");
            for i in col + 1..n {
                if m[(i, col)].is_zero() {
                    continue;
                }
                let factor = m[(i, col)].mul(&inv);
                for j in col..n {
                    let v = m[(i, j)].sub(&factor.mul(&m[(col, j)]));
                    m[(i, j)] = v;
                }
            }
        }
        det
    }

    /// `det(x − A)` by Faddeev–LeVerrier.
    pub fn charpoly(&self) -> crate::poly::Poly<F> {
        assert!(self.is_square());
        let n = self.rows;
        let mut coeffs = vec![F::zero(); n + 1];
        coeffs[n] = F::one();
        let mut m = Self::identity(n);
        for k in 1..=n {
            let am = self.mul(&m);
            let c = am.trace().neg().div(&F::from_i64(k as i64)).expect("characteristic zero");
            coeffs[n - k] = c.clone();
            m = am.add_scalar(&c);
        }
        crate::poly::Poly::new(coeffs)
    }

    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch(format!("{}x{} matrix has no inverse", self.rows, self.cols)));
        }
        let n = self.rows;
        let aug = Self::hstack(&[self, &Self::identity(n)]).rref();
        if aug.pivots.iter().take_while(|&&p| p < n).count() < n {
            return Err(Error::Singular(format!("{n}x{n} matrix")));
        }
        Ok(aug.reduced.submatrix(0, n, n, n))
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl<F: Field> std::ops::Index<(usize, usize)> for Matrix<F> {
    type Output = F;
    fn index(&self, (i, j): (usize, usize)) -> &F {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<F: Field> std::ops::IndexMut<(usize, usize)> for Matrix<F> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut F {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl<F: Field> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Cyclo, Q};

    #[test]
    fn rref_proportional_rows() {
        let m: Matrix<Q> = Matrix::from_i64(&[&[1, 2], &[2, 4]]);
        let r = m.rref();
        assert_eq!(r.rank, 1);
        assert_eq!(r.pivots, vec![0]);
        assert_eq!(r.reduced, Matrix::from_i64(&[&[1, 2], &[0, 0]]));
    }

    #[test]
    fn rref_identity_and_single_pivot() {
        let id: Matrix<Q> = Matrix::identity(4);
        let r = id.rref();
        assert_eq!((r.rank, r.pivots.clone(), r.reduced), (4, vec![0, 1, 2, 3], id));
        let r = Matrix::<Q>::from_i64(&[&[0, 1], &[0, 0]]).rref();
        assert_eq!((r.rank, r.pivots), (1, vec![1]));
    }

    #[test]
    fn kernel_examples() {
        let z: Matrix<Q> = Matrix::zeros(2, 2);
        assert_eq!(z.kernel().dim(), 2);
        assert_eq!(Matrix::<Q>::identity(3).kernel().dim(), 0);
        let k = Matrix::<Q>::from_i64(&[&[1, 2], &[2, 4]]).kernel();
        assert_eq!(k, Subspace::from_vectors(2, vec![vec![Q::from_i64(-2), Q::from_i64(1)]]));
    }

    #[test]
    fn inverse_and_det_over_cyclotomic() {
        let z = Cyclo::root_of_unity(3, 1);
        let m = Matrix::from_rows(vec![vec![z.clone(), Cyclo::one()], vec![Cyclo::from_i64(2), z.mul(&z)]]);
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).is_identity());
        // det = ζ³ - 2 = -1
        assert_eq!(m.det(), Cyclo::from_i64(-1));
        assert!(Matrix::<Q>::from_i64(&[&[1, 2], &[2, 4]]).inverse().is_err());
    }

    #[test]
    fn charpoly_small_cases() {
        let m: Matrix<Q> = Matrix::from_i64(&[&[2, 1], &[0, 3]]);
        let cp = m.charpoly();
        assert_eq!(cp.coeffs(), &[Q::from_i64(6), Q::from_i64(-5), Q::from_i64(1)]);
        let n: Matrix<Q> = Matrix::from_i64(&[&[1, 2, 0], &[0, 1, 5], &[3, 0, 4]]);
        let cp = n.charpoly();
        assert_eq!(cp.coeffs()[0], n.det().neg());
        assert_eq!(cp.coeffs()[2], n.trace().neg());
        // Cayley–Hamilton
        let mut acc: Matrix<Q> = Matrix::zeros(3, 3);
        for c in cp.coeffs().iter().rev() {
            acc = acc.mul(&n).add(&Matrix::identity(3).scale(c));
        }
        assert!(acc.is_zero());
    }
}
