//! Complex dense linear algebra on top of `nalgebra`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::field::Field;
use crate::matrix::Matrix;

pub type CMatrix = DMatrix<Complex64>;

pub fn to_complex<F: Field>(m: &Matrix<F>) -> CMatrix {
    CMatrix::from_fn(m.rows(), m.cols(), |i, j| m[(i, j)].to_complex())
}

pub fn frobenius(m: &CMatrix) -> f64 {
    m.norm()
}

fn singular_values_and_v(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    // pad to at least square so that V is complete
    let padded = if m.nrows() < m.ncols() {
        let mut p = CMatrix::zeros(m.ncols(), m.ncols());
        p.view_mut((0, 0), (m.nrows(), m.ncols())).copy_from(m);
        p
    } else {
        m.clone()
    };
    let svd = padded.svd(false, true);
    let v = svd.v_t.expect("requested V").adjoint();
    (svd.singular_values.iter().copied().collect(), v)
}

fn threshold(sv: &[f64], rel_tol: f64) -> f64 {
    rel_tol * sv.iter().copied().fold(1.0, f64::max)
}

/// Rank with singular values below `rel_tol · max(1, σ_max)` treated as
/// zero.
pub fn numeric_rank(m: &CMatrix, rel_tol: f64) -> usize {
    if m.is_empty() {
        return 0;
    }
    let sv = m.singular_values();
    let sv: Vec<f64> = sv.iter().copied().collect();
    let thr = threshold(&sv, rel_tol);
    sv.iter().filter(|&&s| s > thr).count()
}

/// Orthonormal basis (as columns) of the kernel of `m`.
pub fn null_space(m: &CMatrix, rel_tol: f64) -> CMatrix {
    let cols = m.ncols();
    if m.nrows() == 0 {
        return CMatrix::identity(cols, cols);
    }
    let (sv, v) = singular_values_and_v(m);
    let thr = threshold(&sv, rel_tol);
    let idx: Vec<usize> = (0..cols).filter(|&j| sv.get(j).is_none_or(|&s| s <= thr)).collect();
    CMatrix::from_fn(cols, idx.len(), |i, k| v[(i, idx[k])])
}

/// Orthonormal basis of the column span of `m`.
pub fn column_span(m: &CMatrix, rel_tol: f64) -> CMatrix {
    if m.ncols() == 0 {
        return CMatrix::zeros(m.nrows(), 0);
    }
    let svd = m.clone().svd(true, false);
    let u = svd.u.expect("requested U");
    let sv: Vec<f64> = svd.singular_values.iter().copied().collect();
    let thr = threshold(&sv, rel_tol);
    let idx: Vec<usize> = (0..sv.len()).filter(|&j| sv[j] > thr).collect();
    CMatrix::from_fn(m.nrows(), idx.len(), |i, k| u[(i, idx[k])])
}

/// Orthonormal basis of the orthogonal complement of the orthonormal
/// columns `w`.
pub fn complement(w: &CMatrix, rel_tol: f64) -> CMatrix {
    if w.ncols() == 0 {
        return CMatrix::identity(w.nrows(), w.nrows());
    }
    null_space(&w.adjoint(), rel_tol)
}

pub fn condition_number(m: &CMatrix) -> f64 {
    let sv = m.singular_values();
    let max = sv.iter().copied().fold(0.0, f64::max);
    let min = sv.iter().copied().fold(f64::INFINITY, f64::min);
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

/// Dimension of the algebra generated by `gens` (including the identity).
pub fn algebra_dimension(gens: &[CMatrix], rel_tol: f64) -> usize {
    let n = gens.first().map_or(0, CMatrix::nrows);
    let mut basis: Vec<CMatrix> = Vec::new();
    let mut queue = vec![CMatrix::identity(n, n)];
    while let Some(m) = queue.pop() {
        let mut v = m.clone();
        // two rounds of Gram–Schmidt
        for _ in 0..2 {
            for b in &basis {
                let c = b.dotc(&v);
                v -= b * c;
            }
        }
        let norm = v.norm();
        if norm <= rel_tol * m.norm().max(1.0) {
            continue;
        }
        v /= Complex64::from(norm);
        basis.push(v.clone());
        if basis.len() == n * n {
            break;
        }
        for g in gens {
            queue.push(g * &v);
        }
    }
    basis.len()
}
