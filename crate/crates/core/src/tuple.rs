//! Matrix tuples `(A₁,…,A_r)` and the structural tests used around middle
//! convolution: absolute irreducibility, conditions (*) and (**), rigidity,
//! braid action and simultaneous conjugacy.

use crate::error::{Error, Result};
use crate::field::Field;
use crate::matrix::Matrix;
use crate::subspace::{EchelonBuilder, Subspace};

/// `r` invertible `n×n` matrices over one field.
#[derive(Clone, Debug, PartialEq)]
pub struct MatTuple<F: Field> {
    n: usize,
    matrices: Vec<Matrix<F>>,
}

impl<F: Field> MatTuple<F> {
    /// Checks shapes and invertibility.
    pub fn new(matrices: Vec<Matrix<F>>) -> Result<Self> {
        let n = matrices.first().map_or(0, Matrix::rows);
        for (i, m) in matrices.iter().enumerate() {
            if m.rows() != n || m.cols() != n {
                return Err(Error::DimensionMismatch(format!("matrix {i} is {}x{}, expected {n}x{n}", m.rows(), m.cols())));
            }
            if !m.is_invertible() {
                return Err(Error::Singular(format!("matrix {i} of the tuple")));
            }
        }
        Ok(MatTuple { n, matrices })
    }

    /// For matrices already known to be invertible (e.g. induced actions).
    pub(crate) fn from_invertible(n: usize, matrices: Vec<Matrix<F>>) -> Self {
        debug_assert!(matrices.iter().all(|m| m.rows() == n && m.cols() == n));
        MatTuple { n, matrices }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.matrices.len()
    }

    pub fn matrices(&self) -> &[Matrix<F>] {
        &self.matrices
    }

    pub fn get(&self, i: usize) -> &Matrix<F> {
        &self.matrices[i]
    }

    /// `A₁⋯A_r`.
    pub fn product(&self) -> Matrix<F> {
        self.matrices.iter().fold(Matrix::identity(self.n), |acc, m| acc.mul(m))
    }

    /// Simultaneous conjugation `S⁻¹AᵢS`.
    pub fn conjugate_by(&self, s: &Matrix<F>) -> Result<Self> {
        let si = s.inverse()?;
        Ok(MatTuple { n: self.n, matrices: self.matrices.iter().map(|a| si.mul(a).mul(s)).collect() })
    }
}

/// `M_Ω`: `(ω₁A₁, …, ω_rA_r)`.
pub fn scalar_mult<F: Field>(omega: &[F], tuple: &MatTuple<F>) -> Result<MatTuple<F>> {
    if omega.len() != tuple.r() {
        return Err(Error::DimensionMismatch(format!("{} scalars for {} matrices", omega.len(), tuple.r())));
    }
    if let Some(i) = omega.iter().position(Field::is_zero) {
        return Err(Error::ZeroScalar(format!("ω_{}", i + 1)));
    }
    Ok(MatTuple {
        n: tuple.n,
        matrices: tuple.matrices.iter().zip(omega).map(|(a, w)| a.scale(w)).collect(),
    })
}

/// Applies the braid word left to right. Generator `i > 0` is `Q_i`,
/// `-i` its inverse.
pub fn braid_act<F: Field>(word: &[i64], tuple: &MatTuple<F>) -> Result<MatTuple<F>> {
    let r = tuple.r();
    let mut g = tuple.matrices.clone();
    for &letter in word {
        let i = letter.unsigned_abs() as usize;
        if i == 0 || i >= r {
            return Err(Error::BraidIndex { index: letter, max: r.saturating_sub(1) });
        }
        let (a, b) = (i - 1, i);
        if letter > 0 {
            // (g_i, g_{i+1}) ↦ (g_i g_{i+1} g_i⁻¹, g_i)
            let gi = g[a].clone();
            g[a] = gi.mul(&g[b]).mul(&gi.inverse()?);
            g[b] = gi;
        } else {
            // (h_i, h_{i+1}) ↦ (h_{i+1}, h_{i+1}⁻¹ h_i h_{i+1})
            let hi = g[a].clone();
            let hn = g[b].clone();
            g[b] = hn.inverse()?.mul(&hi).mul(&hn);
            g[a] = hn;
        }
    }
    Ok(MatTuple { n: tuple.n, matrices: g })
}

fn vec_row<F: Field>(m: &Matrix<F>) -> Vec<F> {
    m.entries().cloned().collect()
}

/// Dimension of the unital algebra generated by the tuple.
pub fn algebra_dimension<F: Field>(tuple: &MatTuple<F>) -> usize {
    let n = tuple.n;
    if n == 0 {
        return 0;
    }
    let mut span = EchelonBuilder::new(n * n);
    let mut queue = vec![Matrix::<F>::identity(n)];
    span.insert(&vec_row(&queue[0]));
    while let Some(x) = queue.pop() {
        for a in &tuple.matrices {
            let y = a.mul(&x);
            if span.insert(&vec_row(&y)) {
                if span.dim() == n * n {
                    return n * n;
                }
                queue.push(y);
            }
        }
    }
    span.dim()
}

/// Burnside: irreducible over the algebraic closure iff the generated
/// algebra is all of `M_n`.
pub fn irreducible_abs<F: Field>(tuple: &MatTuple<F>) -> bool {
    algebra_dimension(tuple) == tuple.n * tuple.n
}

/// Dimension of the centralizer `{X : AX = XA}`.
pub fn centralizer_dim<F: Field>(a: &Matrix<F>) -> usize {
    let n = a.rows();
    let id = Matrix::<F>::identity(n);
    // row-major vec: vec(AX) = (A⊗1)vec(X), vec(XA) = (1⊗Aᵗ)vec(X)
    a.kron(&id).sub(&id.kron(&a.transpose())).kernel().dim()
}

/// `(2 − m)·n² + Σ dim Z(Mᵢ)` over all `m` local matrices (including the
/// one at infinity).
pub fn rigidity_from_local<F: Field>(n: usize, local: &[Matrix<F>]) -> i64 {
    let m = local.len() as i64;
    (2 - m) * (n * n) as i64 + local.iter().map(|a| centralizer_dim(a) as i64).sum::<i64>()
}

/// Katz's index of rigidity with `A_{r+1} = (A₁⋯A_r)⁻¹`.
pub fn rigidity_index<F: Field>(tuple: &MatTuple<F>) -> i64 {
    let mut local = tuple.matrices.clone();
    local.push(tuple.product().inverse().expect("product of invertible matrices"));
    rigidity_from_local(tuple.n, &local)
}

fn intersect_all<F: Field>(n: usize, spaces: impl Iterator<Item = Subspace<F>>) -> Subspace<F> {
    spaces.fold(Subspace::full(n), |acc, s| acc.intersect(&s).expect("same ambient"))
}

/// Largest `A`-invariant subspace of `u` (`A` invertible).
fn largest_invariant<F: Field>(u: Subspace<F>, a_inv: &Matrix<F>) -> Subspace<F> {
    let mut u = u;
    loop {
        if u.is_zero() {
            return u;
        }
        let next = u.intersect(&u.image_under(a_inv)).expect("same ambient");
        if next.dim() == u.dim() {
            return next;
        }
        u = next;
    }
}

fn star_for<F: Field>(mats: &[Matrix<F>]) -> bool {
    let n = mats.first().map_or(0, Matrix::rows);
    let id = Matrix::identity(n);
    let kernels: Vec<Subspace<F>> = mats.iter().map(|a| a.sub(&id).kernel()).collect();
    (0..mats.len()).all(|i| {
        let u = intersect_all(n, kernels.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, k)| k.clone()));
        let a_inv = mats[i].inverse().expect("invertible");
        largest_invariant(u, &a_inv).is_zero()
    })
}

/// Condition (*): no eigenvector of `A_i` (over the algebraic closure) lies
/// in `∩_{j≠i} ker(A_j − 1)`.
pub fn check_star<F: Field>(tuple: &MatTuple<F>) -> bool {
    star_for(&tuple.matrices)
}

/// Condition (**), the dual of (*): the same test on the transposed tuple,
/// since a proper `U_i(τ)` is annihilated by a left eigenvector of `A_i`
/// lying in the left kernels of all `A_j − 1`, `j ≠ i`.
pub fn check_starstar<F: Field>(tuple: &MatTuple<F>) -> bool {
    let t: Vec<Matrix<F>> = tuple.matrices.iter().map(Matrix::transpose).collect();
    star_for(&t)
}

/// Outcome of [`tuple_conjugate`].
#[derive(Clone, Debug, PartialEq)]
pub enum Conjugacy<F: Field> {
    /// `S` with `S⁻¹AᵢS = A′ᵢ` for all `i`.
    Conjugate(Matrix<F>),
    NotConjugate,
    /// Intertwiners exist but none of the tried combinations is invertible.
    Inconclusive { solution_dim: usize },
}

impl<F: Field> Conjugacy<F> {
    pub fn is_conjugate(&self) -> bool {
        matches!(self, Conjugacy::Conjugate(_))
    }
}

const MAX_COMBINATION_ATTEMPTS: usize = 100;

/// Space of all `S` with `AᵢS = SA′ᵢ`, as `n²`-vectors (row-major).
pub fn intertwiners<F: Field>(a: &MatTuple<F>, b: &MatTuple<F>) -> Result<Vec<Matrix<F>>> {
    if a.n != b.n || a.r() != b.r() {
        return Err(Error::DimensionMismatch(format!(
            "tuples of shape {}x{} and {}x{}",
            a.r(),
            a.n,
            b.r(),
            b.n
        )));
    }
    let n = a.n;
    let id = Matrix::<F>::identity(n);
    // Solutions are tracked as columns of `basis` (n² × d); each equation
    // block is restricted to the current solution space before solving.
    let mut basis = Matrix::<F>::identity(n * n);
    for (ai, bi) in a.matrices.iter().zip(&b.matrices) {
        if basis.cols() == 0 {
            break;
        }
        let op = ai.kron(&id).sub(&id.kron(&bi.transpose()));
        let restricted = op.mul(&basis);
        let k = restricted.kernel();
        basis = basis.mul(&k.basis_columns());
    }
    Ok((0..basis.cols())
        .map(|j| {
            let v = basis.col(j);
            Matrix::from_fn(n, n, |r, c| v[r * n + c].clone())
        })
        .collect())
}

/// Decides simultaneous conjugacy `S⁻¹AᵢS = A′ᵢ`.
pub fn tuple_conjugate<F: Field>(a: &MatTuple<F>, b: &MatTuple<F>) -> Result<Conjugacy<F>> {
    let sols = intertwiners(a, b)?;
    if sols.is_empty() {
        return Ok(if a.n == 0 { Conjugacy::Conjugate(Matrix::identity(0)) } else { Conjugacy::NotConjugate });
    }
    let verify = |s: &Matrix<F>| -> bool {
        s.inverse()
            .map(|si| a.matrices.iter().zip(&b.matrices).all(|(x, y)| &si.mul(x).mul(s) == y))
            .unwrap_or(false)
    };
    let mut attempts = 0;
    for s in &sols {
        attempts += 1;
        if verify(s) {
            return Ok(Conjugacy::Conjugate(s.clone()));
        }
    }
    // Small-integer combinations, enumerated in base 5 over digits {0,1,-1,2,-2}.
    const DIGITS: [i64; 5] = [0, 1, -1, 2, -2];
    let d = sols.len();
    let mut counter: u64 = 1;
    while attempts < MAX_COMBINATION_ATTEMPTS && d > 1 {
        let mut c = counter;
        let mut s = Matrix::zeros(a.n, a.n);
        let mut nonzero_terms = 0;
        for sol in &sols {
            let digit = DIGITS[(c % 5) as usize];
            c /= 5;
            if digit != 0 {
                nonzero_terms += 1;
                s = s.add(&sol.scale(&F::from_i64(digit)));
            }
        }
        counter += 1;
        if c > 0 {
            break;
        }
        if nonzero_terms < 2 {
            continue;
        }
        attempts += 1;
        if verify(&s) {
            return Ok(Conjugacy::Conjugate(s));
        }
    }
    Ok(Conjugacy::Inconclusive { solution_dim: d })
}
