//! Floating-point `MC_λ`, conjugacy of complex tuples, and the check
//! `Mon(D_{mc_{μ−1}(a)}) ≅ MC_λ(Mon(D_a))` for `λ = e^{2πiμ}`.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::linalg::{algebra_dimension, column_span, complement, condition_number, null_space, numeric_rank, CMatrix};
use super::monodromy::{abel_residual, monodromy_tuple, ComplexTuple, LoopConfig};
use crate::error::{Error, Result};
use crate::field::{Field, Q};
use crate::fuchsian::{mc_add, FuchsianSystem};

/// `C_λ(A)` in complex arithmetic.
pub fn numeric_conv_mult(a: &[CMatrix], lambda: Complex64) -> Vec<CMatrix> {
    let r = a.len();
    let n = a.first().map_or(0, CMatrix::nrows);
    let id = CMatrix::identity(n, n);
    (0..r)
        .map(|k| {
            let mut b = CMatrix::identity(n * r, n * r);
            for j in 0..r {
                let block = match j.cmp(&k) {
                    std::cmp::Ordering::Less => (&a[j] - &id) * lambda,
                    std::cmp::Ordering::Equal => &a[k] * lambda,
                    std::cmp::Ordering::Greater => &a[j] - &id,
                };
                b.view_mut((k * n, j * n), (n, n)).copy_from(&block);
            }
            b
        })
        .collect()
}

/// Output of [`numeric_mc`].
#[derive(Clone, Debug)]
pub struct NumericConvolution {
    pub k_dim: usize,
    pub l_dim: usize,
    pub quotient: Vec<CMatrix>,
}

/// `MC_λ(A)`: the action on an orthonormal complement of `𝒦 + ℒ`.
pub fn numeric_mc(a: &[CMatrix], lambda: Complex64, rel_tol: f64) -> NumericConvolution {
    let r = a.len();
    let n = a.first().map_or(0, CMatrix::nrows);
    let id = CMatrix::identity(n, n);
    let big = n * r;
    let mut spans: Vec<CMatrix> = Vec::new();
    let mut k_dim = 0;
    for (idx, m) in a.iter().enumerate() {
        let ker = null_space(&(m - &id), rel_tol);
        k_dim += ker.ncols();
        let mut emb = CMatrix::zeros(big, ker.ncols());
        emb.view_mut((idx * n, 0), (n, ker.ncols())).copy_from(&ker);
        spans.push(emb);
    }
    let product = a.iter().fold(id.clone(), |acc, m| acc * m);
    let ker = null_space(&(product * lambda - &id), rel_tol);
    let l_dim = ker.ncols();
    let mut l = CMatrix::zeros(big, l_dim);
    let mut tail = id.clone();
    for k in (0..r).rev() {
        l.view_mut((k * n, 0), (n, l_dim)).copy_from(&(&tail * &ker));
        tail = &a[k] * tail;
    }
    spans.push(l);
    let total: usize = spans.iter().map(CMatrix::ncols).sum();
    let mut w = CMatrix::zeros(big, total);
    let mut col = 0;
    for s in &spans {
        w.view_mut((0, col), (big, s.ncols())).copy_from(s);
        col += s.ncols();
    }
    let w = column_span(&w, rel_tol);
    let q = complement(&w, rel_tol);
    let quotient = numeric_conv_mult(a, lambda).iter().map(|b| q.adjoint() * b * &q).collect();
    NumericConvolution { k_dim, l_dim, quotient }
}

/// Result of [`numeric_conjugacy`].
#[derive(Clone, Debug)]
pub struct ConjugacyFit {
    pub s: CMatrix,
    /// `max_i ‖S⁻¹T1ᵢS − T2ᵢ‖_F`.
    pub residual: f64,
    pub condition: f64,
    /// Singular values of the stacked intertwiner system, ascending.
    pub singular_values: Vec<f64>,
    pub success: bool,
}

/// Least-squares solution of `T1ᵢS = S·T2ᵢ` for all `i`.
pub fn numeric_conjugacy(t1: &[CMatrix], t2: &[CMatrix], tol: f64) -> Result<ConjugacyFit> {
    if t1.len() != t2.len() {
        return Err(Error::DimensionMismatch(format!("{} vs {} matrices", t1.len(), t2.len())));
    }
    let n = t1.first().map_or(0, CMatrix::nrows);
    if t2.iter().chain(t1).any(|m| m.nrows() != n) {
        return Err(Error::DimensionMismatch("tuples act on spaces of different dimension".into()));
    }
    let id = CMatrix::identity(n, n);
    let nn = n * n;
    let mut stacked = CMatrix::zeros(nn * t1.len(), nn);
    for (i, (a, b)) in t1.iter().zip(t2).enumerate() {
        // column-major vec: vec(AS) = (1⊗A)vec S, vec(SB) = (Bᵗ⊗1)vec S
        let block = id.kronecker(a) - b.transpose().kronecker(&id);
        stacked.view_mut((i * nn, 0), (nn, nn)).copy_from(&block);
    }
    let svd = stacked.svd(false, true);
    let v = svd.v_t.expect("requested V").adjoint();
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&i, &j| svd.singular_values[i].total_cmp(&svd.singular_values[j]));
    let singular_values: Vec<f64> = order.iter().map(|&i| svd.singular_values[i]).collect();
    let best = order[0];
    let s = CMatrix::from_fn(n, n, |i, j| v[(j * n + i, best)]);
    let condition = condition_number(&s);
    let residual = match s.clone().try_inverse() {
        Some(inv) => t1.iter().zip(t2).map(|(a, b)| (&inv * a * &s - b).norm()).fold(0.0, f64::max),
        None => f64::INFINITY,
    };
    Ok(ConjugacyFit { s, residual, condition, singular_values, success: residual < tol && condition < 1e8 })
}

/// Hurwitz action of `Q_i` (positive entries) and `Q_i⁻¹` (negative), with
/// 1-based indices.
pub fn numeric_braid_act(word: &[i64], tuple: &[CMatrix]) -> Result<Vec<CMatrix>> {
    let mut t = tuple.to_vec();
    for &g in word {
        let i = g.unsigned_abs() as usize;
        if i == 0 || i >= t.len() {
            return Err(Error::BraidIndex { index: g, max: t.len().saturating_sub(1) });
        }
        let (a, b) = (t[i - 1].clone(), t[i].clone());
        if g > 0 {
            let a_inv = a.clone().try_inverse().ok_or_else(|| Error::Singular("braid input".into()))?;
            t[i - 1] = &a * &b * a_inv;
            t[i] = a;
        } else {
            let b_inv = b.clone().try_inverse().ok_or_else(|| Error::Singular("braid input".into()))?;
            t[i - 1] = b.clone();
            t[i] = b_inv * &a * &b;
        }
    }
    Ok(t)
}

/// Pure braid words `Q_i^{±2}` and products of two of them.
fn pure_braid_words(r: usize) -> Vec<Vec<i64>> {
    let gens: Vec<Vec<i64>> = (1..r as i64).flat_map(|i| [vec![i, i], vec![-i, -i]]).collect();
    let mut words = gens.clone();
    for g in &gens {
        for h in &gens {
            words.push(g.iter().chain(h).copied().collect());
        }
    }
    words
}

#[derive(Clone, Debug)]
pub struct RhHypotheses {
    /// `(rk aᵢ, numeric rk(Aᵢ − 1))` in loop order.
    pub residue_ranks: Vec<(usize, usize)>,
    /// `(rk(a₁+⋯+a_r+μ), numeric rk(λA₁⋯A_r − 1))`.
    pub sum_rank: (usize, usize),
    /// `rk(a₁+⋯+a_r+μ−1)`, the rank that fixes `dim mc_{μ−1}`. It has to
    /// agree with `sum_rank.1` as well for the dimensions to match.
    pub shifted_sum_rank: usize,
    pub irreducible: bool,
    pub nontrivial_generators: usize,
}

impl RhHypotheses {
    pub fn ranks_match(&self) -> bool {
        self.sum_rank.0 == self.sum_rank.1
            && self.shifted_sum_rank == self.sum_rank.1
            && self.residue_ranks.iter().all(|(e, n)| e == n)
    }

    pub fn hold(&self) -> bool {
        self.ranks_match() && self.irreducible && self.nontrivial_generators >= 2
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RhStatus {
    Pass,
    HypothesisViolation,
    Inconclusive,
}

#[derive(Clone, Debug)]
pub struct RhReport {
    pub mu: Q,
    pub hypotheses: RhHypotheses,
    pub seed: ComplexTuple,
    pub convolved: ComplexTuple,
    pub mc_dim: usize,
    pub k_dim: usize,
    pub l_dim: usize,
    pub residual: f64,
    pub condition: f64,
    /// Pure braid applied to `MC_λ(Mon)` to reach the match, if any.
    pub braid: Option<Vec<i64>>,
    pub abel_residual: f64,
    pub status: RhStatus,
}

#[derive(Clone, Debug)]
pub struct RhConfig {
    pub loops: LoopConfig,
    /// Relative singular value threshold for ranks and kernels.
    pub rank_tol: f64,
    /// Acceptance bound for the conjugacy residual.
    pub conj_tol: f64,
}

impl Default for RhConfig {
    fn default() -> Self {
        RhConfig { loops: LoopConfig { tolerance: 1e-12, ..LoopConfig::default() }, rank_tol: 1e-8, conj_tol: 1e-6 }
    }
}

pub fn verify_rh(sys: &FuchsianSystem<Q>, mu: &Q, cfg: &RhConfig) -> Result<RhReport> {
    if mu.is_integer() {
        return Err(Error::Precondition(format!("μ = {mu} is an integer")));
    }
    let seed = monodromy_tuple(sys, &cfg.loops)?;
    let mu_f = mu.to_complex().re;
    let lambda = Complex64::from_polar(1.0, 2.0 * PI * mu_f);
    let n = sys.n();
    let id = CMatrix::identity(n, n);
    let residue_ranks = seed
        .loops
        .order
        .iter()
        .zip(&seed.matrices)
        .map(|(&i, m)| (sys.residues()[i].rank(), numeric_rank(&(m - &id), cfg.rank_tol)))
        .collect();
    let sum_rank = (
        sys.residue_sum().add_scalar(&Q::from_rational(mu)).rank(),
        numeric_rank(&(seed.product() * lambda - &id), cfg.rank_tol),
    );
    let irreducible = algebra_dimension(&seed.matrices, cfg.rank_tol) == n * n;
    let nontrivial_generators = seed.matrices.iter().filter(|m| numeric_rank(&(*m - &id), cfg.rank_tol) > 0).count();
    let shifted_sum_rank = sys.residue_sum().add_scalar(&(mu - Q::from_integer(1.into()))).rank();
    let hypotheses = RhHypotheses { residue_ranks, sum_rank, shifted_sum_rank, irreducible, nontrivial_generators };

    let mc = numeric_mc(&seed.matrices, lambda, cfg.rank_tol);
    let shifted = mu - Q::from_integer(1.into());
    let target = mc_add(sys, &shifted).system;
    if target.n() == 0 {
        return Err(Error::Precondition(format!("mc_{shifted} is zero-dimensional")));
    }
    let convolved = monodromy_tuple(&target, &cfg.loops)?;
    let abel = abel_residual(sys, &seed).max(abel_residual(&target, &convolved));
    let mut braid = None;
    let mut fit = None;
    if mc.quotient.first().map(CMatrix::nrows) == Some(target.n()) {
        let direct = numeric_conjugacy(&mc.quotient, &convolved.matrices, cfg.conj_tol)?;
        if direct.success {
            fit = Some(direct);
        } else {
            let mut best = direct;
            for word in pure_braid_words(mc.quotient.len()) {
                let moved = numeric_braid_act(&word, &mc.quotient)?;
                let trial = numeric_conjugacy(&moved, &convolved.matrices, cfg.conj_tol)?;
                if trial.success {
                    braid = Some(word);
                    best = trial;
                    break;
                }
                if trial.residual < best.residual {
                    best = trial;
                }
            }
            fit = Some(best);
        }
    }
    let (residual, condition, matched) =
        fit.as_ref().map_or((f64::INFINITY, f64::INFINITY, false), |f| (f.residual, f.condition, f.success));
    let status = if !hypotheses.hold() {
        RhStatus::HypothesisViolation
    } else if matched {
        RhStatus::Pass
    } else {
        RhStatus::Inconclusive
    };
    Ok(RhReport {
        mu: mu.clone(),
        hypotheses,
        mc_dim: mc.quotient.first().map_or(0, CMatrix::nrows),
        k_dim: mc.k_dim,
        l_dim: mc.l_dim,
        seed,
        convolved,
        residual,
        condition,
        braid,
        abel_residual: abel,
        status,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{q, qi};
    use crate::matrix::Matrix;

    fn c(x: f64) -> Complex64 {
        Complex64::from(x)
    }

    #[test]
    fn conjugate_by_construction() {
        let a = CMatrix::from_row_slice(2, 2, &[c(1.0), c(2.0), c(0.0), c(-1.0)]);
        let b = CMatrix::from_row_slice(2, 2, &[c(0.0), c(1.0), c(1.0), c(1.0)]);
        let s0 = CMatrix::from_row_slice(2, 2, &[c(2.0), c(1.0), Complex64::new(0.0, 1.0), c(1.0)]);
        let inv = s0.clone().try_inverse().unwrap();
        let t2: Vec<CMatrix> = [&a, &b].iter().map(|m| &inv * *m * &s0).collect();
        let fit = numeric_conjugacy(&[a, b], &t2, 1e-9).unwrap();
        assert!(fit.success && fit.residual < 1e-9);
        assert!(fit.singular_values[1] > 1e-3);
    }

    #[test]
    fn distinct_scalars_are_not_conjugate() {
        let fit = numeric_conjugacy(&[CMatrix::from_element(1, 1, c(-1.0))], &[CMatrix::from_element(1, 1, c(1.0))], 1e-6)
            .unwrap();
        assert!(!fit.success);
        assert!((fit.residual - 2.0).abs() < 1e-12);
    }

    #[test]
    fn numeric_mc_matches_exact_dimension() {
        let a = [CMatrix::from_element(1, 1, c(2.0)), CMatrix::from_element(1, 1, c(3.0))];
        assert_eq!(numeric_mc(&a, c(5.0), 1e-10).quotient[0].nrows(), 2);
        assert_eq!(numeric_mc(&a, c(1.0 / 6.0), 1e-10).quotient[0].nrows(), 1);
    }

    #[test]
    fn rank_one_seed() {
        let sys = FuchsianSystem::new(
            vec![qi(0), qi(1)],
            vec![Matrix::from_rows(vec![vec![q(1, 2)]]), Matrix::from_rows(vec![vec![q(1, 3)]])],
        )
        .unwrap();
        let rep = verify_rh(&sys, &q(1, 4), &RhConfig::default()).unwrap();
        assert!(rep.hypotheses.hold(), "{:?}", rep.hypotheses);
        assert_eq!(rep.status, RhStatus::Pass, "residual {}", rep.residual);
        assert!(rep.residual < 1e-6);
        assert!(matches!(verify_rh(&sys, &qi(2), &RhConfig::default()), Err(Error::Precondition(_))));
    }
}
