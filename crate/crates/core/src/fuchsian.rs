//! Fuchsian systems `Y′ = Σ aᵢ/(x − tᵢ) Y`, the additive convolution `c_μ`,
//! the additive middle convolution `mc_μ`, scalar addition, and Okubo
//! systems `(x − T)Y′ = bY`.

use crate::error::{Error, Result};
use crate::field::{Field, Q};
use crate::matrix::Matrix;
use crate::poly::{Poly, RatFun};
use crate::subspace::{quotient_action, Subspace};

#[derive(Clone, Debug, PartialEq)]
pub struct FuchsianSystem<F: Field> {
    points: Vec<Q>,
    residues: Vec<Matrix<F>>,
}

impl<F: Field> FuchsianSystem<F> {
    pub fn new(points: Vec<Q>, residues: Vec<Matrix<F>>) -> Result<Self> {
        if points.len() != residues.len() {
            return Err(Error::DimensionMismatch(format!("{} points, {} residues", points.len(), residues.len())));
        }
        for i in 0..points.len() {
            for j in 0..i {
                if points[i] == points[j] {
                    return Err(Error::Precondition(format!("singular points t{} and t{} coincide", j + 1, i + 1)));
                }
            }
        }
        let n = residues.first().map_or(0, Matrix::rows);
        if let Some(i) = residues.iter().position(|a| a.rows() != n || a.cols() != n) {
            return Err(Error::DimensionMismatch(format!("residue {} is not {n}x{n}", i + 1)));
        }
        Ok(FuchsianSystem { points, residues })
    }

    pub fn n(&self) -> usize {
        self.residues.first().map_or(0, Matrix::rows)
    }

    pub fn r(&self) -> usize {
        self.points.len()
    }

    pub fn points(&self) -> &[Q] {
        &self.points
    }

    pub fn residues(&self) -> &[Matrix<F>] {
        &self.residues
    }

    pub fn residue_sum(&self) -> Matrix<F> {
        self.residues.iter().fold(Matrix::zeros(self.n(), self.n()), |acc, a| acc.add(a))
    }

    /// `−(a₁ + ⋯ + a_r)`.
    pub fn residue_at_infinity(&self) -> Matrix<F> {
        self.residue_sum().neg()
    }

    /// `Σ aᵢ/(x − tᵢ)` as a matrix of rational functions (row-major).
    pub fn coefficient_matrix(&self) -> Vec<Vec<RatFun<F>>> {
        let n = self.n();
        let mut out = vec![vec![RatFun::zero(); n]; n];
        for (t, a) in self.points.iter().zip(&self.residues) {
            let t = F::from_rational(t);
            for (i, row) in out.iter_mut().enumerate() {
                for (j, e) in row.iter_mut().enumerate() {
                    if !a[(i, j)].is_zero() {
                        *e = e.add(&RatFun::simple_pole(a[(i, j)].clone(), &t));
                    }
                }
            }
        }
        out
    }
}

/// `(x − T)Y′ = bY` with `T` diagonal (repetitions allowed).
#[derive(Clone, Debug, PartialEq)]
pub struct OkuboSystem<F: Field> {
    t: Vec<Q>,
    b: Matrix<F>,
}

impl<F: Field> OkuboSystem<F> {
    pub fn new(t: Vec<Q>, b: Matrix<F>) -> Result<Self> {
        if b.rows() != t.len() || b.cols() != t.len() {
            return Err(Error::DimensionMismatch(format!("T has {} entries, b is {}x{}", t.len(), b.rows(), b.cols())));
        }
        Ok(OkuboSystem { t, b })
    }

    pub fn t(&self) -> &[Q] {
        &self.t
    }

    pub fn b(&self) -> &Matrix<F> {
        &self.b
    }

    pub fn size(&self) -> usize {
        self.t.len()
    }

    pub fn t_matrix(&self) -> Matrix<F> {
        Matrix::diagonal(&self.t.iter().map(F::from_rational).collect::<Vec<_>>())
    }

    /// Distinct diagonal values in order of first appearance.
    pub fn distinct_points(&self) -> Vec<Q> {
        let mut out: Vec<Q> = Vec::new();
        for t in &self.t {
            if !out.contains(t) {
                out.push(t.clone());
            }
        }
        out
    }

    /// The same system as `Y′ = Σ b_j/(x − t_j) Y`, where `b_j` keeps the
    /// rows `i` of `b` with `T_ii = t_j`.
    pub fn fuchsian(&self) -> FuchsianSystem<F> {
        let points = self.distinct_points();
        let residues = points
            .iter()
            .map(|t| Matrix::from_fn(self.size(), self.size(), |i, j| if &self.t[i] == t { self.b[(i, j)].clone() } else { F::zero() }))
            .collect();
        FuchsianSystem { points, residues }
    }

    /// `(x − T)⁻¹ b` as a matrix of rational functions.
    pub fn coefficient_matrix(&self) -> Vec<Vec<RatFun<F>>> {
        (0..self.size())
            .map(|i| {
                let t = F::from_rational(&self.t[i]);
                (0..self.size())
                    .map(|j| RatFun::new(Poly::constant(self.b[(i, j)].clone()), Poly::linear(&t)))
                    .collect()
            })
            .collect()
    }
}

/// `c_μ(a) = (b₁,…,b_r)`; `b_k` is zero outside block row `k`, which reads
/// `(a₁, …, a_k + μ, …, a_r)`.
pub fn conv_add<F: Field>(sys: &FuchsianSystem<F>, mu: &Q) -> FuchsianSystem<F> {
    let (n, r) = (sys.n(), sys.r());
    let mu = F::from_rational(mu);
    let residues = (0..r)
        .map(|k| {
            let mut b = Matrix::zeros(n * r, n * r);
            for (j, a) in sys.residues.iter().enumerate() {
                let block = if j == k { a.add_scalar(&mu) } else { a.clone() };
                b.set_block(k * n, j * n, &block);
            }
            b
        })
        .collect();
    FuchsianSystem { points: sys.points.clone(), residues }
}

/// Output of [`mc_add`].
#[derive(Clone, Debug)]
pub struct AdditiveConvolution<F: Field> {
    /// `c_μ(a)`.
    pub convolution: FuchsianSystem<F>,
    /// `𝔨 = ⊕ ker(a_k)`.
    pub k: Subspace<F>,
    pub l: Subspace<F>,
    /// `mc_μ(a)` on `F^{nr}/(𝔨 + 𝔩)`.
    pub system: FuchsianSystem<F>,
}

impl<F: Field> AdditiveConvolution<F> {
    /// `mc_μ(a)` in Okubo form: each surviving coordinate keeps the singular
    /// point of the block it came from.
    pub fn okubo(&self) -> OkuboSystem<F> {
        let r = self.convolution.r();
        let n = if r == 0 { 0 } else { self.convolution.n() / r };
        let kl = self.k.sum(&self.l).expect("same ambient");
        let t = kl.complement_indices().into_iter().map(|i| self.system.points[i / n].clone()).collect();
        okubo_of_block_system(&self.system, t).expect("quotient residues keep the block structure")
    }
}

/// `𝔨` and `𝔩` for `c_μ(a)`.
pub fn mc_add_subspaces<F: Field>(sys: &FuchsianSystem<F>, mu: &Q) -> (Subspace<F>, Subspace<F>) {
    let (n, r) = (sys.n(), sys.r());
    let mut k = Subspace::zero(n * r);
    for (idx, a) in sys.residues.iter().enumerate() {
        k = k.sum(&Subspace::embed_block(&a.kernel(), idx, r)).expect("same ambient");
    }
    let l = if num_traits::Zero::is_zero(mu) {
        conv_add(sys, mu)
            .residues
            .iter()
            .fold(Subspace::full(n * r), |acc, b| acc.intersect(&b.kernel()).expect("same ambient"))
    } else {
        let ker = sys.residue_sum().add_scalar(&F::from_rational(mu)).kernel();
        let vectors = ker.vectors().map(|v| v.iter().cloned().cycle().take(n * r).collect()).collect();
        Subspace::from_vectors(n * r, vectors)
    };
    (k, l)
}

/// `mc_μ(a)` via the quotient by `𝔨 + 𝔩` in canonical complement
/// coordinates.
pub fn mc_add<F: Field>(sys: &FuchsianSystem<F>, mu: &Q) -> AdditiveConvolution<F> {
    let convolution = conv_add(sys, mu);
    let (k, l) = mc_add_subspaces(sys, mu);
    let kl = k.sum(&l).expect("same ambient");
    let residues = quotient_action(&convolution.residues, &kl)
        .unwrap_or_else(|e| panic!("𝔨 + 𝔩 must be invariant under c_μ: {e}"));
    let system = FuchsianSystem { points: sys.points.clone(), residues };
    AdditiveConvolution { convolution, k, l, system }
}

/// `m_Δ`: `(a₁ + δ₁, …, a_r + δ_r)`.
pub fn scalar_add<F: Field>(delta: &[Q], sys: &FuchsianSystem<F>) -> Result<FuchsianSystem<F>> {
    if delta.len() != sys.r() {
        return Err(Error::DimensionMismatch(format!("{} shifts for {} residues", delta.len(), sys.r())));
    }
    Ok(FuchsianSystem {
        points: sys.points.clone(),
        residues: sys.residues.iter().zip(delta).map(|(a, d)| a.add_scalar(&F::from_rational(d))).collect(),
    })
}

/// The convolution `c_μ(a)` written as `(x − T)Y′ = bY` with `T` listing each
/// `t_k` `n` times and `b = Σ b_k`.
pub fn okubo_of_convolution<F: Field>(sys: &FuchsianSystem<F>, mu: &Q) -> OkuboSystem<F> {
    let n = sys.n();
    let conv = conv_add(sys, mu);
    let t = sys.points.iter().flat_map(|t| std::iter::repeat_n(t.clone(), n)).collect();
    let b = conv.residues.iter().fold(Matrix::zeros(n * sys.r(), n * sys.r()), |acc, bk| acc.add(bk));
    OkuboSystem { t, b }
}

/// A Fuchsian system whose residues `b_k` vanish outside the rows where
/// `T = t_k` is the same thing as an Okubo system; this returns it.
pub fn okubo_of_block_system<F: Field>(sys: &FuchsianSystem<F>, t: Vec<Q>) -> Result<OkuboSystem<F>> {
    let size = sys.n();
    for (k, (tk, bk)) in sys.points.iter().zip(&sys.residues).enumerate() {
        for i in 0..size {
            if &t[i] != tk && !bk.row(i).iter().all(Field::is_zero) {
                return Err(Error::Precondition(format!("residue {} has a nonzero row outside its block", k + 1)));
            }
        }
    }
    let b = sys.residue_sum();
    OkuboSystem::new(t, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{q, qi};

    fn scalar_system(points: &[Q], residues: &[Q]) -> FuchsianSystem<Q> {
        FuchsianSystem::new(points.to_vec(), residues.iter().map(|a| Matrix::from_rows(vec![vec![a.clone()]])).collect())
            .unwrap()
    }

    fn m(rows: Vec<Vec<Q>>) -> Matrix<Q> {
        Matrix::from_rows(rows)
    }

    #[test]
    fn convolution_blocks() {
        let sys = scalar_system(&[qi(0), qi(1)], &[q(1, 2), q(1, 3)]);
        let c = conv_add(&sys, &q(1, 4));
        assert_eq!(c.residues()[0], m(vec![vec![q(3, 4), q(1, 3)], vec![qi(0), qi(0)]]));
        assert_eq!(c.residues()[1], m(vec![vec![qi(0), qi(0)], vec![q(1, 2), q(7, 12)]]));
        let zero = scalar_system(&[qi(0), qi(1)], &[qi(0), qi(0)]);
        assert!(conv_add(&zero, &qi(0)).residues().iter().all(Matrix::is_zero));
    }

    #[test]
    fn middle_convolution_examples() {
        let sys = scalar_system(&[qi(0), qi(1)], &[q(1, 2), q(1, 3)]);
        let res = mc_add(&sys, &q(1, 4));
        assert!(res.k.is_zero() && res.l.is_zero());
        assert_eq!(res.system.n(), 2);

        let sys0 = scalar_system(&[qi(0), qi(1)], &[qi(0), q(1, 3)]);
        let res = mc_add(&sys0, &q(1, 4));
        assert_eq!(res.k, Subspace::from_vectors(2, vec![vec![qi(1), qi(0)]]));
        assert_eq!(res.system.n(), 1);

        let res = mc_add(&sys, &q(-5, 6));
        assert_eq!(res.l, Subspace::from_vectors(2, vec![vec![qi(1), qi(1)]]));
        assert_eq!(res.system.n(), 1);
    }

    #[test]
    fn scalar_addition() {
        let sys = scalar_system(&[qi(0), qi(1)], &[q(1, 2), q(1, 3)]);
        let shifted = scalar_add(&[q(1, 2), q(2, 3)], &sys).unwrap();
        assert_eq!(shifted, scalar_system(&[qi(0), qi(1)], &[qi(1), qi(1)]));
        assert_eq!(scalar_add(&[qi(0), qi(0)], &sys).unwrap(), sys);
        let twice = scalar_add(&[q(1, 5), qi(2)], &scalar_add(&[q(1, 7), q(-1, 2)], &sys).unwrap()).unwrap();
        assert_eq!(twice, scalar_add(&[q(12, 35), q(3, 2)], &sys).unwrap());
        assert!(scalar_add(&[qi(0)], &sys).is_err());
    }

    #[test]
    fn residue_at_infinity_examples() {
        let sys = scalar_system(&[qi(0), qi(1)], &[q(1, 2), q(1, 3)]);
        assert_eq!(sys.residue_at_infinity(), m(vec![vec![q(-5, 6)]]));
        let zero = scalar_system(&[qi(0)], &[qi(0)]);
        assert!(zero.residue_at_infinity().is_zero());
    }

    #[test]
    fn okubo_of_scalar_convolution() {
        let sys = scalar_system(&[qi(0), qi(1)], &[q(1, 2), q(1, 3)]);
        let ok = okubo_of_convolution(&sys, &q(1, 4));
        assert_eq!(ok.t(), &[qi(0), qi(1)]);
        assert_eq!(ok.b(), &m(vec![vec![q(3, 4), q(1, 3)], vec![q(1, 2), q(7, 12)]]));
        let single = FuchsianSystem::new(vec![q(2, 3)], vec![Matrix::from_i64(&[&[1, 2], &[3, 4]])]).unwrap();
        let ok = okubo_of_convolution(&single, &q(1, 5));
        assert_eq!(ok.t(), &[q(2, 3), q(2, 3)]);
        assert_eq!(ok.b(), &Matrix::<Q>::from_i64(&[&[1, 2], &[3, 4]]).add_scalar(&q(1, 5)));
    }

    #[test]
    fn rejects_coincident_points() {
        let r = FuchsianSystem::<Q>::new(vec![qi(1), qi(1)], vec![Matrix::identity(1), Matrix::identity(1)]);
        assert!(matches!(r, Err(Error::Precondition(_))));
    }

    #[test]
    fn okubo_as_fuchsian_has_the_same_coefficients() {
        let ok: OkuboSystem<Q> = OkuboSystem::new(vec![qi(0), qi(2), qi(0)], Matrix::from_i64(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 10]])).unwrap();
        let sys = ok.fuchsian();
        assert_eq!(sys.points(), &[qi(0), qi(2)]);
        assert_eq!(sys.residue_sum(), *ok.b());
        assert_eq!(sys.coefficient_matrix(), ok.coefficient_matrix());
    }
}
