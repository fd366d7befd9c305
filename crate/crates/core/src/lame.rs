//! Fuchsian and Okubo systems attached to the Lamé equation
//! `p(x)y″ + ½p′(x)y′ − (n(n+1)x + B)y = 0`, `p(x) = 4(x−t₁)(x−t₂)(x−t₃)`.

use crate::error::{Error, Result};
use crate::field::{q, qi, Field, Q};
use crate::fuchsian::{FuchsianSystem, OkuboSystem};
use crate::matrix::Matrix;

#[derive(Clone, Debug, PartialEq)]
pub struct LameEquation {
    pub n_index: Q,
    pub accessory: Q,
    pub roots: [Q; 3],
}

impl LameEquation {
    pub fn new(n_index: Q, accessory: Q, roots: [Q; 3]) -> Result<Self> {
        let [t1, t2, t3] = &roots;
        if t1 == t2 || t1 == t3 || t2 == t3 {
            return Err(Error::Precondition("roots of p(x) must be pairwise distinct".into()));
        }
        Ok(LameEquation { n_index, accessory, roots })
    }

    fn nn1(&self) -> Q {
        &self.n_index * (&self.n_index + qi(1))
    }

    /// `l₁ = (t₂ n(n+1) + B) / (4(t₂ − t₃))`.
    pub fn l1(&self) -> Q {
        let [_, t2, t3] = &self.roots;
        (t2 * self.nn1() + &self.accessory) / (qi(4) * (t2 - t3))
    }

    /// `l₂ = n(n+1)/4 − l₁`, which equals `−(t₃ n(n+1) + B) / (4(t₂ − t₃))`.
    pub fn l2(&self) -> Q {
        let l2 = self.nn1() / qi(4) - self.l1();
        let [_, t2, t3] = &self.roots;
        let partial_fraction = -(t3 * self.nn1() + &self.accessory) / (qi(4) * (t2 - t3));
        assert_eq!(l2, partial_fraction, "the two expressions for l₂ disagree");
        l2
    }

    /// Residues `a₁, a₂, a₃` at `t₁, t₂, t₃`.
    pub fn residues(&self) -> [Matrix<Q>; 3] {
        let half = q(1, 2);
        [
            Matrix::from_rows(vec![vec![qi(0), qi(1)], vec![qi(0), half.clone()]]),
            Matrix::from_rows(vec![vec![qi(0), qi(0)], vec![self.l1(), -half.clone()]]),
            Matrix::from_rows(vec![vec![qi(0), qi(0)], vec![self.l2(), -half]]),
        ]
    }
}

/// The 2×2 Fuchsian system with three singular points equivalent to `L`.
pub fn lame_system(l: &LameEquation) -> FuchsianSystem<Q> {
    FuchsianSystem::new(l.roots.to_vec(), l.residues().to_vec()).expect("roots are distinct")
}

/// The Lamé system extended by further 2×2 residues at extra points.
pub fn lame_extended_system(l: &LameEquation, extra: &[(Q, Matrix<Q>)]) -> Result<FuchsianSystem<Q>> {
    let mut points = l.roots.to_vec();
    let mut residues = l.residues().to_vec();
    for (t, a) in extra {
        points.push(t.clone());
        residues.push(a.clone());
    }
    FuchsianSystem::new(points, residues)
}

/// Block-diagonal gauge `d = diag(B₁, B₂, B₃, 1, …, 1)` that makes the first
/// three residues diagonal inside the convolution.
pub fn lame_gauge(l: &LameEquation, r: usize) -> Matrix<Q> {
    let mut d = Matrix::identity(2 * r);
    d.set_block(0, 0, &Matrix::from_rows(vec![vec![qi(1), qi(-2)], vec![qi(0), qi(1)]]));
    d.set_block(2, 2, &Matrix::from_rows(vec![vec![qi(1), qi(0)], vec![qi(-2) * l.l1(), qi(1)]]));
    d.set_block(4, 4, &Matrix::from_rows(vec![vec![qi(1), qi(0)], vec![qi(-2) * l.l2(), qi(1)]]));
    d
}

/// `D(L, a, μ)`: the Okubo system `(x − T)Y′ = (c̃ + μ)Y` equivalent to
/// `mc_μ` of the (extended) Lamé system.
pub fn lame_okubo(l: &LameEquation, extra: &[(Q, Matrix<Q>)], mu: &Q) -> Result<OkuboSystem<Q>> {
    for (i, (_, a)) in extra.iter().enumerate() {
        if a.rows() != 2 || a.cols() != 2 {
            return Err(Error::DimensionMismatch(format!("extra residue a_{} is not 2x2", i + 4)));
        }
        if a.rank() != 2 {
            return Err(Error::Hypothesis(format!("rk(a_{}) must be 2", i + 4)));
        }
    }
    let sys = lame_extended_system(l, extra)?;
    if sys.residue_sum().add_scalar(mu).det().is_zero() {
        return Err(Error::Hypothesis(format!("−μ = {} is an eigenvalue of a₁+⋯+a_r", -mu)));
    }
    let (l1, l2) = (l.l1(), l.l2());
    let half = q(1, 2);
    let size = 3 + 2 * extra.len();
    let mut c = Matrix::<Q>::zeros(size, size);
    let heads = [qi(0), qi(-2) * &l1, qi(-2) * &l2];
    for (row, head) in heads.iter().enumerate() {
        c[(row, 0)] = head + &half;
        c[(row, 1)] = -half.clone();
        c[(row, 2)] = -half.clone();
        let selector = Matrix::from_rows(vec![vec![head.clone(), qi(1)]]);
        for (j, (_, a)) in extra.iter().enumerate() {
            c.set_block(row, 3 + 2 * j, &selector.mul(a));
        }
    }
    for blk in 0..extra.len() {
        let r0 = 3 + 2 * blk;
        c[(r0, 0)] = qi(1);
        c[(r0 + 1, 0)] = half.clone();
        c[(r0 + 1, 1)] = -half.clone();
        c[(r0 + 1, 2)] = -half.clone();
        for (j, (_, a)) in extra.iter().enumerate() {
            c.set_block(r0, 3 + 2 * j, a);
        }
    }
    let mut t = l.roots.to_vec();
    for (tj, _) in extra {
        t.push(tj.clone());
        t.push(tj.clone());
    }
    OkuboSystem::new(t, c.add_scalar(mu))
}
