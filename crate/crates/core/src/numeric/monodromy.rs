//! Monodromy tuples along standard loops.
//!
//! The base point sits below all singular points; `γᵢ` runs straight towards
//! `tᵢ`, around a counterclockwise circle and back. Continuing a fundamental
//! matrix `F` along `γ` yields `F·Mon(γ)`, so `Mon(γδ) = Mon(δ)Mon(γ)` and
//! the loops ordered by increasing real part satisfy
//! `Mon(γ₁)⋯Mon(γ_r)·Mon(γ_∞) = 1`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use super::linalg::{to_complex, CMatrix};
use super::ode::{integrate_along, ComplexSystem, Path, Segment};
use crate::error::{Error, Result};
use crate::field::{Field, Q};
use crate::fuchsian::FuchsianSystem;

#[derive(Clone, Debug, PartialEq)]
pub struct LoopConfig {
    /// Default: real part at the middle of the points, imaginary part
    /// `−(1 + max|tᵢ|)`.
    pub base: Option<Complex64>,
    /// Loop order as indices into the point list. Default: increasing real
    /// part, then imaginary part.
    pub ordering: Option<Vec<usize>>,
    /// Circle radius as a fraction of the distance to the nearest other
    /// point.
    pub radius_factor: f64,
    /// Local error tolerance of the integrator.
    pub tolerance: f64,
}

impl Default for LoopConfig {
    fn default() -> Self {
        LoopConfig { base: None, ordering: None, radius_factor: 0.4, tolerance: 1e-12 }
    }
}

/// Concrete loops for a given set of points.
#[derive(Clone, Debug)]
pub struct Loops {
    pub base: Complex64,
    pub order: Vec<usize>,
    pub radii: Vec<f64>,
    pub points: Vec<Complex64>,
}

impl Loops {
    pub fn new(points: &[Complex64], cfg: &LoopConfig) -> Result<Self> {
        let r = points.len();
        if r == 0 {
            return Err(Error::Precondition("no singular points".into()));
        }
        if !(cfg.radius_factor > 0.0 && cfg.radius_factor <= 1.0) {
            return Err(Error::Precondition("radius factor must lie in (0, 1]".into()));
        }
        let max_abs = points.iter().map(|t| t.norm()).fold(0.0, f64::max);
        let base = cfg.base.unwrap_or_else(|| {
            let lo = points.iter().map(|t| t.re).fold(f64::INFINITY, f64::min);
            let hi = points.iter().map(|t| t.re).fold(f64::NEG_INFINITY, f64::max);
            Complex64::new((lo + hi) / 2.0, -(1.0 + max_abs))
        });
        let order = match &cfg.ordering {
            Some(o) => {
                let mut sorted = o.clone();
                sorted.sort_unstable();
                if sorted != (0..r).collect::<Vec<_>>() {
                    return Err(Error::Precondition("ordering is not a permutation of the points".into()));
                }
                o.clone()
            }
            None => {
                let mut o: Vec<usize> = (0..r).collect();
                o.sort_by(|&i, &j| points[i].re.total_cmp(&points[j].re).then(points[i].im.total_cmp(&points[j].im)));
                o
            }
        };
        let radii: Vec<f64> = (0..r)
            .map(|i| {
                let nearest = (0..r)
                    .filter(|&j| j != i)
                    .map(|j| (points[i] - points[j]).norm())
                    .fold(f64::INFINITY, f64::min);
                let nearest = if nearest.is_finite() { nearest } else { (points[i] - base).norm() };
                cfg.radius_factor * nearest
            })
            .collect();
        for i in 0..r {
            for j in 0..i {
                if radii[i] + radii[j] >= (points[i] - points[j]).norm() {
                    return Err(Error::Precondition("loop circles overlap; lower the radius factor".into()));
                }
            }
        }
        for (t, rho) in points.iter().zip(&radii) {
            if (t - base).norm() <= *rho {
                return Err(Error::Precondition(format!("base point lies inside the circle around {t}")));
            }
        }
        Ok(Loops { base, order, radii, points: points.to_vec() })
    }

    /// `γᵢ` for the point with index `i`.
    pub fn loop_path(&self, i: usize) -> Path {
        let t = self.points[i];
        let rho = self.radii[i];
        let dir = (self.base - t) / (self.base - t).norm();
        let touch = t + dir * rho;
        vec![
            Segment::Line { from: self.base, to: touch },
            Segment::Arc { center: t, radius: rho, start: dir.arg(), sweep: 2.0 * PI },
            Segment::Line { from: touch, to: self.base },
        ]
    }

    /// `γ_∞`: a clockwise circle enclosing every point.
    pub fn infinity_path(&self) -> Path {
        let lo = self.points.iter().map(|t| t.re).fold(f64::INFINITY, f64::min);
        let hi = self.points.iter().map(|t| t.re).fold(f64::NEG_INFINITY, f64::max);
        let center = Complex64::new((lo + hi) / 2.0, 0.0);
        let enclosing = self.points.iter().zip(&self.radii).map(|(t, r)| (t - center).norm() + r).fold(0.0, f64::max);
        let radius = (self.base - center).norm().max(enclosing + 0.5);
        let bottom = center - Complex64::i() * radius;
        let start = -PI / 2.0;
        let mut path = Vec::new();
        let direct = (self.base - bottom).norm() > 1e-12;
        if direct {
            path.push(Segment::Line { from: self.base, to: bottom });
        }
        path.push(Segment::Arc { center, radius, start, sweep: -2.0 * PI });
        if direct {
            path.push(Segment::Line { from: bottom, to: self.base });
        }
        path
    }
}

/// Monodromy matrices in loop order with diagnostics.
#[derive(Clone, Debug)]
pub struct ComplexTuple {
    pub matrices: Vec<CMatrix>,
    pub infinity: CMatrix,
    pub loops: Loops,
    /// `‖Mon(γ₁)⋯Mon(γ_r)·Mon(γ_∞) − 1‖_F`.
    pub product_residual: f64,
}

impl ComplexTuple {
    pub fn n(&self) -> usize {
        self.infinity.nrows()
    }

    pub fn product(&self) -> CMatrix {
        let n = self.n();
        self.matrices.iter().fold(CMatrix::identity(n, n), |acc, m| acc * m)
    }
}

pub fn complex_system<F: Field>(sys: &FuchsianSystem<F>) -> ComplexSystem {
    ComplexSystem {
        points: sys.points().iter().map(|t| t.to_complex()).collect(),
        residues: sys.residues().iter().map(to_complex).collect(),
    }
}

pub fn monodromy_tuple<F: Field>(sys: &FuchsianSystem<F>, cfg: &LoopConfig) -> Result<ComplexTuple> {
    let csys = complex_system(sys);
    let loops = Loops::new(&csys.points, cfg)?;
    monodromy_with_loops(&csys, loops, cfg.tolerance)
}

pub fn monodromy_with_loops(sys: &ComplexSystem, loops: Loops, tol: f64) -> Result<ComplexTuple> {
    let n = sys.n();
    let id = CMatrix::identity(n, n);
    let mut paths: Vec<Path> = loops.order.iter().map(|&i| loops.loop_path(i)).collect();
    paths.push(loops.infinity_path());
    let mut mats = paths
        .par_iter()
        .map(|p| integrate_along(sys, p, &id, tol))
        .collect::<Result<Vec<CMatrix>>>()?;
    let infinity = mats.pop().expect("loop at infinity");
    let product = mats.iter().fold(id.clone(), |acc, m| acc * m) * &infinity;
    let product_residual = (product - id).norm();
    Ok(ComplexTuple { matrices: mats, infinity, loops, product_residual })
}

/// `max_i |det Mon(γᵢ) − exp(2πi·tr aᵢ)|`.
pub fn abel_residual(sys: &FuchsianSystem<Q>, tuple: &ComplexTuple) -> f64 {
    tuple
        .loops
        .order
        .iter()
        .zip(&tuple.matrices)
        .map(|(&i, m)| {
            let tr = sys.residues()[i].trace().to_complex().re;
            let expected = Complex64::from_polar(1.0, 2.0 * PI * tr);
            (m.determinant() - expected).norm()
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{q, qi};
    use crate::matrix::Matrix;

    fn scalars(a: &[Q], t: &[Q]) -> FuchsianSystem<Q> {
        FuchsianSystem::new(t.to_vec(), a.iter().map(|x| Matrix::from_rows(vec![vec![x.clone()]])).collect()).unwrap()
    }

    #[test]
    fn scalar_exponentials() {
        let sys = scalars(&[q(1, 2), q(1, 3)], &[qi(0), qi(1)]);
        let m = monodromy_tuple(&sys, &LoopConfig::default()).unwrap();
        assert!((m.matrices[0][(0, 0)] + 1.0).norm() < 1e-8);
        assert!((m.matrices[1][(0, 0)] - Complex64::from_polar(1.0, 2.0 * PI / 3.0)).norm() < 1e-8);
        assert!(m.product_residual < 1e-8);
        assert!(abel_residual(&sys, &m) < 1e-8);
    }

    #[test]
    fn ordering_follows_real_part() {
        let sys = scalars(&[q(1, 5), q(1, 2), q(1, 3)], &[qi(2), qi(-1), qi(0)]);
        let m = monodromy_tuple(&sys, &LoopConfig::default()).unwrap();
        assert_eq!(m.loops.order, vec![1, 2, 0]);
        assert!((m.matrices[0][(0, 0)] + 1.0).norm() < 1e-8);
        assert!(m.product_residual < 1e-8);
    }

    #[test]
    fn product_relation_for_a_matrix_system() {
        let sys = FuchsianSystem::new(
            vec![qi(0), qi(1), qi(3)],
            vec![
                Matrix::from_rows(vec![vec![q(1, 3), qi(1)], vec![qi(0), q(-1, 4)]]),
                Matrix::from_rows(vec![vec![q(1, 5), qi(0)], vec![qi(2), q(2, 7)]]),
                Matrix::from_rows(vec![vec![qi(0), q(1, 2)], vec![q(1, 3), qi(0)]]),
            ],
        )
        .unwrap();
        let m = monodromy_tuple(&sys, &LoopConfig::default()).unwrap();
        // the matrices have norm ~10³ here
        assert!(m.product_residual < 1e-6, "{}", m.product_residual);
        assert!(abel_residual(&sys, &m) < 1e-6);
    }

    #[test]
    fn bad_ordering_rejected() {
        let sys = scalars(&[q(1, 2), q(1, 3)], &[qi(0), qi(1)]);
        let cfg = LoopConfig { ordering: Some(vec![0, 0]), ..LoopConfig::default() };
        assert!(monodromy_tuple(&sys, &cfg).is_err());
    }
}
