//! Analytic continuation of a fundamental matrix along piecewise smooth
//! paths with an embedded Dormand–Prince 5(4) integrator.

use num_complex::Complex64;

use super::linalg::CMatrix;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum Segment {
    Line { from: Complex64, to: Complex64 },
    /// `center + radius·e^{i(start + s·sweep)}` for `s ∈ [0,1]`.
    Arc { center: Complex64, radius: f64, start: f64, sweep: f64 },
}

impl Segment {
    fn point(&self, s: f64) -> Complex64 {
        match *self {
            Segment::Line { from, to } => from + (to - from) * s,
            Segment::Arc { center, radius, start, sweep } => center + Complex64::from_polar(radius, start + s * sweep),
        }
    }

    fn velocity(&self, s: f64) -> Complex64 {
        match *self {
            Segment::Line { from, to } => to - from,
            Segment::Arc { radius, start, sweep, .. } => {
                Complex64::i() * sweep * Complex64::from_polar(radius, start + s * sweep)
            }
        }
    }

    pub fn start_point(&self) -> Complex64 {
        self.point(0.0)
    }

    pub fn end_point(&self) -> Complex64 {
        self.point(1.0)
    }

    /// Lower bound for the distance from `p` to the segment.
    pub fn distance_to(&self, p: Complex64) -> f64 {
        match *self {
            Segment::Line { from, to } => {
                let d = to - from;
                let len2 = d.norm_sqr();
                let s = if len2 == 0.0 { 0.0 } else { ((p - from) * d.conj()).re / len2 };
                (p - self.point(s.clamp(0.0, 1.0))).norm()
            }
            Segment::Arc { center, radius, .. } => ((p - center).norm() - radius).abs(),
        }
    }
}

pub type Path = Vec<Segment>;

/// `Y′ = Σ aᵢ/(x − tᵢ) · Y`.
#[derive(Clone, Debug)]
pub struct ComplexSystem {
    pub points: Vec<Complex64>,
    pub residues: Vec<CMatrix>,
}

impl ComplexSystem {
    pub fn n(&self) -> usize {
        self.residues.first().map_or(0, CMatrix::nrows)
    }

    fn coefficient(&self, z: Complex64) -> CMatrix {
        let n = self.n();
        let mut a = CMatrix::zeros(n, n);
        for (t, r) in self.points.iter().zip(&self.residues) {
            a += r * (Complex64::from(1.0) / (z - t));
        }
        a
    }
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// fifth-order minus embedded fourth-order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const MIN_STEP: f64 = 1e-13;
const MAX_STEPS: usize = 2_000_000;

fn c(x: f64) -> Complex64 {
    Complex64::from(x)
}

fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn integrate_segment(sys: &ComplexSystem, seg: &Segment, y0: CMatrix, tol: f64) -> Result<CMatrix> {
    let f = |s: f64, y: &CMatrix| -> CMatrix { sys.coefficient(seg.point(s)) * y * seg.velocity(s) };
    let mut s = 0.0;
    let mut y = y0;
    let mut h: f64 = 0.01;
    let mut k1 = f(s, &y);
    for _ in 0..MAX_STEPS {
        if s >= 1.0 {
            return Ok(y);
        }
        h = h.min(1.0 - s);
        let k2 = f(s + C2 * h, &(&y + &k1 * c(h * A21)));
        let k3 = f(s + C3 * h, &(&y + (&k1 * c(A31) + &k2 * c(A32)) * c(h)));
        let k4 = f(s + C4 * h, &(&y + (&k1 * c(A41) + &k2 * c(A42) + &k3 * c(A43)) * c(h)));
        let k5 = f(s + C5 * h, &(&y + (&k1 * c(A51) + &k2 * c(A52) + &k3 * c(A53) + &k4 * c(A54)) * c(h)));
        let k6 = f(s + h, &(&y + (&k1 * c(A61) + &k2 * c(A62) + &k3 * c(A63) + &k4 * c(A64) + &k5 * c(A65)) * c(h)));
        let y_new = &y + (&k1 * c(B1) + &k3 * c(B3) + &k4 * c(B4) + &k5 * c(B5) + &k6 * c(B6)) * c(h);
        let k7 = f(s + h, &y_new);
        let err = (&k1 * c(E1) + &k3 * c(E3) + &k4 * c(E4) + &k5 * c(E5) + &k6 * c(E6) + &k7 * c(E7)) * c(h);
        let scale = tol * (1.0 + max_abs(&y).max(max_abs(&y_new)));
        let ratio = max_abs(&err) / scale;
        if ratio <= 1.0 {
            s += h;
            y = y_new;
            k1 = k7;
        }
        let factor = if ratio == 0.0 { 5.0 } else { (0.9 * ratio.powf(-0.2)).clamp(0.2, 5.0) };
        h *= factor;
        if h < MIN_STEP && s < 1.0 {
            return Err(Error::StepUnderflow { at: format!("{}", seg.point(s)) });
        }
    }
    Err(Error::StepUnderflow { at: format!("{} (step limit)", seg.point(s)) })
}

/// Continues `y0` along `path`. The path must stay away from every singular
/// point.
pub fn integrate_along(sys: &ComplexSystem, path: &[Segment], y0: &CMatrix, tol: f64) -> Result<CMatrix> {
    for seg in path {
        if let Some(t) = sys.points.iter().find(|&&t| seg.distance_to(t) < 1e-9) {
            return Err(Error::Precondition(format!("path passes through the singular point {t}")));
        }
    }
    let mut y = y0.clone();
    for seg in path {
        y = integrate_segment(sys, seg, y, tol)?;
    }
    Ok(y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn circle(center: Complex64, radius: f64) -> Path {
        vec![Segment::Arc { center, radius, start: -PI / 2.0, sweep: 2.0 * PI }]
    }

    fn scalar(a: f64) -> CMatrix {
        CMatrix::from_element(1, 1, Complex64::from(a))
    }

    #[test]
    fn square_root_changes_sign() {
        let sys = ComplexSystem { points: vec![Complex64::from(0.0)], residues: vec![scalar(0.5)] };
        let y = integrate_along(&sys, &circle(Complex64::from(0.0), 1.0), &scalar(1.0), 1e-12).unwrap();
        assert!((y[(0, 0)] + 1.0).norm() < 1e-8);
    }

    #[test]
    fn constant_system_is_trivial() {
        let sys = ComplexSystem { points: vec![Complex64::from(0.0)], residues: vec![CMatrix::zeros(2, 2)] };
        let y0 = CMatrix::identity(2, 2);
        let path = vec![Segment::Line { from: Complex64::new(1.0, -1.0), to: Complex64::new(3.0, 2.0) }];
        assert!((integrate_along(&sys, &path, &y0, 1e-12).unwrap() - y0).norm() < 1e-14);
    }

    #[test]
    fn null_homotopic_loop() {
        let sys = ComplexSystem { points: vec![Complex64::from(0.0)], residues: vec![scalar(1.0 / 3.0)] };
        let y = integrate_along(&sys, &circle(Complex64::from(5.0), 1.0), &scalar(1.0), 1e-12).unwrap();
        assert!((y[(0, 0)] - 1.0).norm() < 1e-8);
    }

    #[test]
    fn path_through_singularity_rejected() {
        let sys = ComplexSystem { points: vec![Complex64::from(0.0)], residues: vec![scalar(0.5)] };
        let path = vec![Segment::Line { from: Complex64::from(-1.0), to: Complex64::from(1.0) }];
        assert!(integrate_along(&sys, &path, &scalar(1.0), 1e-10).is_err());
    }
}
