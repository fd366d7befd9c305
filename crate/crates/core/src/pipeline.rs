//! Construction of Fuchsian systems by scalar additions and middle
//! convolutions starting from a rank-one seed, and the reverse Katz
//! reduction of multiplicative tuples.

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::field::{Cyclo, Field, Q};
use crate::fuchsian::{mc_add, scalar_add, FuchsianSystem};
use crate::matrix::Matrix;
use crate::mult::{dim_formula, mc_mult};
use crate::poly::{rational_roots, Poly};
use crate::tuple::{irreducible_abs, rigidity_from_local, scalar_mult, MatTuple};

#[derive(Clone, Debug, PartialEq)]
pub enum ConstructionStep {
    /// `m_Δ`.
    ScalarAdd(Vec<Q>),
    /// `mc_μ`.
    MiddleConv(Q),
}

/// Exact proxies for `rk(aᵢ) = rk(Aᵢ − 1)` and
/// `rk(a₁+⋯+a_r+μ) = rk(λA₁⋯A_r − 1)`: both hold when the matrices involved
/// have no nonzero integer eigenvalue. `shifted_sum` is the same test for
/// `a₁+⋯+a_r+μ−1`, whose kernel is the one divided out by `mc_{μ−1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct RankHypotheses {
    pub residues: Vec<bool>,
    pub sum: bool,
    pub shifted_sum: bool,
}

impl RankHypotheses {
    pub fn all(&self) -> bool {
        self.sum && self.shifted_sum && self.residues.iter().all(|&b| b)
    }
}

#[derive(Clone, Debug)]
pub struct StepReport {
    pub index: usize,
    pub dim_before: usize,
    pub dim_after: usize,
    pub k_dim: usize,
    pub l_dim: usize,
    /// Index of rigidity of `(a₁, …, a_r, a_∞)` after the step.
    pub rigidity: i64,
    /// For `mc_ν` steps: `μ = ν + 1`, i.e. `λ = e^{2πiμ}` on the monodromy
    /// side.
    pub lambda_exponent: Option<Q>,
    pub hypotheses: Option<RankHypotheses>,
    pub warnings: Vec<String>,
}

fn has_nonzero_integer_eigenvalue(m: &Matrix<Q>) -> bool {
    rational_roots(&m.charpoly()).iter().any(|e| e.is_integer() && !Field::is_zero(e))
}

/// Rank hypotheses for `mc_{μ−1}` on the exact side.
pub fn rank_hypotheses(sys: &FuchsianSystem<Q>, mu: &Q) -> RankHypotheses {
    RankHypotheses {
        residues: sys.residues().iter().map(|a| !has_nonzero_integer_eigenvalue(a)).collect(),
        sum: !has_nonzero_integer_eigenvalue(&sys.residue_sum().add_scalar(mu)),
        shifted_sum: !has_nonzero_integer_eigenvalue(&sys.residue_sum().add_scalar(&(mu - Q::from_integer(1.into())))),
    }
}

pub fn residue_rigidity(sys: &FuchsianSystem<Q>) -> i64 {
    let mut local = sys.residues().to_vec();
    local.push(sys.residue_at_infinity());
    rigidity_from_local(sys.n(), &local)
}

fn validate_seed(seed: &FuchsianSystem<Q>) -> Result<()> {
    if seed.n() != 1 {
        return Err(Error::Precondition(format!("seed must be 1x1, got {}x{}", seed.n(), seed.n())));
    }
    let values: Vec<&Q> = seed.residues().iter().map(|a| &a[(0, 0)]).collect();
    if let Some(v) = values.iter().find(|v| v.is_integer() && !Field::is_zero(**v)) {
        return Err(Error::Precondition(format!("integer seed residue {v} must be normalized to 0")));
    }
    if values.iter().filter(|v| !v.is_integer()).count() < 2 {
        return Err(Error::Precondition("seed needs at least two non-integer residues".into()));
    }
    Ok(())
}

/// Folds `steps` over `seed`, one report per step.
pub fn apply_program(
    seed: &FuchsianSystem<Q>,
    steps: &[ConstructionStep],
    validate: bool,
) -> Result<(FuchsianSystem<Q>, Vec<StepReport>)> {
    if validate {
        validate_seed(seed)?;
    }
    let mut sys = seed.clone();
    let mut reports = Vec::with_capacity(steps.len());
    for (index, step) in steps.iter().enumerate() {
        let before = residue_rigidity(&sys);
        let dim_before = sys.n();
        let mut warnings = Vec::new();
        let (next, k_dim, l_dim, lambda_exponent, hypotheses) = match step {
            ConstructionStep::ScalarAdd(delta) => (scalar_add(delta, &sys)?, 0, 0, None, None),
            ConstructionStep::MiddleConv(nu) => {
                let mu = nu + Q::from_integer(1.into());
                let hyp = rank_hypotheses(&sys, &mu);
                if let Some(i) = hyp.residues.iter().position(|ok| !ok) {
                    warnings.push(format!("a_{} has a nonzero integer eigenvalue", i + 1));
                }
                if !hyp.sum {
                    warnings.push(format!("a_1+…+a_r+{mu} has a nonzero integer eigenvalue"));
                }
                if !hyp.shifted_sum {
                    warnings.push(format!("a_1+…+a_r+{nu} has a nonzero integer eigenvalue"));
                }
                let res = mc_add(&sys, nu);
                let (k, l) = (res.k.dim(), res.l.dim());
                (res.system, k, l, Some(mu), Some(hyp))
            }
        };
        if next.n() == 0 {
            return Err(Error::Precondition(format!("step {}: dimension collapsed to 0", index + 1)));
        }
        let rigidity = residue_rigidity(&next);
        if before == 2 && rigidity != 2 {
            warnings.push(format!("rigidity changed from 2 to {rigidity}"));
        }
        reports.push(StepReport {
            index,
            dim_before,
            dim_after: next.n(),
            k_dim,
            l_dim,
            rigidity,
            lambda_exponent,
            hypotheses,
            warnings,
        });
        sys = next;
    }
    Ok((sys, reports))
}

/// `0`, then `±a/b` for `b = 2, …, 12` and `0 < a < b` coprime.
pub fn shift_grid() -> Vec<Q> {
    let mut grid = vec![Q::from_integer(0.into())];
    for den in 2i64..=12 {
        for num in 1..den {
            if num.gcd(&den) == 1 {
                grid.push(Q::new(num.into(), den.into()));
                grid.push(Q::new((-num).into(), den.into()));
            }
        }
    }
    grid
}

fn shift_score(sys: &FuchsianSystem<Q>, delta: &[Q], mu: &Q) -> (usize, usize) {
    let shifted = scalar_add(delta, sys).expect("one shift per residue");
    let ranks = shifted.residues().iter().map(Matrix::rank).sum();
    (ranks, shifted.residue_sum().add_scalar(mu).rank())
}

/// Greedy coordinate search over [`shift_grid`] maximizing
/// `(Σ rk(aᵢ+δᵢ), rk(Σ(aᵢ+δᵢ)+μ))`; the first grid entry wins ties.
pub fn choose_valid_shift(sys: &FuchsianSystem<Q>, mu: &Q) -> (Vec<Q>, Vec<String>) {
    let grid = shift_grid();
    let r = sys.r();
    let mut delta = vec![grid[0].clone(); r];
    let mut best = shift_score(sys, &delta, mu);
    for _ in 0..4 {
        let mut changed = false;
        for i in 0..r {
            for cand in &grid {
                if *cand == delta[i] {
                    continue;
                }
                let mut trial = delta.clone();
                trial[i] = cand.clone();
                let score = shift_score(sys, &trial, mu);
                if score > best {
                    best = score;
                    delta = trial;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    let mut warnings = Vec::new();
    let full = (sys.n() * r, sys.n());
    if best != full {
        warnings.push(format!("best ranks found {best:?}, full would be {full:?}"));
    }
    (delta, warnings)
}

/// Eigenvalues of `m` that are roots of unity of `ζ_N` type for the ambient
/// order or rational, with algebraic multiplicities.
pub fn supported_eigenvalues(m: &Matrix<Cyclo>) -> Result<Vec<(Cyclo, usize)>> {
    let n = m.rows();
    let order = m.entries().fold(1u32, |acc, e| acc.lcm(&e.order()));
    let unity_order = if order % 2 == 0 { order } else { 2 * order };
    let mut candidates: Vec<Cyclo> = (0..unity_order as i64).map(|k| Cyclo::root_of_unity(unity_order, k)).collect();
    let cp = m.charpoly();
    for root in rational_roots(&component_polynomial(&cp)) {
        let c = Cyclo::rational(root);
        if !candidates.contains(&c) {
            candidates.push(c);
        }
    }
    let mut found = Vec::new();
    let mut total = 0;
    for c in candidates {
        if !cp.eval(&c).is_zero() {
            continue;
        }
        let mult = n - m.add_scalar(&c.neg()).pow(n as u64).rank();
        total += mult;
        found.push((c, mult));
    }
    if total != n {
        return Err(Error::UnsupportedEigenvalues(format!("only {total} of {n} eigenvalues are roots of unity or rational")));
    }
    Ok(found)
}

/// A nonzero rational polynomial whose roots contain the rational roots of
/// `p`: the first nonzero coordinate of `p` in the power basis.
fn component_polynomial(p: &Poly<Cyclo>) -> Poly<Q> {
    let order = p.coeffs().iter().fold(1u32, |acc, c| acc.lcm(&c.order()));
    let lifted: Vec<Cyclo> = p.coeffs().iter().map(|c| c.lift_to(order)).collect();
    let phi = lifted.first().map_or(1, |c| c.coeffs().len());
    for j in 0..phi {
        let comp = Poly::new(lifted.iter().map(|c| c.coeffs()[j].clone()).collect());
        if !comp.is_zero() {
            return comp;
        }
    }
    Poly::zero()
}

#[derive(Clone, Debug)]
pub enum KatzReduction {
    Reduced {
        /// `Ω` with `ωᵢ = αᵢ⁻¹`.
        omega: Vec<Cyclo>,
        lambda: Cyclo,
        reduced: MatTuple<Cyclo>,
    },
    NotReducible,
}

/// Searches all eigenvalue selections `αᵢ ∈ eig(Aᵢ)`, `β ∈ eig((A₁⋯A_r)⁻¹)`
/// and applies `MC_λ ∘ M_Ω` with `Ω = (α₁⁻¹, …, α_r⁻¹)`, `λ = β·Πα_i` for the
/// choice minimizing the resulting dimension.
pub fn katz_reduce(a: &MatTuple<Cyclo>) -> Result<KatzReduction> {
    if !irreducible_abs(a) {
        return Err(Error::Reducible);
    }
    let mut spectra = Vec::with_capacity(a.r() + 1);
    for m in a.matrices() {
        spectra.push(supported_eigenvalues(m)?);
    }
    let inf = a.product().inverse()?;
    spectra.push(supported_eigenvalues(&inf)?);
    let mut best: Option<(i64, Vec<Cyclo>, Cyclo)> = None;
    let mut choice = vec![0usize; spectra.len()];
    'search: loop {
        let alphas: Vec<Cyclo> = (0..a.r()).map(|i| spectra[i][choice[i]].0.clone()).collect();
        let beta = &spectra[a.r()][choice[a.r()]].0;
        let lambda = alphas.iter().fold(beta.clone(), |acc, x| acc.mul(x));
        if !lambda.is_one() {
            let omega: Vec<Cyclo> = alphas.iter().map(|x| x.inv().expect("eigenvalue of invertible matrix")).collect();
            let scaled = scalar_mult(&omega, a)?;
            let d = dim_formula(&scaled, &lambda)?;
            if best.as_ref().is_none_or(|(bd, _, _)| d < *bd) {
                best = Some((d, omega, lambda));
            }
        }
        // odometer, last position fastest
        let mut pos = spectra.len();
        loop {
            if pos == 0 {
                break 'search;
            }
            pos -= 1;
            choice[pos] += 1;
            if choice[pos] < spectra[pos].len() {
                break;
            }
            choice[pos] = 0;
        }
    }
    match best {
        Some((d, omega, lambda)) if d < a.n() as i64 => {
            let scaled = scalar_mult(&omega, a)?;
            let reduced = mc_mult(&scaled, &lambda)?.quotient;
            Ok(KatzReduction::Reduced { omega, lambda, reduced })
        }
        _ => Ok(KatzReduction::NotReducible),
    }
}
