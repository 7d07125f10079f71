//! Pseudo-densities, moment matrices and the two explicit constructions:
//! the knapsack pseudo-density and the lopsided local pseudo-density.

use crate::cube::{
    binomial, binomial_real, pairwise_sum, popcount, restrict_mask, subsets_of_size, subsets_up_to, CubeFunction,
    ProductMeasure,
};
use crate::error::{Error, Result};
use crate::symmat::SymMatrix;

/// Largest number of variables for moment-matrix and locality checks.
pub const MAX_PSEUDO_VARS: usize = 16;

/// Default tolerance for validation.
pub const DEFAULT_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PseudoKind {
    /// Nonnegative against squares of degree ≤ d/2 functions.
    Sos,
    /// Nonnegative against nonnegative d-juntas.
    Local,
}

impl PseudoKind {
    pub fn name(self) -> &'static str {
        match self {
            PseudoKind::Sos => "sos",
            PseudoKind::Local => "local",
        }
    }
}

/// A mean-one function on `{0,1}^m` with its base measure and claimed degree.
#[derive(Debug, Clone, PartialEq)]
pub struct PseudoDensity {
    f: CubeFunction,
    measure: ProductMeasure,
    claimed_degree: usize,
    kind: PseudoKind,
}

impl PseudoDensity {
    /// Checks `E_μ f = 1` within 1e-10; degree claims are validated separately.
    pub fn new(f: CubeFunction, measure: ProductMeasure, claimed_degree: usize, kind: PseudoKind) -> Result<Self> {
        let mean = f.mean_under(&measure)?;
        if (mean - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidInput(format!("pseudo-density has mean {mean}, expected 1")));
        }
        Ok(Self { f, measure, claimed_degree, kind })
    }

    /// Uniform-measure sos pseudo-density.
    pub fn sos(f: CubeFunction, claimed_degree: usize) -> Result<Self> {
        let n = f.n();
        Self::new(f, ProductMeasure::uniform(n), claimed_degree, PseudoKind::Sos)
    }

    pub fn function(&self) -> &CubeFunction {
        &self.f
    }

    pub fn measure(&self) -> &ProductMeasure {
        &self.measure
    }

    pub fn claimed_degree(&self) -> usize {
        self.claimed_degree
    }

    pub fn kind(&self) -> PseudoKind {
        self.kind
    }

    pub fn m(&self) -> usize {
        self.f.n()
    }

    /// `E_μ D g`.
    pub fn pair(&self, g: &CubeFunction) -> Result<f64> {
        self.f.mul(g)?.mean_under(&self.measure)
    }

    /// `E_μ D`.
    pub fn mass(&self) -> f64 {
        self.f.mean_under(&self.measure).expect("shape")
    }

    pub fn sup_norm(&self) -> f64 {
        self.f.sup_norm()
    }

    /// `E_μ D x^T` for every `T ⊆ [m]`.
    pub fn all_moments(&self) -> Vec<f64> {
        let w = self.measure.weights();
        let mut g: Vec<f64> = self.f.values().iter().zip(&w).map(|(d, p)| d * p).collect();
        // Superset sums: g[T] <- Σ_{x ⊇ T} g[x].
        let len = g.len();
        let mut h = 1;
        while h < len {
            for i in 0..len {
                if i & h == 0 {
                    g[i] += g[i | h];
                }
            }
            h *= 2;
        }
        g
    }
}

/// Moment matrix `Y(A,B) = E D x^{A∪B}` over `F = {A : |A| ≤ order}`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentMatrix {
    /// Index family `F`, ordered by size then colex.
    pub index: Vec<u32>,
    pub order: usize,
    pub matrix: SymMatrix,
}

/// Moment matrix of order `⌊d/2⌋`.
pub fn moment_matrix(d: &PseudoDensity, degree: usize) -> Result<MomentMatrix> {
    let m = d.m();
    if m > MAX_PSEUDO_VARS {
        return Err(Error::Capacity(format!("{m} variables exceeds {MAX_PSEUDO_VARS}")));
    }
    let order = (degree / 2).min(m);
    let moments = d.all_moments();
    let index = subsets_up_to(m, order);
    let matrix = SymMatrix::from_fn(index.len(), |i, j| moments[(index[i] | index[j]) as usize]);
    Ok(MomentMatrix { index, order, matrix })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SosValidation {
    pub passed: bool,
    pub mean: f64,
    pub order: usize,
    pub min_eigenvalue: f64,
    /// Coefficients `ĝ` over the index family with `E D g² < 0`, on failure.
    pub witness: Option<Vec<f64>>,
    pub index: Vec<u32>,
}

/// Checks `E D = 1` and positive semidefiniteness of the moment matrix of
/// order `⌊d/2⌋`, both within `tol`.
pub fn validate_sos_pseudo_density(d: &PseudoDensity, degree: usize, tol: f64) -> Result<SosValidation> {
    let mean = d.mass();
    let y = moment_matrix(d, degree)?;
    let check = y.matrix.psd_check(tol)?;
    Ok(SosValidation {
        passed: (mean - 1.0).abs() <= tol && check.ok,
        mean,
        order: y.order,
        min_eigenvalue: check.min_eigenvalue,
        witness: check.witness,
        index: y.index,
    })
}

/// `c_w(t) = ∏_{a≠w} (t−a)/(w−a)` over `a ∈ {0..m}`, one ratio per factor.
pub fn interpolation_weight(m: usize, w: usize, t: f64) -> f64 {
    (0..=m).filter(|&a| a != w).map(|a| (t - a as f64) / (w as f64 - a as f64)).product()
}

/// The knapsack pseudo-density of degree `m` for odd `3 ≤ m ≤ 15`:
/// `D(x) = 2^m c_{|x|}(m/2) / C(m,|x|)`.
pub fn grigoriev_knapsack(m: usize) -> Result<PseudoDensity> {
    if m.is_multiple_of(2) || !(3..=15).contains(&m) {
        return Err(Error::InvalidInput(format!("knapsack pseudo-density needs odd m in 3..=15, got {m}")));
    }
    let half = m as f64 / 2.0;
    let by_weight: Vec<f64> = (0..=m)
        .map(|w| 2f64.powi(m as i32) * interpolation_weight(m, w, half) / binomial(m, w) as f64)
        .collect();
    let f = CubeFunction::from_fn(m, |x| by_weight[popcount(x)])?;
    PseudoDensity::sos(f, m)
}

/// `E D x^S` for the knapsack pseudo-density: `C(m/2,|S|)/C(m,|S|)`.
pub fn knapsack_moment(m: usize, s: usize) -> f64 {
    binomial_real(m as f64 / 2.0, s) / binomial(m, s) as f64
}

/// `(1/m²)((Σx − m/2)² − 1/4)`, nonnegative on the cube for odd `m`.
pub fn knapsack_function(m: usize) -> Result<CubeFunction> {
    let mf = m as f64;
    CubeFunction::from_fn(m, |x| ((popcount(x) as f64 - mf / 2.0).powi(2) - 0.25) / (mf * mf))
}

/// `(1 − Σx)²`.
pub fn lopsided_function(m: usize) -> Result<CubeFunction> {
    CubeFunction::from_fn(m, |x| (1.0 - popcount(x) as f64).powi(2))
}

/// The local pseudo-density for lopsided disjointness under `μ(1) = 2/m`:
/// `D(0) = −1/μ^m(0)`, `D(x) = 2/(m μ^m(x))` for `|x| = 1`, zero elsewhere.
///
/// `E_μ D 1_{x_S=0} = 1 − 2|S|/m`, so this density is `⌊m/2⌋`-local.
pub fn lopsided_pseudo_density(m: usize) -> Result<PseudoDensity> {
    lopsided_family(m, 1.0, 2.0 / m as f64, m / 2)
}

/// Variant with mass `a = (m−2)/(m+2)` at the origin and `2/(m+2)` on each
/// unit vector. It is `(⌊m/2⌋+1)`-local with `E_μ D f = −(m−2)/(m+2)` for
/// `f = (1 − Σx)²`.
pub fn lopsided_rebalanced_pseudo_density(m: usize) -> Result<PseudoDensity> {
    let mf = m as f64;
    lopsided_family(m, (mf - 2.0) / (mf + 2.0), 2.0 / (mf + 2.0), m / 2 + 1)
}

/// `D(0) μ^m(0) = −a` and `D(e_i) μ^m(e_i) = b`.
fn lopsided_family(m: usize, a: f64, b: f64, degree: usize) -> Result<PseudoDensity> {
    if m < 3 {
        return Err(Error::InvalidInput(format!("lopsided pseudo-density needs m >= 3, got {m}")));
    }
    let mu = ProductMeasure::biased(m, 2.0 / m as f64)?;
    let f = CubeFunction::from_fn(m, |x| match popcount(x) {
        0 => -a / mu.weight(x),
        1 => b / mu.weight(x),
        _ => 0.0,
    })?;
    PseudoDensity::new(f, mu, degree, PseudoKind::Local)
}

#[derive(Debug, Clone, PartialEq)]
pub struct LocalValidation {
    pub passed: bool,
    pub mean: f64,
    /// Smallest `E_μ D 1_b` found, with its coordinate set and pattern.
    pub min_value: f64,
    pub worst: Option<(u32, u32)>,
    pub checked: usize,
}

/// Checks `E_μ D 1_{x_S = b} ≥ −tol` over all `|S| ≤ d` and all `b`.
pub fn validate_local_pseudo_density(
    d: &PseudoDensity,
    degree: usize,
    mu: &ProductMeasure,
    tol: f64,
) -> Result<LocalValidation> {
    let m = d.m();
    if m > MAX_PSEUDO_VARS {
        return Err(Error::Capacity(format!("{m} variables exceeds {MAX_PSEUDO_VARS}")));
    }
    if mu.n() != m {
        return Err(Error::ShapeMismatch("measure and density disagree on m".into()));
    }
    let w = mu.weights();
    let g: Vec<f64> = d.function().values().iter().zip(&w).map(|(a, b)| a * b).collect();
    let mean = pairwise_sum(&g);
    let mut min_value = f64::INFINITY;
    let mut worst = None;
    let mut checked = 0;
    for size in 0..=degree.min(m) {
        for s in subsets_of_size(m, size) {
            let mut marg = vec![0.0; 1 << size];
            for (x, &v) in g.iter().enumerate() {
                marg[restrict_mask(x as u32, s) as usize] += v;
            }
            for (b, &v) in marg.iter().enumerate() {
                checked += 1;
                if v < min_value {
                    min_value = v;
                    worst = Some((s, b as u32));
                }
            }
        }
    }
    Ok(LocalValidation { passed: (mean - 1.0).abs() <= tol && min_value >= -tol, mean, min_value, worst, checked })
}

#[derive(Debug, Clone, PartialEq)]
pub struct FourierBound {
    pub passed: bool,
    pub max_abs: f64,
    pub worst_alpha: u32,
    /// `Σ_{i≤d} C(m,i)`, the implied bound on `‖D‖_∞`.
    pub sup_bound: f64,
}

/// Checks `|E D χ_α| ≤ 1 + 1e-9` for every `|α| ≤ d` (uniform measure only).
pub fn fourier_coefficient_bound_check(d: &PseudoDensity, degree: usize) -> Result<FourierBound> {
    if !d.measure().is_uniform() {
        return Err(Error::InvalidInput("Fourier bound applies to the uniform measure".into()));
    }
    let c = d.function().fourier();
    let mut max_abs = 0.0;
    let mut worst_alpha = 0;
    for (a, &v) in c.iter().enumerate() {
        if popcount(a as u32) <= degree && v.abs() > max_abs {
            max_abs = v.abs();
            worst_alpha = a as u32;
        }
    }
    let sup_bound = (0..=degree.min(d.m())).map(|i| binomial(d.m(), i) as f64).sum();
    Ok(FourierBound { passed: max_abs <= 1.0 + 1e-9, max_abs, worst_alpha, sup_bound })
}
