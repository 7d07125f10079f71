use rayon::prelude::*;

use super::pattern::{EntryMatrix, PatternMatrix};
use crate::cube::{binomial, colex_unrank, deposit_mask, pairwise_sum, popcount, restrict_mask, CubeFunction, MatrixValuedCubeFunction};
use crate::error::{Error, Result};
use crate::pseudo::PseudoDensity;
use crate::rng::SplitMix64;
use crate::symmat::SymMatrix;

/// Pattern matrix of a nonnegative quadratic `f(x) = a_0 + Σ_{i≤j} A_ij x_i x_j`
/// together with its coefficients. Each row is the inequality
/// `⟨A_S, x xᵀ⟩ + a_0 ≥ 0` of the correlation polytope, with `A` placed on
/// the coordinates of `S`, evaluated at the vertex `x xᵀ`.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrSlackMatrix {
    pub pattern: PatternMatrix,
    pub a0: f64,
    /// Upper-triangular `m x m` coefficients, row-major: `A_ii` multiplies
    /// `x_i`, `A_ij` (`i < j`) multiplies `x_i x_j`.
    pub coeffs: Vec<f64>,
}

/// Row `S` of the slack matrix as an inequality on `[n]`.
#[derive(Debug, Clone, PartialEq)]
pub struct LiftedInequality {
    pub a0: f64,
    /// `(i, j, A_ij)` with `i ≤ j` in `[n]`.
    pub entries: Vec<(usize, usize, f64)>,
}

impl LiftedInequality {
    pub fn eval(&self, x: u32) -> f64 {
        self.a0 + self.entries.iter().map(|&(i, j, a)| a * ((x >> i) & (x >> j) & 1) as f64).sum::<f64>()
    }
}

pub fn corr_slack_submatrix(f: &CubeFunction, n: usize) -> Result<CorrSlackMatrix> {
    let m = f.n();
    let mono = f.monomial_coefficients();
    let scale = f.sup_norm().max(1.0);
    if mono.iter().enumerate().any(|(t, c)| popcount(t as u32) > 2 && c.abs() > 1e-12 * scale) {
        return Err(Error::Domain("f has degree above 2".into()));
    }
    if f.min() < -1e-10 {
        return Err(Error::Domain(format!("f is negative (min {:e})", f.min())));
    }
    let mut coeffs = vec![0.0; m * m];
    for i in 0..m {
        coeffs[i * m + i] = mono[1 << i];
        for j in (i + 1)..m {
            coeffs[i * m + j] = mono[(1 << i) | (1 << j)];
        }
    }
    Ok(CorrSlackMatrix { pattern: PatternMatrix::new(f.clone(), n)?, a0: mono[0], coeffs })
}

impl CorrSlackMatrix {
    pub fn lifted_row(&self, row: usize) -> LiftedInequality {
        let m = self.pattern.m();
        let s = self.pattern.row_sets()[row];
        let pos: Vec<usize> = (0..m).map(|k| deposit_mask(1 << k, s).trailing_zeros() as usize).collect();
        let mut entries = Vec::new();
        for i in 0..m {
            for j in i..m {
                let a = self.coeffs[i * m + j];
                if a != 0.0 {
                    entries.push((pos[i], pos[j], a));
                }
            }
        }
        LiftedInequality { a0: self.a0, entries }
    }
}

/// `B = B_low + B_high` with `B_low = Σ_{|α∩S| ≤ d/2} B̂_α χ_α`.
pub fn split_low_high(
    b: &MatrixValuedCubeFunction,
    s: u32,
    d: usize,
) -> Result<(MatrixValuedCubeFunction, MatrixValuedCubeFunction)> {
    let coeffs = b.fourier();
    let k = b.k();
    let zero = SymMatrix::zeros(k);
    let (lo, hi): (Vec<_>, Vec<_>) = coeffs
        .into_iter()
        .enumerate()
        .map(|(a, c)| if popcount(a as u32 & s) <= d / 2 { (c, zero.clone()) } else { (zero.clone(), c) })
        .unzip();
    Ok((MatrixValuedCubeFunction::from_fourier(b.n(), k, &lo)?, MatrixValuedCubeFunction::from_fourier(b.n(), k, &hi)?))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HighMass {
    /// `E_{S,x} ‖B_{S,high}‖_F² / E_x ‖B‖_F²` over all `m`-subsets `S`.
    pub ratio: f64,
    /// `(ℓ m / (n − m))^{d/2}`.
    pub bound: f64,
    pub ell: usize,
    pub holds: bool,
}

/// Measures the high-degree mass of `B` over an exhaustive average of `S`.
pub fn high_mass_experiment(b: &MatrixValuedCubeFunction, m: usize, d: usize) -> Result<HighMass> {
    let n = b.n();
    if m >= n {
        return Err(Error::InvalidInput(format!("need m < n, got m = {m}, n = {n}")));
    }
    let count = binomial(n, m);
    if count > 100_000 {
        return Err(Error::Capacity(format!("{count} subsets")));
    }
    let w: Vec<f64> = b.fourier().iter().map(|c| c.frobenius().powi(2)).collect();
    let total = pairwise_sum(&w);
    let ell = b.degree();
    let per_s: Vec<f64> = (0..count)
        .into_par_iter()
        .map(|r| {
            let s = colex_unrank(r, m);
            let v: Vec<f64> =
                w.iter().enumerate().map(|(a, &x)| if popcount(a as u32 & s) > d / 2 { x } else { 0.0 }).collect();
            pairwise_sum(&v)
        })
        .collect();
    let high = pairwise_sum(&per_s) / count as f64;
    let ratio = if total > 0.0 { high / total } else { 0.0 };
    let bound = (ell as f64 * m as f64 / (n - m) as f64).powf(d as f64 / 2.0);
    Ok(HighMass { ratio, bound, ell, holds: ratio <= bound + 1e-9 })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationBound {
    /// `E_{S,x} D(x_S) ‖A(S) B(x)‖_F²`.
    pub lhs: f64,
    /// `−2 √τ ‖D‖_∞ (E ‖B_high‖_F²)^{1/2} (E ‖AB‖_F²)^{1/2}`.
    pub lemma_rhs: f64,
    /// `−2 ‖D‖_∞ (ℓm/(n−m))^{d/4} √τ (E ‖AB‖_F²)^{1/2} (E ‖B‖_F²)^{1/2}`.
    pub theorem_rhs: f64,
    /// `max_S ‖A(S)²‖`.
    pub tau: f64,
    pub ell: usize,
    pub holds_lemma: bool,
    pub holds_theorem: bool,
}

/// Both sides of the correlation lower bound for `A` indexed by colex rows
/// and `B` on `{0,1}^n`, with a degree-`d` pseudo-density `D` on `{0,1}^m`.
pub fn correlation_lower_bound_experiment(
    a: &[SymMatrix],
    b: &MatrixValuedCubeFunction,
    dens: &PseudoDensity,
    d: usize,
) -> Result<CorrelationBound> {
    let n = b.n();
    let m = dens.m();
    if !dens.measure().is_uniform() {
        return Err(Error::InvalidInput("the pseudo-density must be over the uniform measure".into()));
    }
    if m >= n {
        return Err(Error::InvalidInput(format!("need m < n, got m = {m}, n = {n}")));
    }
    let count = binomial(n, m) as usize;
    if a.len() != count || a.iter().any(|x| x.dim() != b.k()) {
        return Err(Error::ShapeMismatch(format!("expected {count} row matrices of dimension {}", b.k())));
    }
    let a2: Vec<SymMatrix> = a.iter().map(|x| x.square()).collect();
    let b2: Vec<SymMatrix> = b.values().iter().map(|x| x.square()).collect();
    let dv = dens.function();
    let rows: Vec<(f64, f64)> = (0..count)
        .into_par_iter()
        .map(|r| {
            let s = colex_unrank(r as u64, m);
            let (mut dw, mut plain): (Vec<f64>, Vec<f64>) = (Vec::new(), Vec::new());
            for x in 0..1u32 << n {
                let v = a2[r].dot(&b2[x as usize]);
                dw.push(dv.eval(restrict_mask(x, s)) * v);
                plain.push(v);
            }
            (pairwise_sum(&dw), pairwise_sum(&plain))
        })
        .collect();
    let cells = (count << n) as f64;
    let lhs = pairwise_sum(&rows.iter().map(|r| r.0).collect::<Vec<_>>()) / cells;
    let ab = pairwise_sum(&rows.iter().map(|r| r.1).collect::<Vec<_>>()) / cells;
    let tau = a2.iter().map(|x| x.operator_norm()).try_fold(0.0f64, |acc, v| v.map(|v| acc.max(v)))?;
    let hm = high_mass_experiment(b, m, d)?;
    let b_mass = b.mean_frobenius_sq();
    let dinf = dens.sup_norm();
    let lemma_rhs = -2.0 * tau.sqrt() * dinf * (hm.ratio * b_mass).sqrt() * ab.sqrt();
    let factor = (hm.ell as f64 * m as f64 / (n - m) as f64).powf(d as f64 / 4.0);
    let theorem_rhs = -2.0 * dinf * factor * tau.sqrt() * ab.sqrt() * b_mass.sqrt();
    Ok(CorrelationBound {
        lhs,
        lemma_rhs,
        theorem_rhs,
        tau,
        ell: hm.ell,
        holds_lemma: lhs >= lemma_rhs - 1e-9,
        holds_theorem: lhs >= theorem_rhs - 1e-9,
    })
}

/// `N(S, x) = Tr(A_S² B_x²)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LowDegreeSquareMatrix {
    pub a2: Vec<SymMatrix>,
    pub b2: Vec<SymMatrix>,
}

impl EntryMatrix for LowDegreeSquareMatrix {
    fn shape(&self) -> (usize, usize) {
        (self.a2.len(), self.b2.len())
    }

    fn entry(&self, i: usize, j: usize) -> f64 {
        self.a2[i].dot(&self.b2[j])
    }
}

/// Random symmetric `k x k` matrix with standard normal entries.
pub fn random_symmetric(k: usize, rng: &mut SplitMix64) -> SymMatrix {
    SymMatrix::from_fn(k, |_, _| rng.normal())
}

/// Random `B` on `{0,1}^n` with symmetric `k x k` Fourier coefficients on
/// every `|α| ≤ degree`.
pub fn random_low_degree_matrix_function(
    n: usize,
    k: usize,
    degree: usize,
    rng: &mut SplitMix64,
) -> Result<MatrixValuedCubeFunction> {
    let coeffs: Vec<SymMatrix> = (0..1u32 << n)
        .map(|a| if popcount(a) <= degree { random_symmetric(k, rng) } else { SymMatrix::zeros(k) })
        .collect();
    MatrixValuedCubeFunction::from_fourier(n, k, &coeffs)
}

/// Random `N(S,x) = Tr(A_S² B_x²)` with `deg B ≤ degree`, rows the colex
/// `m`-subsets of `[n]`.
pub fn random_low_degree_square_matrix(
    n: usize,
    m: usize,
    k: usize,
    degree: usize,
    rng: &mut SplitMix64,
) -> Result<LowDegreeSquareMatrix> {
    let rows = binomial(n, m) as usize;
    let a2 = (0..rows).map(|_| random_symmetric(k, rng).square()).collect();
    let b = random_low_degree_matrix_function(n, k, degree, rng)?;
    let b2 = b.values().iter().map(|x| x.square()).collect();
    Ok(LowDegreeSquareMatrix { a2, b2 })
}

impl SymMatrix {
    /// `A²`.
    pub fn square(&self) -> SymMatrix {
        let n = self.dim();
        SymMatrix::from_fn(n, |i, j| self.row(i).iter().zip(self.row(j)).map(|(a, b)| a * b).sum())
    }
}
