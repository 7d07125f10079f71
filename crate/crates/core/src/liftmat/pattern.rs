use rayon::prelude::*;

use crate::cube::{binomial, colex_unrank, pairwise_sum, restrict_mask, CubeFunction};
use crate::error::{Error, Result};
use crate::pseudo::PseudoDensity;
use crate::rng::SplitMix64;

/// Largest `n` for pattern matrices.
pub const MAX_PATTERN_N: usize = 20;
/// Dense materialization limit on `rows · cols`.
pub const DENSE_LIMIT: usize = 1 << 26;
/// Row count up to which `L_D` enumerates every subset.
pub const EXACT_ROW_LIMIT: u64 = 100_000;
/// Cell budget (`rows · 2^n`) for exact `L_D` evaluation.
const EXACT_CELL_LIMIT: u64 = 1 << 30;

/// Read-only matrix with entry access; shared by dense matrices, pattern
/// matrices and factorization products.
pub trait EntryMatrix: Sync {
    fn shape(&self) -> (usize, usize);
    fn entry(&self, i: usize, j: usize) -> f64;

    fn max_abs(&self) -> f64 {
        let (p, q) = self.shape();
        (0..p)
            .into_par_iter()
            .map(|i| (0..q).map(|j| self.entry(i, j).abs()).fold(0.0, f64::max))
            .reduce(|| 0.0, f64::max)
    }

    fn to_dense(&self) -> Result<DenseMatrix> {
        let (p, q) = self.shape();
        if p.saturating_mul(q) > DENSE_LIMIT {
            return Err(Error::Capacity(format!("{p}x{q} exceeds the dense limit")));
        }
        let data = (0..p).into_par_iter().flat_map_iter(|i| (0..q).map(move |j| (i, j))).map(|(i, j)| self.entry(i, j)).collect();
        Ok(DenseMatrix { rows: p, cols: q, data })
    }
}

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

impl DenseMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!("{} values for a {rows}x{cols} matrix", data.len())));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let data = (0..rows).flat_map(|i| (0..cols).map(move |j| (i, j))).map(|(i, j)| f(i, j)).collect();
        Self { rows, cols, data }
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }
}

impl EntryMatrix for DenseMatrix {
    fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    fn entry(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }
}

/// Matrix given by a closure.
pub struct FnMatrix<F> {
    pub rows: usize,
    pub cols: usize,
    pub f: F,
}

impl<F: Fn(usize, usize) -> f64 + Sync> EntryMatrix for FnMatrix<F> {
    fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    fn entry(&self, i: usize, j: usize) -> f64 {
        (self.f)(i, j)
    }
}

/// `M_n^f(S, x) = f(x_S)`; rows are the `m`-subsets of `[n]` in colex order,
/// columns the points of `{0,1}^n`. Entries are evaluated on demand.
#[derive(Debug, Clone, PartialEq)]
pub struct PatternMatrix {
    f: CubeFunction,
    n: usize,
    rows: Vec<u32>,
}

impl PatternMatrix {
    pub fn new(f: CubeFunction, n: usize) -> Result<Self> {
        let m = f.n();
        if n > MAX_PATTERN_N {
            return Err(Error::Capacity(format!("n = {n} exceeds {MAX_PATTERN_N}")));
        }
        if m > n {
            return Err(Error::InvalidInput(format!("arity {m} exceeds n = {n}")));
        }
        let count = binomial(n, m);
        if count > 1 << 24 {
            return Err(Error::Capacity(format!("{count} rows")));
        }
        let rows = (0..count).map(|r| colex_unrank(r, m)).collect();
        Ok(Self { f, n, rows })
    }

    pub fn function(&self) -> &CubeFunction {
        &self.f
    }

    pub fn m(&self) -> usize {
        self.f.n()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Row subsets as bitmasks, in row order.
    pub fn row_sets(&self) -> &[u32] {
        &self.rows
    }

    /// `‖M‖_1`: the uniform average entry, equal to `E f`.
    pub fn l1_norm(&self) -> f64 {
        self.f.mean()
    }
}

impl EntryMatrix for PatternMatrix {
    fn shape(&self) -> (usize, usize) {
        (self.rows.len(), 1 << self.n)
    }

    fn entry(&self, i: usize, x: usize) -> f64 {
        self.f.eval(restrict_mask(x as u32, self.rows[i]))
    }

    /// Every row takes every value of `f`, so `‖M‖_∞ = ‖f‖_∞`.
    fn max_abs(&self) -> f64 {
        self.f.sup_norm()
    }
}

pub fn build_pattern_matrix(f: &CubeFunction, n: usize) -> Result<PatternMatrix> {
    PatternMatrix::new(f.clone(), n)
}

/// Estimate of `L_D(N)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LdEstimate {
    pub value: f64,
    /// Standard error over sampled rows; `None` for exact evaluation.
    pub stderr: Option<f64>,
    pub rows_used: usize,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct LdOptions {
    /// Force sampling of this many rows.
    pub sample_rows: Option<usize>,
    pub seed: u64,
}

/// `L_D(N) = E_{|S|=m} E_x D(x_S) N(S, x)` over colex-ordered rows and
/// x-lexicographic columns. Exact when `C(n,m) ≤ 10^5`; otherwise rows are
/// sampled uniformly with replacement.
pub fn ld_functional(d: &PseudoDensity, m_rows: &dyn EntryMatrix, n: usize, opts: LdOptions) -> Result<LdEstimate> {
    let m = d.m();
    let count = binomial(n, m);
    let (p, q) = m_rows.shape();
    if p as u64 != count || q != 1usize << n {
        return Err(Error::ShapeMismatch(format!(
            "matrix is {p}x{q}, expected {count}x{} for n = {n}, m = {m}",
            1u64 << n
        )));
    }
    let dv = d.function();
    let row_mean = |r: usize| -> f64 {
        let s = colex_unrank(r as u64, m);
        let vals: Vec<f64> = (0..q).map(|x| dv.eval(restrict_mask(x as u32, s)) * m_rows.entry(r, x)).collect();
        pairwise_sum(&vals) / q as f64
    };
    let exact = opts.sample_rows.is_none() && count <= EXACT_ROW_LIMIT && count * q as u64 <= EXACT_CELL_LIMIT;
    if exact {
        let means: Vec<f64> = (0..p).into_par_iter().map(row_mean).collect();
        return Ok(LdEstimate { value: pairwise_sum(&means) / p as f64, stderr: None, rows_used: p });
    }
    let k = opts.sample_rows.unwrap_or(1000).max(2);
    let mut rng = SplitMix64::new(opts.seed);
    let picks: Vec<usize> = (0..k).map(|_| rng.below(count) as usize).collect();
    let means: Vec<f64> = picks.par_iter().map(|&r| row_mean(r)).collect();
    let mean = pairwise_sum(&means) / k as f64;
    let var = means.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (k - 1) as f64;
    Ok(LdEstimate { value: mean, stderr: Some((var / k as f64).sqrt()), rows_used: k })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pseudo::{grigoriev_knapsack, knapsack_function};
    use approx::assert_abs_diff_eq;

    #[test]
    fn constant_gives_all_ones() {
        let m = build_pattern_matrix(&CubeFunction::constant(2, 1.0).unwrap(), 4).unwrap();
        let d = m.to_dense().unwrap();
        assert_eq!(d.rows, 6);
        assert!(d.data.iter().all(|&v| v == 1.0));
    }

    #[test]
    fn full_arity_is_single_row() {
        let f = CubeFunction::new(2, vec![0.1, 0.2, 0.3, 0.4]).unwrap();
        let m = build_pattern_matrix(&f, 2).unwrap();
        assert_eq!(m.to_dense().unwrap().data, f.values());
    }

    #[test]
    fn knapsack_entry() {
        let m = build_pattern_matrix(&knapsack_function(3).unwrap(), 6).unwrap();
        // Row {1,2,3} is colex rank 0; x = 111000 has x_1 = x_2 = x_3 = 1.
        assert_eq!(m.row_sets()[0], 0b111);
        assert_abs_diff_eq!(m.entry(0, 0b000111), 2.0 / 9.0, epsilon = 1e-15);
    }

    #[test]
    fn norms_match_function() {
        let f = knapsack_function(3).unwrap();
        let m = build_pattern_matrix(&f, 5).unwrap();
        let d = m.to_dense().unwrap();
        let avg = d.data.iter().sum::<f64>() / d.data.len() as f64;
        assert_abs_diff_eq!(avg, f.mean(), epsilon = 1e-14);
        assert_eq!(d.data.iter().cloned().fold(0.0, f64::max), f.sup_norm());
    }

    #[test]
    fn ld_examples() {
        let d = grigoriev_knapsack(3).unwrap();
        let f = knapsack_function(3).unwrap();
        for n in [3, 5, 7] {
            let m = build_pattern_matrix(&f, n).unwrap();
            let v = ld_functional(&d, &m, n, LdOptions::default()).unwrap();
            assert_abs_diff_eq!(v.value, -1.0 / 36.0, epsilon = 1e-12);
        }
        let ones = build_pattern_matrix(&CubeFunction::constant(3, 1.0).unwrap(), 5).unwrap();
        assert_abs_diff_eq!(ld_functional(&d, &ones, 5, LdOptions::default()).unwrap().value, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn ld_sampling_reports_error() {
        let d = grigoriev_knapsack(3).unwrap();
        let f = knapsack_function(3).unwrap();
        let m = build_pattern_matrix(&f, 6).unwrap();
        let v = ld_functional(&d, &m, 6, LdOptions { sample_rows: Some(8), seed: 1 }).unwrap();
        // Rows of a pattern matrix are identically distributed: no variance.
        assert_abs_diff_eq!(v.value, -1.0 / 36.0, epsilon = 1e-12);
        assert!(v.stderr.unwrap() < 1e-12);
    }

    #[test]
    fn ld_shape_mismatch() {
        let d = grigoriev_knapsack(3).unwrap();
        let m = DenseMatrix::from_fn(3, 8, |_, _| 1.0);
        assert!(ld_functional(&d, &m, 3, LdOptions::default()).is_err());
    }
}
