//! Functions on the boolean cube `{0,1}^n`.
//!
//! A point `x` is stored as a bitmask with bit `i` holding coordinate
//! `x_{i+1}`, so tables are in x-lexicographic order with `x_1` least
//! significant. Subsets `α ⊆ [n]` use the same bitmask convention.
//!
//! The Fourier basis is `χ_α(x) = ∏_{i∈α} (−1)^{x_i}`, and `f = Σ_α f̂(α) χ_α`.
//! Monomials `x^A = ∏_{i∈A} x_i` give the second (0/1) basis.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::symmat::SymMatrix;

/// Largest supported number of variables for dense tables.
pub const MAX_N: usize = 24;

/// Coefficients at or below this magnitude do not count towards the degree.
pub const DEGREE_CUTOFF: f64 = 1e-12;

pub fn popcount(x: u32) -> usize {
    x.count_ones() as usize
}

/// Indices of the set bits of `mask` in ascending order.
pub fn bits(mask: u32) -> Vec<usize> {
    (0..32).filter(|&i| mask >> i & 1 == 1).collect()
}

/// Bitmask of a list of 0-based indices.
pub fn mask_of(indices: &[usize]) -> u32 {
    indices.iter().fold(0, |m, &i| m | 1 << i)
}

/// `C(n, k)` as an integer; saturates on overflow.
pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: u128 = 1;
    for i in 0..k {
        r = r * (n - i) as u128 / (i + 1) as u128;
        if r > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    r as u64
}

/// Generalized binomial `C(t, k)` for real `t`.
pub fn binomial_real(t: f64, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (t - i as f64) / (i + 1) as f64)
}

/// All `k`-subsets of `[n]` as bitmasks, in colexicographic order.
pub fn subsets_of_size(n: usize, k: usize) -> Vec<u32> {
    if k > n {
        return Vec::new();
    }
    if k == 0 {
        return vec![0];
    }
    let mut out = Vec::with_capacity(binomial(n, k) as usize);
    let mut s: u64 = (1u64 << k) - 1;
    let limit = 1u64 << n;
    while s < limit {
        out.push(s as u32);
        // Gosper's hack: next integer with the same popcount.
        let c = s & s.wrapping_neg();
        let r = s + c;
        s = (((r ^ s) >> 2) / c) | r;
    }
    out
}

/// All subsets of `[n]` of size at most `k`, ordered by size then colex.
pub fn subsets_up_to(n: usize, k: usize) -> Vec<u32> {
    (0..=k.min(n)).flat_map(|j| subsets_of_size(n, j)).collect()
}

/// Colex rank of a subset among subsets of the same size.
pub fn colex_rank(mask: u32) -> u64 {
    bits(mask).iter().enumerate().map(|(j, &s)| binomial(s, j + 1)).sum()
}

/// Inverse of [`colex_rank`] for `k`-subsets.
pub fn colex_unrank(mut rank: u64, k: usize) -> u32 {
    let mut mask = 0u32;
    for j in (1..=k).rev() {
        let mut s = j - 1;
        while binomial(s + 1, j) <= rank {
            s += 1;
        }
        rank -= binomial(s, j);
        mask |= 1 << s;
    }
    mask
}

/// Select the coordinates of `x` listed in `s` (sorted ascending, 0-based).
/// Bit `k` of the result is `x_{s[k]}`.
pub fn restrict_point(x: u32, n: usize, s: &[usize]) -> Result<u32> {
    let mut out = 0u32;
    let mut prev: Option<usize> = None;
    for (k, &i) in s.iter().enumerate() {
        if i >= n {
            return Err(Error::IndexOutOfRange { index: i, bound: n });
        }
        if prev.is_some_and(|p| p >= i) {
            return Err(Error::InvalidInput("index set must be strictly ascending".into()));
        }
        prev = Some(i);
        out |= (x >> i & 1) << k;
    }
    Ok(out)
}

/// Same as [`restrict_point`] for a subset given as a bitmask; no checks.
#[inline]
pub fn restrict_mask(x: u32, s: u32) -> u32 {
    let mut out = 0u32;
    let mut rest = s;
    let mut k = 0;
    while rest != 0 {
        let i = rest.trailing_zeros();
        out |= (x >> i & 1) << k;
        k += 1;
        rest &= rest - 1;
    }
    out
}

/// Scatter the bits of `y` onto the positions of `s` (inverse of [`restrict_mask`]).
#[inline]
pub fn deposit_mask(y: u32, s: u32) -> u32 {
    let mut out = 0u32;
    let mut rest = s;
    let mut k = 0;
    while rest != 0 {
        let i = rest.trailing_zeros();
        out |= (y >> k & 1) << i;
        k += 1;
        rest &= rest - 1;
    }
    out
}

/// `χ_α(x)`.
#[inline]
pub fn character(alpha: u32, x: u32) -> f64 {
    if (alpha & x).count_ones().is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// In-place unnormalized Walsh-Hadamard butterfly.
fn fwht(v: &mut [f64]) {
    let len = v.len();
    let mut h = 1;
    while h < len {
        for start in (0..len).step_by(2 * h) {
            for i in start..start + h {
                let a = v[i];
                let b = v[i + h];
                v[i] = a + b;
                v[i + h] = a - b;
            }
        }
        h *= 2;
    }
}

/// Fourier coefficients `f̂(α) = E_x f(x) χ_α(x)` of a dense table.
pub fn walsh_transform(values: &[f64]) -> Result<Vec<f64>> {
    let n = table_vars(values.len())?;
    let mut v = values.to_vec();
    fwht(&mut v);
    let scale = 1.0 / (1u64 << n) as f64;
    v.iter_mut().for_each(|c| *c *= scale);
    Ok(v)
}

/// Table of `Σ_α c(α) χ_α`.
pub fn inverse_walsh_transform(coeffs: &[f64]) -> Result<Vec<f64>> {
    table_vars(coeffs.len())?;
    let mut v = coeffs.to_vec();
    fwht(&mut v);
    Ok(v)
}

/// Coefficients `c_T` with `f = Σ_T c_T x^T`.
pub fn monomial_transform(values: &[f64]) -> Result<Vec<f64>> {
    table_vars(values.len())?;
    let mut v = values.to_vec();
    let len = v.len();
    let mut h = 1;
    while h < len {
        for i in 0..len {
            if i & h != 0 {
                v[i] -= v[i ^ h];
            }
        }
        h *= 2;
    }
    Ok(v)
}

/// Table of `Σ_T c_T x^T`.
pub fn inverse_monomial_transform(coeffs: &[f64]) -> Result<Vec<f64>> {
    table_vars(coeffs.len())?;
    let mut v = coeffs.to_vec();
    let len = v.len();
    let mut h = 1;
    while h < len {
        for i in 0..len {
            if i & h != 0 {
                v[i] += v[i ^ h];
            }
        }
        h *= 2;
    }
    Ok(v)
}

fn table_vars(len: usize) -> Result<usize> {
    if !len.is_power_of_two() {
        return Err(Error::ShapeMismatch(format!("table length {len} is not a power of two")));
    }
    let n = len.trailing_zeros() as usize;
    if n > MAX_N {
        return Err(Error::Capacity(format!("{n} variables exceeds the dense limit {MAX_N}")));
    }
    Ok(n)
}

fn degree_of(coeffs: &[f64]) -> usize {
    coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| c.abs() > DEGREE_CUTOFF)
        .map(|(a, _)| popcount(a as u32))
        .max()
        .unwrap_or(0)
}

/// Real-valued function on `{0,1}^n` stored as a dense table.
pub struct CubeFunction {
    n: usize,
    values: Vec<f64>,
    fourier: OnceLock<Vec<f64>>,
}

impl Clone for CubeFunction {
    fn clone(&self) -> Self {
        let fourier = OnceLock::new();
        if let Some(c) = self.fourier.get() {
            let _ = fourier.set(c.clone());
        }
        Self { n: self.n, values: self.values.clone(), fourier }
    }
}

impl PartialEq for CubeFunction {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.values == other.values
    }
}

impl std::fmt::Debug for CubeFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CubeFunction").field("n", &self.n).field("values", &self.values).finish()
    }
}

impl CubeFunction {
    pub fn new(n: usize, values: Vec<f64>) -> Result<Self> {
        if n > MAX_N {
            return Err(Error::Capacity(format!("{n} variables exceeds the dense limit {MAX_N}")));
        }
        if values.len() != 1 << n {
            return Err(Error::ShapeMismatch(format!(
                "expected {} values for n = {n}, got {}",
                1usize << n,
                values.len()
            )));
        }
        Ok(Self { n, values, fourier: OnceLock::new() })
    }

    pub fn from_fn(n: usize, f: impl Fn(u32) -> f64) -> Result<Self> {
        if n > MAX_N {
            return Err(Error::Capacity(format!("{n} variables exceeds the dense limit {MAX_N}")));
        }
        Self::new(n, (0..1u32 << n).map(f).collect())
    }

    pub fn constant(n: usize, c: f64) -> Result<Self> {
        Self::from_fn(n, |_| c)
    }

    /// `χ_α`.
    pub fn character(n: usize, alpha: u32) -> Result<Self> {
        Self::from_fn(n, |x| character(alpha, x))
    }

    /// `x^A = ∏_{i∈A} x_i`.
    pub fn monomial(n: usize, a: u32) -> Result<Self> {
        Self::from_fn(n, |x| if x & a == a { 1.0 } else { 0.0 })
    }

    pub fn from_fourier(n: usize, coeffs: &[f64]) -> Result<Self> {
        if coeffs.len() != 1 << n {
            return Err(Error::ShapeMismatch("coefficient table length".into()));
        }
        Self::new(n, inverse_walsh_transform(coeffs)?)
    }

    pub fn from_monomials(n: usize, coeffs: &[f64]) -> Result<Self> {
        if coeffs.len() != 1 << n {
            return Err(Error::ShapeMismatch("coefficient table length".into()));
        }
        Self::new(n, inverse_monomial_transform(coeffs)?)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    #[inline]
    pub fn eval(&self, x: u32) -> f64 {
        self.values[x as usize]
    }

    /// Cached Fourier coefficients indexed by `α`.
    pub fn fourier(&self) -> &[f64] {
        self.fourier.get_or_init(|| walsh_transform(&self.values).expect("validated table"))
    }

    /// Monomial coefficients indexed by `A`.
    pub fn monomial_coefficients(&self) -> Vec<f64> {
        monomial_transform(&self.values).expect("validated table")
    }

    pub fn degree(&self) -> usize {
        degree_of(self.fourier())
    }

    /// `E_x f(x)` under the uniform measure.
    pub fn mean(&self) -> f64 {
        pairwise_sum(&self.values) / self.values.len() as f64
    }

    /// `E_μ f`.
    pub fn mean_under(&self, mu: &ProductMeasure) -> Result<f64> {
        self.check_n(mu.n())?;
        let w = mu.weights();
        let terms: Vec<f64> = self.values.iter().zip(&w).map(|(v, p)| v * p).collect();
        Ok(pairwise_sum(&terms))
    }

    /// `E_x f(x) g(x)` under the uniform measure.
    pub fn inner(&self, other: &CubeFunction) -> Result<f64> {
        self.check_n(other.n)?;
        let terms: Vec<f64> = self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect();
        Ok(pairwise_sum(&terms) / terms.len() as f64)
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn map(&self, g: impl Fn(f64) -> f64) -> Self {
        Self { n: self.n, values: self.values.iter().map(|&v| g(v)).collect(), fourier: OnceLock::new() }
    }

    pub fn zip_with(&self, other: &CubeFunction, g: impl Fn(f64, f64) -> f64) -> Result<Self> {
        self.check_n(other.n)?;
        Ok(Self {
            n: self.n,
            values: self.values.iter().zip(&other.values).map(|(&a, &b)| g(a, b)).collect(),
            fourier: OnceLock::new(),
        })
    }

    pub fn scale(&self, s: f64) -> Self {
        self.map(|v| v * s)
    }

    pub fn add(&self, other: &CubeFunction) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &CubeFunction) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &CubeFunction) -> Result<Self> {
        self.zip_with(other, |a, b| a * b)
    }

    /// Keep the Fourier coefficients selected by `keep`.
    pub fn fourier_filter(&self, keep: impl Fn(u32) -> bool) -> Self {
        let c: Vec<f64> =
            self.fourier().iter().enumerate().map(|(a, &v)| if keep(a as u32) { v } else { 0.0 }).collect();
        Self::from_fourier(self.n, &c).expect("same shape")
    }

    fn check_n(&self, n: usize) -> Result<()> {
        if self.n != n {
            return Err(Error::ShapeMismatch(format!("functions on {} and {n} variables", self.n)));
        }
        Ok(())
    }
}

/// The function `x ↦ f(x_S)` on `{0,1}^n`.
pub fn lift_function(f: &CubeFunction, s: &[usize], n: usize) -> Result<CubeFunction> {
    if s.len() != f.n() {
        return Err(Error::ShapeMismatch(format!("|S| = {} but f has {} variables", s.len(), f.n())));
    }
    if s.len() > n {
        return Err(Error::ShapeMismatch(format!("|S| = {} exceeds n = {n}", s.len())));
    }
    restrict_point(0, n, s)?;
    let mask = mask_of(s);
    CubeFunction::from_fn(n, |x| f.eval(restrict_mask(x, mask)))
}

/// Product measure on `{0,1}^n` with `P[x_i = 1] = p_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductMeasure {
    p: Vec<f64>,
}

impl ProductMeasure {
    pub fn new(p: Vec<f64>) -> Result<Self> {
        if p.len() > MAX_N {
            return Err(Error::Capacity(format!("{} coordinates", p.len())));
        }
        if let Some(bad) = p.iter().find(|&&q| !(q > 0.0 && q < 1.0)) {
            return Err(Error::InvalidInput(format!("coordinate probability {bad} outside (0,1)")));
        }
        Ok(Self { p })
    }

    pub fn uniform(n: usize) -> Self {
        Self { p: vec![0.5; n] }
    }

    pub fn biased(n: usize, p: f64) -> Result<Self> {
        Self::new(vec![p; n])
    }

    pub fn n(&self) -> usize {
        self.p.len()
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.p
    }

    pub fn is_uniform(&self) -> bool {
        self.p.iter().all(|&q| q == 0.5)
    }

    pub fn weight(&self, x: u32) -> f64 {
        self.p.iter().enumerate().map(|(i, &q)| if x >> i & 1 == 1 { q } else { 1.0 - q }).product()
    }

    /// Table of point masses.
    pub fn weights(&self) -> Vec<f64> {
        let mut w = vec![1.0];
        for &q in &self.p {
            let mut next = Vec::with_capacity(w.len() * 2);
            next.extend(w.iter().map(|v| v * (1.0 - q)));
            next.extend(w.iter().map(|v| v * q));
            w = next;
        }
        w
    }

    /// Marginal on the coordinates of `s`.
    pub fn restrict(&self, s: &[usize]) -> Result<Self> {
        restrict_point(0, self.n(), s)?;
        Ok(Self { p: s.iter().map(|&i| self.p[i]).collect() })
    }
}

/// Pairwise (tree) summation; deterministic and accurate.
pub fn pairwise_sum(v: &[f64]) -> f64 {
    const LEAF: usize = 32;
    if v.len() <= LEAF {
        return v.iter().sum();
    }
    let mid = v.len() / 2;
    pairwise_sum(&v[..mid]) + pairwise_sum(&v[mid..])
}

/// Function on `{0,1}^n` whose values are `k x k` symmetric matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixValuedCubeFunction {
    n: usize,
    k: usize,
    values: Vec<SymMatrix>,
}

impl MatrixValuedCubeFunction {
    pub fn new(n: usize, values: Vec<SymMatrix>) -> Result<Self> {
        if n > MAX_N {
            return Err(Error::Capacity(format!("{n} variables")));
        }
        if values.len() != 1 << n {
            return Err(Error::ShapeMismatch(format!("expected {} matrices", 1usize << n)));
        }
        let k = values.first().map(SymMatrix::dim).unwrap_or(0);
        if values.iter().any(|m| m.dim() != k) {
            return Err(Error::ShapeMismatch("matrices of different dimensions".into()));
        }
        Ok(Self { n, k, values })
    }

    pub fn from_fn(n: usize, f: impl Fn(u32) -> SymMatrix) -> Result<Self> {
        Self::new(n, (0..1u32 << n).map(f).collect())
    }

    /// `Σ_α c_α χ_α` with matrix coefficients indexed by `α`.
    pub fn from_fourier(n: usize, k: usize, coeffs: &[SymMatrix]) -> Result<Self> {
        if coeffs.len() != 1 << n {
            return Err(Error::ShapeMismatch("coefficient count".into()));
        }
        let mut tables = vec![vec![0.0; 1 << n]; k * k];
        for (a, c) in coeffs.iter().enumerate() {
            for i in 0..k {
                for j in i..k {
                    tables[i * k + j][a] = c.get(i, j);
                }
            }
        }
        let tables: Vec<Vec<f64>> =
            tables.into_iter().map(|t| inverse_walsh_transform(&t)).collect::<Result<_>>()?;
        Self::from_fn(n, |x| SymMatrix::from_fn(k, |i, j| tables[i * k + j][x as usize]))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn at(&self, x: u32) -> &SymMatrix {
        &self.values[x as usize]
    }

    pub fn values(&self) -> &[SymMatrix] {
        &self.values
    }

    /// Entry `(i,j)` as a scalar function.
    pub fn entry_function(&self, i: usize, j: usize) -> CubeFunction {
        CubeFunction::new(self.n, self.values.iter().map(|m| m.get(i, j)).collect()).expect("shape")
    }

    /// Matrix Fourier coefficients `B̂_α`, indexed by `α`.
    pub fn fourier(&self) -> Vec<SymMatrix> {
        let k = self.k;
        let mut tables = Vec::with_capacity(k * (k + 1) / 2);
        for i in 0..k {
            for j in i..k {
                tables.push(self.entry_function(i, j).fourier().to_vec());
            }
        }
        (0..1usize << self.n)
            .map(|a| {
                SymMatrix::from_fn(k, |i, j| {
                    // Index of (i, j), i <= j, in the packed upper triangle.
                    let idx = i * k - i * (i + 1) / 2 + j;
                    tables[idx][a]
                })
            })
            .collect()
    }

    /// Maximum entrywise degree.
    pub fn degree(&self) -> usize {
        let mut d = 0;
        for i in 0..self.k {
            for j in i..self.k {
                d = d.max(self.entry_function(i, j).degree());
            }
        }
        d
    }

    /// `E_x ‖B(x)‖_F²`.
    pub fn mean_frobenius_sq(&self) -> f64 {
        let t: Vec<f64> = self.values.iter().map(|m| m.frobenius().powi(2)).collect();
        pairwise_sum(&t) / t.len() as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn walsh_constant_and_character() {
        let c = CubeFunction::constant(3, 1.0).unwrap();
        let f = c.fourier();
        assert_eq!(f[0], 1.0);
        assert!(f[1..].iter().all(|&v| v == 0.0));
        let chi = CubeFunction::character(3, 0b011).unwrap();
        for (a, &v) in chi.fourier().iter().enumerate() {
            assert_eq!(v, if a == 0b011 { 1.0 } else { 0.0 });
        }
    }

    #[test]
    fn walsh_dictator_one_variable() {
        let f = CubeFunction::new(1, vec![0.0, 1.0]).unwrap();
        assert_eq!(f.fourier(), &[0.5, -0.5]);
    }

    #[test]
    fn degree_examples() {
        assert_eq!(CubeFunction::constant(4, 2.5).unwrap().degree(), 0);
        let q = CubeFunction::from_fn(3, |x| (popcount(x) as f64 - 1.5).powi(2) - 0.25).unwrap();
        assert_eq!(q.degree(), 2);
        let parity = CubeFunction::from_fn(5, |x| (popcount(x) % 2) as f64).unwrap();
        assert_eq!(parity.degree(), 5);
    }

    #[test]
    fn restrict_point_examples() {
        // x = 10110 means x1=1, x2=0, x3=1, x4=1, x5=0.
        let x = 0b01101;
        assert_eq!(restrict_point(x, 5, &[0, 2, 3]).unwrap(), 0b111);
        assert_eq!(restrict_point(x, 5, &[0, 1, 2, 3, 4]).unwrap(), x);
        assert_eq!(restrict_point(x, 5, &[]).unwrap(), 0);
        assert!(matches!(restrict_point(x, 5, &[5]), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn lift_examples() {
        let f = CubeFunction::new(1, vec![0.0, 1.0]).unwrap();
        let l = lift_function(&f, &[2], 3).unwrap();
        assert_eq!(l, CubeFunction::from_fn(3, |x| (x >> 2 & 1) as f64).unwrap());
        let g = CubeFunction::from_fn(3, |x| x as f64 * 0.3 - 1.0).unwrap();
        assert_eq!(lift_function(&g, &[0, 1, 2], 3).unwrap(), g);
        assert!(lift_function(&g, &[0, 1], 3).is_err());
    }

    #[test]
    fn lift_knapsack_matches_restriction() {
        let k = CubeFunction::from_fn(3, |x| ((popcount(x) as f64 - 1.5).powi(2) - 0.25) / 9.0).unwrap();
        let s = [1, 3, 5];
        let l = lift_function(&k, &s, 6).unwrap();
        for x in 0..64 {
            assert_eq!(l.eval(x), k.eval(restrict_point(x, 6, &s).unwrap()));
        }
        assert_eq!(l.degree(), 2);
    }

    #[test]
    fn monomial_transform_roundtrip() {
        // f = 1 - x1 + 2 x1 x2 on n = 2.
        let f = CubeFunction::from_fn(2, |x| {
            let (a, b) = ((x & 1) as f64, (x >> 1 & 1) as f64);
            1.0 - a + 2.0 * a * b
        })
        .unwrap();
        assert_eq!(f.monomial_coefficients(), vec![1.0, -1.0, 0.0, 2.0]);
        assert_eq!(CubeFunction::from_monomials(2, &[1.0, -1.0, 0.0, 2.0]).unwrap(), f);
    }

    #[test]
    fn colex_order_and_ranks() {
        let s = subsets_of_size(4, 2);
        assert_eq!(s, vec![0b0011, 0b0101, 0b0110, 0b1001, 0b1010, 0b1100]);
        for (r, &m) in s.iter().enumerate() {
            assert_eq!(colex_rank(m), r as u64);
            assert_eq!(colex_unrank(r as u64, 2), m);
        }
        assert_eq!(subsets_of_size(5, 0), vec![0]);
        assert_eq!(subsets_up_to(3, 1), vec![0, 1, 2, 4]);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(8, 2), 28);
        assert_eq!(binomial(3, 5), 0);
        assert_abs_diff_eq!(binomial_real(1.5, 2), 0.375);
        assert_abs_diff_eq!(binomial_real(1.5, 3), -0.0625);
    }

    #[test]
    fn product_measure_mass() {
        let mu = ProductMeasure::new(vec![0.2, 0.7, 0.5]).unwrap();
        let total: f64 = mu.weights().iter().sum();
        assert_abs_diff_eq!(total, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(mu.weight(0b011), 0.2 * 0.7 * 0.5, epsilon = 1e-15);
        assert!(ProductMeasure::new(vec![0.0]).is_err());
    }

    #[test]
    fn capacity_error() {
        assert!(matches!(CubeFunction::constant(25, 0.0), Err(Error::Capacity(_))));
    }

    #[test]
    fn matrix_fourier_roundtrip() {
        let b = MatrixValuedCubeFunction::from_fn(3, |x| {
            SymMatrix::from_fn(2, |i, j| (x as f64 + 1.0) * (i + 2 * j) as f64 - 0.5)
        })
        .unwrap();
        let c = b.fourier();
        let back = MatrixValuedCubeFunction::from_fourier(3, 2, &c).unwrap();
        for x in 0..8 {
            for i in 0..2 {
                for j in 0..2 {
                    assert_abs_diff_eq!(back.at(x).get(i, j), b.at(x).get(i, j), epsilon = 1e-12);
                }
            }
        }
    }
}
