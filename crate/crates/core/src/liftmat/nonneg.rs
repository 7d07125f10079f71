use std::collections::HashMap;

use rayon::prelude::*;

use super::pattern::{DenseMatrix, EntryMatrix, PatternMatrix};
use crate::cube::{binomial, deposit_mask, popcount, subsets_up_to, CubeFunction};
use crate::error::{Error, Result};
use crate::sdp::cholesky_solve;

/// Subcube indicator `1[x_T = b]` with a nonnegative weight. `values` holds
/// `b` on the bit positions of `coords`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JuntaTerm {
    pub coords: u32,
    pub values: u32,
    pub weight: f64,
}

impl JuntaTerm {
    #[inline]
    pub fn indicator(&self, x: u32) -> f64 {
        if x & self.coords == self.values {
            1.0
        } else {
            0.0
        }
    }
}

/// `f = Σ_i w_i 1[x_{T_i} = b_i]` with `w_i ≥ 0`: a certificate that `f` is
/// a sum of nonnegative `max |T_i|`-juntas.
#[derive(Debug, Clone, PartialEq)]
pub struct JuntaCertificate {
    pub m: usize,
    pub terms: Vec<JuntaTerm>,
}

impl JuntaCertificate {
    pub fn new(m: usize, terms: Vec<JuntaTerm>) -> Result<Self> {
        for t in &terms {
            if t.values & !t.coords != 0 || t.coords >> m != 0 {
                return Err(Error::InvalidCertificate(format!("term {t:?} outside [{m}]")));
            }
            if !(t.weight >= 0.0) {
                return Err(Error::InvalidCertificate(format!("negative weight {}", t.weight)));
            }
        }
        Ok(Self { m, terms })
    }

    pub fn degree(&self) -> usize {
        self.terms.iter().map(|t| popcount(t.coords)).max().unwrap_or(0)
    }

    pub fn to_function(&self) -> Result<CubeFunction> {
        CubeFunction::from_fn(self.m, |x| self.terms.iter().map(|t| t.weight * t.indicator(x)).sum())
    }

    /// Max pointwise deviation from `f`.
    pub fn residual(&self, f: &CubeFunction) -> Result<f64> {
        if f.n() != self.m {
            return Err(Error::ShapeMismatch("certificate arity".into()));
        }
        let g = self.to_function()?;
        Ok(f.values().iter().zip(g.values()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
    }
}

/// `M(i, x) = Σ_k left(i, k) q_k(x)` with nonnegative factors.
#[derive(Debug, Clone, PartialEq)]
pub struct NonnegFactorization {
    pub r: usize,
    /// `rows x r`.
    pub left: DenseMatrix,
    pub right: Vec<CubeFunction>,
}

impl EntryMatrix for NonnegFactorization {
    fn shape(&self) -> (usize, usize) {
        (self.left.rows, self.right.first().map(|q| q.values().len()).unwrap_or(0))
    }

    fn entry(&self, i: usize, x: usize) -> f64 {
        self.left.row(i).iter().zip(&self.right).map(|(l, q)| l * q.values()[x]).sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct JuntaFactorization {
    pub factorization: NonnegFactorization,
    /// Lifted generators `(T, b)` on `[n]`, one per rank index.
    pub generators: Vec<(u32, u32)>,
    /// `Σ_{i≤d} C(n,i) 2^i`, the number of subcubes of codimension at most `d`.
    pub subcube_bound: u64,
    /// `1 + n^{d+1}`.
    pub rank_bound: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NonnegReport {
    pub passed: bool,
    pub max_residual: f64,
    pub min_entry: f64,
}

pub fn verify_nonneg_factorization(m: &dyn EntryMatrix, nf: &NonnegFactorization, tol: f64) -> NonnegReport {
    let (p, q) = m.shape();
    if nf.shape() != (p, q) || nf.left.cols != nf.r || nf.right.len() != nf.r {
        return NonnegReport { passed: false, max_residual: f64::INFINITY, min_entry: f64::NAN };
    }
    let max_residual = (0..p)
        .into_par_iter()
        .map(|i| (0..q).map(|x| (m.entry(i, x) - nf.entry(i, x)).abs()).fold(0.0, f64::max))
        .reduce(|| 0.0, f64::max);
    let min_entry = nf
        .left
        .data
        .iter()
        .chain(nf.right.iter().flat_map(|q| q.values()))
        .cloned()
        .fold(f64::INFINITY, f64::min);
    NonnegReport { passed: max_residual <= tol && min_entry >= -1e-10, max_residual, min_entry }
}

/// Factorization of `M_n^f` from a junta certificate: every term lifts to a
/// subcube indicator on `[n]` through the coordinates of `S`; the left
/// weight of row `S` on a lifted generator sums the certificate weights that
/// land on it.
pub fn junta_factorization(f: &CubeFunction, cert: &JuntaCertificate, n: usize) -> Result<JuntaFactorization> {
    let resid = cert.residual(f)?;
    if resid > 1e-9 * f.sup_norm().max(1.0) {
        return Err(Error::InvalidCertificate(format!("certificate misses f by {resid:e}")));
    }
    let pattern = PatternMatrix::new(f.clone(), n)?;
    let mut index: HashMap<(u32, u32), usize> = HashMap::new();
    let mut generators = Vec::new();
    let mut entries: Vec<Vec<(usize, f64)>> = Vec::with_capacity(pattern.row_sets().len());
    for &s in pattern.row_sets() {
        let mut row = Vec::new();
        for t in &cert.terms {
            if t.weight == 0.0 {
                continue;
            }
            let key = (deposit_mask(t.coords, s), deposit_mask(t.values, s));
            let k = *index.entry(key).or_insert_with(|| {
                generators.push(key);
                generators.len() - 1
            });
            row.push((k, t.weight));
        }
        entries.push(row);
    }
    let r = generators.len();
    if r.saturating_mul(1 << n) > super::pattern::DENSE_LIMIT {
        return Err(Error::Capacity(format!("{r} generators on n = {n}")));
    }
    let mut left = DenseMatrix::new(entries.len(), r, vec![0.0; entries.len() * r])?;
    for (i, row) in entries.iter().enumerate() {
        for &(k, w) in row {
            left.data[i * r + k] += w;
        }
    }
    let right = generators
        .iter()
        .map(|&(c, v)| CubeFunction::from_fn(n, |x| if x & c == v { 1.0 } else { 0.0 }))
        .collect::<Result<Vec<_>>>()?;
    let d = cert.degree();
    let subcube_bound = (0..=d.min(n)).map(|i| binomial(n, i) << i).sum();
    Ok(JuntaFactorization {
        factorization: NonnegFactorization { r, left, right },
        generators,
        subcube_bound,
        rank_bound: 1.0 + (n as f64).powi(d as i32 + 1),
    })
}

/// Searches for a junta certificate of degree `d` by nonnegative least
/// squares over every subcube indicator of codimension at most `d`.
/// Returns `None` when the best fit misses `f` by more than `1e-9·max(1,‖f‖_∞)`.
pub fn find_junta_certificate(f: &CubeFunction, d: usize) -> Result<Option<JuntaCertificate>> {
    let m = f.n();
    if m > 10 {
        return Err(Error::Capacity(format!("{m} variables exceeds 10")));
    }
    let mut gens = Vec::new();
    for t in subsets_up_to(m, d.min(m)) {
        let mut b = t;
        // Enumerate every sub-mask of t.
        loop {
            gens.push((t, b));
            if b == 0 {
                break;
            }
            b = (b - 1) & t;
        }
    }
    let npts = 1usize << m;
    let cols: Vec<Vec<f64>> = gens
        .iter()
        .map(|&(t, b)| (0..npts as u32).map(|x| if x & t == b { 1.0 } else { 0.0 }).collect())
        .collect();
    let w = nnls(&cols, f.values(), 10 * cols.len() + 10);
    let terms: Vec<JuntaTerm> = gens
        .iter()
        .zip(&w)
        .filter(|(_, &w)| w > 1e-14)
        .map(|(&(coords, values), &weight)| JuntaTerm { coords, values, weight })
        .collect();
    let cert = JuntaCertificate::new(m, terms)?;
    let ok = cert.residual(f)? <= 1e-9 * f.sup_norm().max(1.0);
    Ok(ok.then_some(cert))
}

/// Lawson-Hanson active-set NNLS: `min ‖Σ_k w_k a_k − y‖`, `w ≥ 0`.
fn nnls(cols: &[Vec<f64>], y: &[f64], max_iter: usize) -> Vec<f64> {
    let k = cols.len();
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    let mut w = vec![0.0; k];
    let mut active = vec![false; k];
    let resid = |w: &[f64]| -> Vec<f64> {
        let mut r = y.to_vec();
        for (c, &wk) in cols.iter().zip(w) {
            if wk != 0.0 {
                r.iter_mut().zip(c).for_each(|(a, b)| *a -= wk * b);
            }
        }
        r
    };
    let solve = |set: &[usize]| -> Option<Vec<f64>> {
        let s = set.len();
        let mut a = vec![0.0; s * s];
        for (i, &p) in set.iter().enumerate() {
            for (j, &q) in set.iter().enumerate() {
                a[i * s + j] = dot(&cols[p], &cols[q]);
            }
            a[i * s + i] += 1e-13;
        }
        let b: Vec<f64> = set.iter().map(|&p| dot(&cols[p], y)).collect();
        cholesky_solve(s, &mut a, &b)
    };
    let ynorm = dot(y, y).sqrt().max(1.0);
    for _ in 0..max_iter {
        let r = resid(&w);
        let grad: Vec<f64> = cols.iter().map(|c| dot(c, &r)).collect();
        let pick = (0..k).filter(|&j| !active[j]).max_by(|&a, &b| grad[a].total_cmp(&grad[b]));
        let Some(j) = pick else { break };
        if grad[j] <= 1e-12 * ynorm {
            break;
        }
        active[j] = true;
        for _ in 0..max_iter {
            let set: Vec<usize> = (0..k).filter(|&i| active[i]).collect();
            let Some(z) = solve(&set) else {
                active[j] = false;
                break;
            };
            if z.iter().all(|&v| v > 0.0) {
                for (&p, &v) in set.iter().zip(&z) {
                    w[p] = v;
                }
                break;
            }
            let mut alpha = f64::INFINITY;
            for (&p, &v) in set.iter().zip(&z) {
                if v <= 0.0 {
                    alpha = alpha.min(w[p] / (w[p] - v));
                }
            }
            for (&p, &v) in set.iter().zip(&z) {
                w[p] += alpha * (v - w[p]);
                if w[p] <= 1e-15 {
                    w[p] = 0.0;
                    active[p] = false;
                }
            }
        }
    }
    w
}
