//! Dense real symmetric matrices with a cached Jacobi eigendecomposition.

use std::fmt;
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Largest dimension accepted by the eigensolver.
pub const MAX_DIM: usize = 1024;

const JACOBI_OFF_TOL: f64 = 1e-12;
const JACOBI_MAX_SWEEPS: usize = 100;

/// Eigenvalues in ascending order with matching orthonormal eigenvectors.
#[derive(Debug, Clone, PartialEq)]
pub struct Eigen {
    pub values: Vec<f64>,
    /// Row-major `dim x dim`; column `k` is the eigenvector for `values[k]`.
    pub vectors: Vec<f64>,
}

impl Eigen {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// Eigenvector `k` as an owned vector.
    pub fn vector(&self, k: usize) -> Vec<f64> {
        let n = self.dim();
        (0..n).map(|i| self.vectors[i * n + k]).collect()
    }

    /// `V g(Λ) Vᵀ`.
    pub fn reconstruct_with(&self, g: impl Fn(f64) -> f64) -> SymMatrix {
        let n = self.dim();
        let gv: Vec<f64> = self.values.iter().map(|&l| g(l)).collect();
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            for j in i..n {
                let mut s = 0.0;
                for k in 0..n {
                    s += self.vectors[i * n + k] * gv[k] * self.vectors[j * n + k];
                }
                out[i * n + j] = s;
                out[j * n + i] = s;
            }
        }
        SymMatrix::from_sym_unchecked(n, out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct JacobiFailure {
    sweeps: usize,
    off: f64,
}

/// Dense symmetric matrix. Entries are stored in full, but every constructor
/// writes `a_ij` and `a_ji` from a single value so symmetry is exact.
pub struct SymMatrix {
    n: usize,
    a: Vec<f64>,
    eig: OnceLock<std::result::Result<Eigen, JacobiFailure>>,
}

impl Clone for SymMatrix {
    fn clone(&self) -> Self {
        let eig = OnceLock::new();
        if let Some(e) = self.eig.get() {
            let _ = eig.set(e.clone());
        }
        Self { n: self.n, a: self.a.clone(), eig }
    }
}

impl PartialEq for SymMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.a == other.a
    }
}

impl fmt::Debug for SymMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SymMatrix").field("dim", &self.n).field("entries", &self.a).finish()
    }
}

impl SymMatrix {
    fn from_sym_unchecked(n: usize, a: Vec<f64>) -> Self {
        debug_assert_eq!(a.len(), n * n);
        Self { n, a, eig: OnceLock::new() }
    }

    pub fn zeros(n: usize) -> Self {
        Self::from_sym_unchecked(n, vec![0.0; n * n])
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, 1.0)
    }

    pub fn scalar(n: usize, s: f64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.a[i * n + i] = s;
        }
        m
    }

    pub fn diag(values: &[f64]) -> Self {
        let n = values.len();
        let mut m = Self::zeros(n);
        for (i, &v) in values.iter().enumerate() {
            m.a[i * n + i] = v;
        }
        m
    }

    /// Build from a function evaluated on the upper triangle `i <= j`.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut a = vec![0.0; n * n];
        for i in 0..n {
            for j in i..n {
                let v = f(i, j);
                a[i * n + j] = v;
                a[j * n + i] = v;
            }
        }
        Self::from_sym_unchecked(n, a)
    }

    /// Build from a full row-major array, symmetrizing as `(a + aᵀ)/2`.
    pub fn from_full(n: usize, data: &[f64]) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::ShapeMismatch(format!(
                "expected {} entries for dim {n}, got {}",
                n * n,
                data.len()
            )));
        }
        Ok(Self::from_fn(n, |i, j| 0.5 * (data[i * n + j] + data[j * n + i])))
    }

    /// Outer product `v vᵀ`.
    pub fn outer(v: &[f64]) -> Self {
        Self::from_fn(v.len(), |i, j| v[i] * v[j])
    }

    /// Gram matrix `Σ_k w_k v_k v_kᵀ`.
    pub fn weighted_outer_sum<'a>(n: usize, terms: impl IntoIterator<Item = (f64, &'a [f64])>) -> Self {
        let mut a = vec![0.0; n * n];
        for (w, v) in terms {
            for i in 0..n {
                let wi = w * v[i];
                if wi == 0.0 {
                    continue;
                }
                for j in i..n {
                    a[i * n + j] += wi * v[j];
                }
            }
        }
        for i in 0..n {
            for j in 0..i {
                a[i * n + j] = a[j * n + i];
            }
        }
        Self::from_sym_unchecked(n, a)
    }

    /// Block-diagonal assembly.
    pub fn block_diag(blocks: &[SymMatrix]) -> Self {
        let n: usize = blocks.iter().map(|b| b.n).sum();
        let mut a = vec![0.0; n * n];
        let mut off = 0;
        for b in blocks {
            for i in 0..b.n {
                for j in 0..b.n {
                    a[(off + i) * n + off + j] = b.a[i * b.n + j];
                }
            }
            off += b.n;
        }
        Self::from_sym_unchecked(n, a)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.a[i * self.n + j]
    }

    /// Full row-major entries.
    pub fn as_slice(&self) -> &[f64] {
        &self.a
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.a[i * self.n..(i + 1) * self.n]
    }

    /// Returns a copy with `(i,j)` and `(j,i)` set to `v`.
    pub fn with_entry(&self, i: usize, j: usize, v: f64) -> Self {
        let mut a = self.a.clone();
        a[i * self.n + j] = v;
        a[j * self.n + i] = v;
        Self::from_sym_unchecked(self.n, a)
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.a[i * self.n + i]).sum()
    }

    /// `Tr(A B)` for symmetric `A`, `B`.
    pub fn dot(&self, other: &SymMatrix) -> f64 {
        assert_eq!(self.n, other.n, "dimension mismatch in dot");
        self.a.iter().zip(&other.a).map(|(x, y)| x * y).sum()
    }

    /// `vᵀ A v`.
    pub fn quad_form(&self, v: &[f64]) -> f64 {
        let n = self.n;
        let mut s = 0.0;
        for i in 0..n {
            let row = &self.a[i * n..(i + 1) * n];
            let mut r = 0.0;
            for j in 0..n {
                r += row[j] * v[j];
            }
            s += v[i] * r;
        }
        s
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        let n = self.n;
        (0..n)
            .map(|i| self.a[i * n..(i + 1) * n].iter().zip(v).map(|(x, y)| x * y).sum())
            .collect()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::from_sym_unchecked(self.n, self.a.iter().map(|x| x * s).collect())
    }

    pub fn add(&self, other: &SymMatrix) -> Self {
        self.axpy(1.0, other)
    }

    pub fn sub(&self, other: &SymMatrix) -> Self {
        self.axpy(-1.0, other)
    }

    /// `self + s * other`.
    pub fn axpy(&self, s: f64, other: &SymMatrix) -> Self {
        assert_eq!(self.n, other.n, "dimension mismatch in axpy");
        Self::from_sym_unchecked(self.n, self.a.iter().zip(&other.a).map(|(x, y)| x + s * y).collect())
    }

    /// `T A T` for symmetric `T`, symmetrized.
    pub fn congruence(&self, t: &SymMatrix) -> Self {
        let n = self.n;
        assert_eq!(n, t.n, "dimension mismatch in congruence");
        let mut at = vec![0.0; n * n];
        for i in 0..n {
            for k in 0..n {
                let aik = self.a[i * n + k];
                if aik == 0.0 {
                    continue;
                }
                for j in 0..n {
                    at[i * n + j] += aik * t.a[k * n + j];
                }
            }
        }
        Self::from_fn(n, |i, j| {
            let mut s = 0.0;
            for k in 0..n {
                s += t.a[i * n + k] * at[k * n + j];
            }
            s
        })
    }

    /// Entrywise max |a_ij|.
    pub fn max_abs(&self) -> f64 {
        self.a.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn frobenius(&self) -> f64 {
        self.a.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// Cached eigendecomposition.
    pub fn eig(&self) -> Result<&Eigen> {
        if self.n > MAX_DIM {
            return Err(Error::Capacity(format!("dimension {} exceeds {MAX_DIM}", self.n)));
        }
        match self.eig.get_or_init(|| jacobi(self.n, &self.a)) {
            Ok(e) => Ok(e),
            Err(f) => Err(Error::NonConvergence { iterations: f.sweeps, residual: f.off }),
        }
    }

    pub fn eigenvalues(&self) -> Result<&[f64]> {
        Ok(&self.eig()?.values)
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(self.eig()?.values.first().copied().unwrap_or(0.0))
    }

    pub fn max_eigenvalue(&self) -> Result<f64> {
        Ok(self.eig()?.values.last().copied().unwrap_or(0.0))
    }

    pub fn norms(&self) -> Result<Norms> {
        let v = self.eigenvalues()?;
        Ok(Norms {
            operator: v.iter().fold(0.0, |m, x| m.max(x.abs())),
            trace: v.iter().map(|x| x.abs()).sum(),
            frobenius: v.iter().map(|x| x * x).sum::<f64>().sqrt(),
        })
    }

    pub fn operator_norm(&self) -> Result<f64> {
        Ok(self.norms()?.operator)
    }

    pub fn trace_norm(&self) -> Result<f64> {
        Ok(self.norms()?.trace)
    }

    /// `V g(Λ) Vᵀ` for a total function `g`.
    pub fn map_spectrum(&self, g: impl Fn(f64) -> f64) -> Result<SymMatrix> {
        Ok(self.eig()?.reconstruct_with(g))
    }

    /// `V g(Λ) Vᵀ` for a partial function; `g` returns `None` where undefined.
    pub fn try_map_spectrum(&self, g: impl Fn(f64) -> Option<f64>) -> Result<SymMatrix> {
        let e = self.eig()?;
        let mut out = Vec::with_capacity(e.values.len());
        for &l in &e.values {
            out.push(g(l).ok_or_else(|| Error::Domain(format!("function undefined at eigenvalue {l:e}")))?);
        }
        let tmp = Eigen { values: out, vectors: e.vectors.clone() };
        Ok(tmp.reconstruct_with(|x| x))
    }

    /// Polynomial `Σ_t c_t A^t` evaluated through the spectrum.
    pub fn polynomial(&self, coeffs: &[f64]) -> Result<SymMatrix> {
        self.map_spectrum(|x| horner(coeffs, x))
    }

    /// Matrix exponential via the spectrum.
    pub fn exp(&self) -> Result<SymMatrix> {
        self.map_spectrum(f64::exp)
    }

    /// PSD square root; eigenvalues in `[-1e-9, 0)` are clamped to zero.
    pub fn sqrt_psd(&self) -> Result<SymMatrix> {
        let min = self.min_eigenvalue()?;
        if min < -1e-9 {
            return Err(Error::NotPsd(min));
        }
        self.map_spectrum(|x| x.max(0.0).sqrt())
    }

    /// Inverse square root of a positive definite matrix.
    pub fn inv_sqrt_pd(&self) -> Result<SymMatrix> {
        let min = self.min_eigenvalue()?;
        if min <= 0.0 {
            return Err(Error::NotPsd(min));
        }
        self.map_spectrum(|x| 1.0 / x.sqrt())
    }

    /// Natural logarithm of a positive definite matrix.
    pub fn log_pd(&self) -> Result<SymMatrix> {
        self.try_map_spectrum(|x| (x > 0.0).then(|| x.ln()))
    }

    /// Minimum eigenvalue test with a violating eigenvector on failure.
    pub fn psd_check(&self, tol: f64) -> Result<PsdCheck> {
        let e = self.eig()?;
        let min = e.values.first().copied().unwrap_or(0.0);
        let ok = min >= -tol;
        Ok(PsdCheck { ok, min_eigenvalue: min, witness: (!ok).then(|| e.vector(0)) })
    }
}

/// Operator, trace and Frobenius norms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Norms {
    pub operator: f64,
    pub trace: f64,
    pub frobenius: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PsdCheck {
    pub ok: bool,
    pub min_eigenvalue: f64,
    /// Unit eigenvector for the minimum eigenvalue when the check fails.
    pub witness: Option<Vec<f64>>,
}

pub fn horner(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

/// Free-function form of [`SymMatrix::eig`].
pub fn eigendecompose(a: &SymMatrix) -> Result<Eigen> {
    a.eig().cloned()
}

/// Free-function form of [`SymMatrix::map_spectrum`].
pub fn matrix_function(a: &SymMatrix, g: impl Fn(f64) -> f64) -> Result<SymMatrix> {
    a.map_spectrum(g)
}

fn jacobi(n: usize, input: &[f64]) -> std::result::Result<Eigen, JacobiFailure> {
    let mut a = input.to_vec();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let total: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let target = JACOBI_OFF_TOL * total.max(f64::MIN_POSITIVE);
    let off_norm = |a: &[f64]| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                s += 2.0 * a[i * n + j] * a[i * n + j];
            }
        }
        s.sqrt()
    };
    let mut sweeps = 0;
    let mut off = off_norm(&a);
    while off > target {
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(JacobiFailure { sweeps, off });
        }
        sweeps += 1;
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                // Entries below rounding relative to the diagonal are dropped.
                if apq.abs() < f64::EPSILON * 1e-2 * (app.abs() + aqq.abs()) {
                    a[p * n + q] = 0.0;
                    a[q * n + p] = 0.0;
                    continue;
                }
                rotated = true;
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let tau = s / (1.0 + c);
                a[p * n + p] = app - t * apq;
                a[q * n + q] = aqq + t * apq;
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                for k in 0..n {
                    if k == p || k == q {
                        continue;
                    }
                    let g = a[k * n + p];
                    let h = a[k * n + q];
                    let np = g - s * (h + g * tau);
                    let nq = h + s * (g - h * tau);
                    a[k * n + p] = np;
                    a[p * n + k] = np;
                    a[k * n + q] = nq;
                    a[q * n + k] = nq;
                }
                for k in 0..n {
                    let g = v[k * n + p];
                    let h = v[k * n + q];
                    v[k * n + p] = g - s * (h + g * tau);
                    v[k * n + q] = h + s * (g - h * tau);
                }
            }
        }
        off = off_norm(&a);
        if !rotated {
            break;
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].total_cmp(&a[j * n + j]));
    let values = order.iter().map(|&k| a[k * n + k]).collect();
    let mut vectors = vec![0.0; n * n];
    for (new_k, &old_k) in order.iter().enumerate() {
        for i in 0..n {
            vectors[i * n + new_k] = v[i * n + old_k];
        }
    }
    Ok(Eigen { values, vectors })
}

/// A symmetric matrix certified PSD (min eigenvalue ≥ −1e-9) with unit trace
/// (within 1e-10).
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: SymMatrix,
}

pub const DENSITY_PSD_TOL: f64 = 1e-9;
pub const DENSITY_TRACE_TOL: f64 = 1e-10;

impl DensityMatrix {
    pub fn new(mat: SymMatrix) -> Result<Self> {
        let tr = mat.trace();
        if (tr - 1.0).abs() > DENSITY_TRACE_TOL {
            return Err(Error::InvalidInput(format!("density trace {tr} differs from 1")));
        }
        let min = mat.min_eigenvalue()?;
        if min < -DENSITY_PSD_TOL {
            return Err(Error::NotPsd(min));
        }
        Ok(Self { mat })
    }

    /// Normalize a PSD matrix to unit trace.
    pub fn normalized(mat: SymMatrix) -> Result<Self> {
        let tr = mat.trace();
        if !(tr > 0.0) || !tr.is_finite() {
            return Err(Error::Domain(format!("cannot normalize matrix with trace {tr}")));
        }
        Self::new(mat.scale(1.0 / tr))
    }

    /// The maximally mixed state `I/d`.
    pub fn uniform(d: usize) -> Self {
        Self { mat: SymMatrix::scalar(d, 1.0 / d as f64) }
    }

    /// Pure state `v vᵀ / |v|²`.
    pub fn pure(v: &[f64]) -> Result<Self> {
        let n2: f64 = v.iter().map(|x| x * x).sum();
        if n2 == 0.0 {
            return Err(Error::InvalidInput("zero vector".into()));
        }
        Self::new(SymMatrix::outer(v).scale(1.0 / n2))
    }

    pub fn matrix(&self) -> &SymMatrix {
        &self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    pub fn into_matrix(self) -> SymMatrix {
        self.mat
    }
}

/// Von Neumann entropy term `Tr(X log X)` with `0 log 0 = 0`.
pub fn neg_entropy(x: &DensityMatrix) -> Result<f64> {
    Ok(x.mat.eigenvalues()?.iter().filter(|&&l| l > 0.0).map(|&l| l * l.ln()).sum())
}

/// `Tr(X (log X − log Y))`.
///
/// Eigenvalues of `Y` below 1e-12 count as its kernel; `X` may carry at most
/// 1e-9 mass there, which is then dropped.
pub fn quantum_relative_entropy(x: &DensityMatrix, y: &DensityMatrix) -> Result<f64> {
    if x.dim() != y.dim() {
        return Err(Error::ShapeMismatch(format!("dims {} and {}", x.dim(), y.dim())));
    }
    let ey = y.mat.eig()?;
    let n = y.dim();
    let mut cross = 0.0;
    for k in 0..n {
        let lk = ey.values[k];
        let vk = ey.vector(k);
        let mass = x.mat.quad_form(&vk);
        if lk < 1e-12 {
            if mass > 1e-9 {
                return Err(Error::Support(format!(
                    "mass {mass:e} on kernel direction with eigenvalue {lk:e}"
                )));
            }
            continue;
        }
        cross += mass * lk.ln();
    }
    Ok(neg_entropy(x)? - cross)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn eigen_identity() {
        let e = SymMatrix::identity(3).eig().unwrap().clone();
        assert_eq!(e.values, vec![1.0, 1.0, 1.0]);
    }

    #[test]
    fn eigen_diag_sorted_with_axis_vectors() {
        let e = SymMatrix::diag(&[2.0, -1.0]).eig().unwrap().clone();
        assert_eq!(e.values, vec![-1.0, 2.0]);
        assert_abs_diff_eq!(e.vector(0)[1].abs(), 1.0);
        assert_abs_diff_eq!(e.vector(1)[0].abs(), 1.0);
    }

    #[test]
    fn eigen_swap_matrix() {
        let m = SymMatrix::from_full(2, &[0.0, 1.0, 1.0, 0.0]).unwrap();
        let v = m.eigenvalues().unwrap();
        assert_abs_diff_eq!(v[0], -1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(v[1], 1.0, epsilon = 1e-14);
    }

    #[test]
    fn norms_examples() {
        let n = SymMatrix::diag(&[3.0, -4.0]).norms().unwrap();
        assert_eq!((n.operator, n.trace, n.frobenius), (4.0, 7.0, 5.0));
        let n = SymMatrix::identity(4).norms().unwrap();
        assert_eq!((n.operator, n.trace, n.frobenius), (1.0, 4.0, 2.0));
        let n = SymMatrix::zeros(3).norms().unwrap();
        assert_eq!((n.operator, n.trace, n.frobenius), (0.0, 0.0, 0.0));
    }

    #[test]
    fn matrix_function_examples() {
        assert_eq!(SymMatrix::zeros(3).exp().unwrap(), SymMatrix::identity(3));
        let r = SymMatrix::diag(&[4.0, 9.0]).sqrt_psd().unwrap();
        assert_eq!(r, SymMatrix::diag(&[2.0, 3.0]));
        let t = SymMatrix::diag(&[1.0, -1.0]).exp().unwrap().trace();
        assert_abs_diff_eq!(t, std::f64::consts::E + 1.0 / std::f64::consts::E, epsilon = 1e-14);
    }

    #[test]
    fn log_of_negative_is_domain_error() {
        assert!(matches!(SymMatrix::diag(&[1.0, -0.5]).log_pd(), Err(Error::Domain(_))));
    }

    #[test]
    fn sqrt_clamps_tiny_negative() {
        let r = SymMatrix::diag(&[4.0, -1e-10]).sqrt_psd().unwrap();
        assert_eq!(r.get(1, 1), 0.0);
        assert!(SymMatrix::diag(&[4.0, -1e-6]).sqrt_psd().is_err());
    }

    #[test]
    fn relative_entropy_examples() {
        let u = DensityMatrix::uniform(4);
        assert_abs_diff_eq!(quantum_relative_entropy(&u, &u).unwrap(), 0.0, epsilon = 1e-15);
        let e1 = DensityMatrix::pure(&[1.0, 0.0, 0.0, 0.0]).unwrap();
        assert_abs_diff_eq!(quantum_relative_entropy(&e1, &u).unwrap(), 4f64.ln(), epsilon = 1e-14);
        let x = DensityMatrix::new(SymMatrix::diag(&[0.5, 0.5])).unwrap();
        let y = DensityMatrix::new(SymMatrix::diag(&[0.25, 0.75])).unwrap();
        let want = 0.5 * 2f64.ln() + 0.5 * (2.0f64 / 3.0).ln();
        assert_abs_diff_eq!(quantum_relative_entropy(&x, &y).unwrap(), want, epsilon = 1e-14);
    }

    #[test]
    fn relative_entropy_support_violation() {
        let x = DensityMatrix::uniform(2);
        let y = DensityMatrix::pure(&[1.0, 0.0]).unwrap();
        assert!(matches!(quantum_relative_entropy(&x, &y), Err(Error::Support(_))));
    }

    #[test]
    fn psd_check_examples() {
        assert!(SymMatrix::identity(3).psd_check(1e-9).unwrap().ok);
        let c = SymMatrix::diag(&[1.0, -1e-3]).psd_check(1e-9).unwrap();
        assert!(!c.ok);
        let w = c.witness.unwrap();
        assert_abs_diff_eq!(w[0], 0.0);
        assert_abs_diff_eq!(w[1].abs(), 1.0);
    }

    #[test]
    fn congruence_matches_explicit_product() {
        let a = SymMatrix::from_full(2, &[2.0, 1.0, 1.0, 3.0]).unwrap();
        let t = SymMatrix::from_full(2, &[1.0, 2.0, 2.0, 0.0]).unwrap();
        // T A T computed by hand.
        let want = SymMatrix::from_full(2, &[18.0, 8.0, 8.0, 8.0]).unwrap();
        assert_eq!(a.congruence(&t), want);
    }

    #[test]
    fn density_rejects_bad_trace() {
        assert!(DensityMatrix::new(SymMatrix::identity(2)).is_err());
    }
}
