//! Small dense SDP engine for the sum-of-squares problems.
//!
//! Standard form over symmetric `r x r` matrices in scaled-vector coordinates
//! (`svec`, off-diagonal entries times √2 so the Euclidean inner product is
//! the trace inner product):
//!
//! ```text
//! primal:  min ⟨C, X⟩  s.t.  A x = b,  X ⪰ 0
//! dual:    max bᵀy     s.t.  C − Aᵀy = S ⪰ 0
//! ```
//!
//! Constraint rows are orthonormal, so `AAᵀ = I`. The solver alternates a
//! projection onto the affine slice (the `y` update) with a projection onto
//! the PSD cone (the spectral split of `V`), using the alternating-direction
//! augmented Lagrangian scheme of Wen, Goldfarb and Yin (2010).

use crate::error::{Error, Result};
use crate::symmat::SymMatrix;

const SQRT2: f64 = std::f64::consts::SQRT_2;

/// Number of svec coordinates for dimension `r`.
pub fn svec_len(r: usize) -> usize {
    r * (r + 1) / 2
}

/// svec position of `(i, j)` with `i <= j`.
#[inline]
pub fn svec_pos(r: usize, i: usize, j: usize) -> usize {
    debug_assert!(i <= j);
    i * (2 * r - i + 1) / 2 + (j - i)
}

pub fn svec(m: &SymMatrix) -> Vec<f64> {
    let r = m.dim();
    let mut v = Vec::with_capacity(svec_len(r));
    for i in 0..r {
        for j in i..r {
            v.push(if i == j { m.get(i, i) } else { SQRT2 * m.get(i, j) });
        }
    }
    v
}

pub fn smat(r: usize, v: &[f64]) -> SymMatrix {
    SymMatrix::from_fn(r, |i, j| {
        let x = v[svec_pos(r, i, j)];
        if i == j {
            x
        } else {
            x / SQRT2
        }
    })
}

/// Sparse constraint row.
#[derive(Debug, Clone, Default)]
pub struct Row {
    pub idx: Vec<usize>,
    pub val: Vec<f64>,
}

impl Row {
    pub fn dense(v: Vec<f64>) -> Self {
        Self { idx: (0..v.len()).collect(), val: v }
    }

    #[inline]
    pub fn dot(&self, x: &[f64]) -> f64 {
        self.idx.iter().zip(&self.val).map(|(&i, &v)| v * x[i]).sum()
    }

    #[inline]
    pub fn axpy(&self, s: f64, out: &mut [f64]) {
        for (&i, &v) in self.idx.iter().zip(&self.val) {
            out[i] += s * v;
        }
    }
}

#[derive(Debug, Clone)]
pub struct Problem {
    pub r: usize,
    pub c: Vec<f64>,
    /// Orthonormal rows.
    pub rows: Vec<Row>,
    pub b: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct Solution {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub s: Vec<f64>,
    pub iterations: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct Settings {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for Settings {
    fn default() -> Self {
        Self { tol: 1e-10, max_iter: 50_000 }
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

impl Problem {
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        self.rows.iter().map(|r| r.dot(x)).collect()
    }

    pub fn apply_t(&self, y: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.c.len()];
        for (row, &yk) in self.rows.iter().zip(y) {
            row.axpy(yk, &mut out);
        }
        out
    }

    /// Euclidean projection onto `{x : A x = b}`.
    pub fn project_affine(&self, x: &mut [f64]) {
        let res: Vec<f64> = self.rows.iter().zip(&self.b).map(|(r, &bk)| r.dot(x) - bk).collect();
        for (row, &rk) in self.rows.iter().zip(&res) {
            row.axpy(-rk, x);
        }
    }

    /// Run the solver, optionally warm-started.
    pub fn solve(&self, settings: Settings, warm: Option<&Solution>) -> Result<Solution> {
        let r = self.r;
        let len = self.c.len();
        let (mut x, mut s, mut y) = match warm {
            Some(w) => (w.x.clone(), w.s.clone(), w.y.clone()),
            None => (vec![0.0; len], vec![0.0; len], vec![0.0; self.rows.len()]),
        };
        let nb = 1.0 + norm(&self.b);
        let nc = 1.0 + norm(&self.c);
        let mut mu = 1.0;
        let (mut pinf, mut dinf, mut gap) = (f64::INFINITY, f64::INFINITY, f64::INFINITY);
        for it in 1..=settings.max_iter {
            // y = −(μ(Ax − b) + A(S − C))
            let smc: Vec<f64> = s.iter().zip(&self.c).map(|(a, b)| a - b).collect();
            for (k, row) in self.rows.iter().enumerate() {
                y[k] = -(mu * (row.dot(&x) - self.b[k]) + row.dot(&smc));
            }
            // V = C − Aᵀy − μX
            let aty = self.apply_t(&y);
            let v: Vec<f64> = (0..len).map(|i| self.c[i] - aty[i] - mu * x[i]).collect();
            let e = smat(r, &v);
            let eig = e.eig()?;
            let pos = svec(&eig.reconstruct_with(|l| l.max(0.0)));
            let x_new: Vec<f64> = pos.iter().zip(&v).map(|(p, vv)| (p - vv) / mu).collect();
            let dres: Vec<f64> = (0..len).map(|i| self.c[i] - aty[i] - pos[i]).collect();
            let ax = self.apply(&x_new);
            let pres: Vec<f64> = ax.iter().zip(&self.b).map(|(a, b)| a - b).collect();
            pinf = norm(&pres) / nb;
            dinf = norm(&dres) / nc;
            let pobj: f64 = self.c.iter().zip(&x_new).map(|(a, b)| a * b).sum();
            let dobj: f64 = self.b.iter().zip(&y).map(|(a, b)| a * b).sum();
            gap = (pobj - dobj).abs() / (1.0 + pobj.abs() + dobj.abs());
            x = x_new;
            s = pos;
            if pinf < settings.tol && dinf < settings.tol && gap < settings.tol {
                return Ok(Solution {
                    x,
                    y,
                    s,
                    iterations: it,
                });
            }
            if it % 10 == 0 {
                if pinf > 4.0 * dinf {
                    mu = (mu * 1.6).min(1e6);
                } else if dinf > 4.0 * pinf {
                    mu = (mu / 1.6).max(1e-6);
                }
            }
        }
        Err(Error::NonConvergence { iterations: settings.max_iter, residual: pinf.max(dinf).max(gap) })
    }
}

/// Alternating projections between the affine slice and the PSD cone,
/// starting from a PSD point. Returns the last PSD iterate.
pub fn alternating_projections(p: &Problem, start: &[f64], iters: usize, stop: f64) -> Result<Vec<f64>> {
    let mut x = start.to_vec();
    for _ in 0..iters {
        p.project_affine(&mut x);
        let m = smat(p.r, &x);
        let psd = svec(&m.map_spectrum(|l| l.max(0.0))?);
        let moved = norm(&psd.iter().zip(&x).map(|(a, b)| a - b).collect::<Vec<_>>());
        x = psd;
        if moved < stop {
            break;
        }
    }
    Ok(x)
}

/// Restrict to the face spanned by eigenvectors of `x` with eigenvalue above
/// `rel * λ_max`, then solve the ridge least-squares problem
/// `min ‖Φh − b‖² + δ‖h − h0‖²` over the face. Returns the PSD-clamped result.
pub fn face_polish(p: &Problem, x: &[f64], rel: f64, max_unknowns: usize) -> Result<Option<Vec<f64>>> {
    let r = p.r;
    let m = smat(r, x);
    let e = m.eig()?;
    let lmax = e.values.last().copied().unwrap_or(0.0);
    if lmax <= 0.0 {
        return Ok(None);
    }
    let keep: Vec<usize> = (0..r).filter(|&k| e.values[k] > rel * lmax).collect();
    let k = keep.len();
    let q = svec_len(k);
    if k == 0 || q > max_unknowns {
        return Ok(None);
    }
    let vcols: Vec<Vec<f64>> = keep.iter().map(|&c| e.vector(c)).collect();
    // Columns of Φ: A svec(V E_pq Vᵀ) for the svec basis E_pq of the face.
    let mut phi: Vec<Vec<f64>> = Vec::with_capacity(q);
    for a in 0..k {
        for bidx in a..k {
            let scale = if a == bidx { 1.0 } else { 1.0 / SQRT2 };
            let mut g = vec![0.0; svec_len(r)];
            for i in 0..r {
                for j in i..r {
                    let mut v = vcols[a][i] * vcols[bidx][j];
                    if a != bidx {
                        v += vcols[bidx][i] * vcols[a][j];
                    }
                    v *= scale;
                    g[svec_pos(r, i, j)] = if i == j { v } else { SQRT2 * v };
                }
            }
            phi.push(p.apply(&g));
        }
    }
    let h0: Vec<f64> = {
        let mut h = Vec::with_capacity(q);
        for a in 0..k {
            for bidx in a..k {
                let v = m.quad_form_pair(&vcols[a], &vcols[bidx]);
                h.push(if a == bidx { v } else { SQRT2 * v });
            }
        }
        h
    };
    let delta = 1e-14 * (1.0 + lmax * lmax);
    let mut normal = vec![0.0; q * q];
    let mut rhs = vec![0.0; q];
    for i in 0..q {
        for j in i..q {
            let v: f64 = phi[i].iter().zip(&phi[j]).map(|(a, b)| a * b).sum();
            normal[i * q + j] = v;
            normal[j * q + i] = v;
        }
        normal[i * q + i] += delta;
        rhs[i] = phi[i].iter().zip(&p.b).map(|(a, b)| a * b).sum::<f64>() + delta * h0[i];
    }
    let Some(h) = cholesky_solve(q, &mut normal, &rhs) else {
        return Ok(None);
    };
    let hm = smat(k, &h).map_spectrum(|l| l.max(0.0))?;
    let mut g = SymMatrix::zeros(r);
    for a in 0..k {
        for bidx in 0..k {
            let w = hm.get(a, bidx);
            if w == 0.0 {
                continue;
            }
            g = g.axpy(w, &SymMatrix::from_fn(r, |i, j| 0.5 * (vcols[a][i] * vcols[bidx][j] + vcols[bidx][i] * vcols[a][j])));
        }
    }
    Ok(Some(svec(&g)))
}

/// Solve `A x = b` for symmetric positive definite `A` (overwritten).
pub fn cholesky_solve(n: usize, a: &mut [f64], b: &[f64]) -> Option<Vec<f64>> {
    for j in 0..n {
        let mut d = a[j * n + j];
        for k in 0..j {
            d -= a[j * n + k] * a[j * n + k];
        }
        if !(d > 0.0) {
            return None;
        }
        let d = d.sqrt();
        a[j * n + j] = d;
        for i in (j + 1)..n {
            let mut s = a[i * n + j];
            for k in 0..j {
                s -= a[i * n + k] * a[j * n + k];
            }
            a[i * n + j] = s / d;
        }
    }
    let mut z = b.to_vec();
    for i in 0..n {
        for k in 0..i {
            z[i] -= a[i * n + k] * z[k];
        }
        z[i] /= a[i * n + i];
    }
    for i in (0..n).rev() {
        for k in (i + 1)..n {
            z[i] -= a[k * n + i] * z[k];
        }
        z[i] /= a[i * n + i];
    }
    Some(z)
}

impl SymMatrix {
    /// `uᵀ A v`.
    pub fn quad_form_pair(&self, u: &[f64], v: &[f64]) -> f64 {
        let av = self.mul_vec(v);
        u.iter().zip(&av).map(|(a, b)| a * b).sum()
    }
}
