//! Sum-of-squares upper bounds, sos degree and certificates.
//!
//! The monomial relaxation is solved in the character basis `{χ_α : |α| ≤ d/2}`
//! (same span as the monomials, orthonormal under the uniform measure) and the
//! Gram matrix is converted back to the monomial basis `{x^A : |A| ≤ d/2}` for
//! the returned certificate. Dual moments in the character basis are Fourier
//! coefficients, so the pseudo-density is read off directly.

use crate::cube::{popcount, subsets_up_to, CubeFunction};
use crate::error::{Error, Result};
use crate::pseudo::{validate_sos_pseudo_density, PseudoDensity};
use crate::sdp::{self, smat, svec_len, svec_pos, Problem, Row, Settings};
use crate::symmat::SymMatrix;

/// Largest `n` accepted by the solvers.
pub const MAX_SOS_VARS: usize = 12;
/// Largest basis size accepted by the solvers.
pub const MAX_BASIS: usize = 300;
/// Default duality-gap tolerance.
pub const DEFAULT_TOL: f64 = 1e-7;
/// Relative pointwise tolerance for certificates.
pub const CERT_TOL: f64 = 1e-7;
/// Eigenvalues below this (relative) are dropped by `extract_squares`.
const SQUARE_DROP: f64 = 1e-14;

const SQRT2: f64 = std::f64::consts::SQRT_2;

#[derive(Debug, Clone, PartialEq)]
pub enum BasisDescriptor {
    /// Monomials `x^A`, `|A| ≤ order`, ordered by size then colex.
    Monomial { n: usize, order: usize },
    /// Caller-supplied functions.
    Custom,
}

/// `c − target = Σ_t g_t²` pointwise, with `g_t` in the span of `basis`.
#[derive(Debug, Clone, PartialEq)]
pub struct SosCertificate {
    pub c: f64,
    /// Relaxation degree, when the basis is the monomial one.
    pub degree: Option<usize>,
    pub descriptor: BasisDescriptor,
    pub basis: Vec<CubeFunction>,
    pub gram: SymMatrix,
    pub squares: Vec<CubeFunction>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SosDualSolution {
    pub density: PseudoDensity,
    /// `⟨D, f⟩`.
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SosSolution {
    pub certificate: SosCertificate,
    pub dual: SosDualSolution,
    /// `c − ⟨D, f⟩`.
    pub gap: f64,
    pub iterations: usize,
}

/// Result of the subspace solver. The dual is a function `D` with `E D = 1`
/// and `E D u uᵀ ⪰ 0` over the basis, not a degree-graded pseudo-density.
#[derive(Debug, Clone, PartialEq)]
pub struct SubspaceSolution {
    pub certificate: SosCertificate,
    pub dual: CubeFunction,
    pub dual_value: f64,
    pub gap: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SosDegree {
    pub degree: usize,
    /// Certificate for `0 − (−f) = Σ g²`, i.e. `c = 0` against target `−f`.
    pub certificate: SosCertificate,
    /// For every even `d` below `degree`: a degree-`d` pseudo-density with `E D f < 0`.
    pub witnesses: Vec<(usize, SosDualSolution)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CertificateReport {
    pub passed: bool,
    pub identity_ok: bool,
    pub psd_ok: bool,
    pub degree_ok: bool,
    /// `max_x |c − f(x) − Σ g_t(x)²|`.
    pub max_residual: f64,
    pub gram_min_eigenvalue: f64,
    pub max_square_degree: usize,
}

/// Rounds odd degrees up.
pub fn even_degree(d: usize) -> usize {
    d + (d & 1)
}

/// Number of monomials of degree at most `order` in `n` variables.
pub fn basis_size(n: usize, order: usize) -> usize {
    (0..=order.min(n)).map(|i| crate::cube::binomial(n, i) as usize).sum()
}

/// Monomials `x^A`, `|A| ≤ order`, ordered by size then colex.
pub fn monomial_basis(n: usize, order: usize) -> Result<Vec<CubeFunction>> {
    subsets_up_to(n, order).into_iter().map(|a| CubeFunction::monomial(n, a)).collect()
}

/// Internal problem description shared by the monomial and subspace solvers.
struct Formulation {
    problem: Problem,
    /// Basis tables over the cube, one per Gram index.
    tables: Vec<Vec<f64>>,
    f: Vec<f64>,
}

impl Formulation {
    /// `h(x) = f(x) + u(x)ᵀ G u(x)`; a certificate needs `h` constant.
    fn pointwise(&self, g: &SymMatrix) -> Vec<f64> {
        let r = self.tables.len();
        let mut u = vec![0.0; r];
        (0..self.f.len())
            .map(|x| {
                for (k, t) in self.tables.iter().enumerate() {
                    u[k] = t[x];
                }
                self.f[x] + g.quad_form(&u)
            })
            .collect()
    }

    /// `(max h, max h − min h)` for a Gram matrix.
    fn bound_and_spread(&self, g: &SymMatrix) -> (f64, f64) {
        let h = self.pointwise(g);
        let hi = h.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let lo = h.iter().cloned().fold(f64::INFINITY, f64::min);
        (hi, hi - lo)
    }

    /// Polish an ADMM iterate and return the best PSD Gram matrix with its
    /// bound `max h` and spread `max h − min h`. Candidates are tried in
    /// order of cost; the first pointwise-tight one wins, otherwise the one
    /// with the smallest spread.
    fn best_primal(&self, x: &[f64]) -> Result<(SymMatrix, f64, f64)> {
        let p = &self.problem;
        let scale = 1.0 + self.f.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let tight = 1e-11 * scale;
        let g = smat(p.r, x);
        let (c, spread) = self.bound_and_spread(&g);
        let mut best = (g, c, spread);
        if spread <= tight {
            return Ok(best);
        }
        let consider = |cand: Vec<f64>, best: &mut (SymMatrix, f64, f64)| -> bool {
            let g = smat(p.r, &cand);
            let (c, spread) = self.bound_and_spread(&g);
            if spread < best.2 {
                *best = (g, c, spread);
            }
            spread <= tight
        };
        for rel in [1e-6, 1e-9, 1e-4] {
            if let Some(cand) = sdp::face_polish(p, x, rel, 600)? {
                if consider(cand, &mut best) {
                    return Ok(best);
                }
            }
        }
        consider(sdp::alternating_projections(p, x, 200, 1e-15)?, &mut best);
        Ok(best)
    }
}

/// Character-basis formulation of `min c s.t. c − f = Σ g², deg g ≤ d/2`.
/// Also returns the index family and `(γ, ‖B_γ‖)` per constraint row.
fn character_formulation(f: &CubeFunction, d: usize) -> Result<(Formulation, Vec<u32>, Vec<(usize, f64)>)> {
    let n = f.n();
    let order = (d / 2).min(n);
    let index = subsets_up_to(n, order);
    let r = index.len();
    let fh = f.fourier();
    let scale = 1.0f64.max(f.sup_norm());
    for (gamma, &v) in fh.iter().enumerate() {
        if popcount(gamma as u32) > d && v.abs() > 1e-12 * scale {
            return Err(Error::Domain(format!(
                "f has degree {} above the relaxation degree {d}",
                f.degree()
            )));
        }
    }
    // Group svec coordinates by γ = α ⊕ β.
    let mut groups: Vec<Vec<(usize, f64)>> = vec![Vec::new(); 1 << n];
    for i in 0..r {
        for j in i..r {
            let gamma = (index[i] ^ index[j]) as usize;
            groups[gamma].push((svec_pos(r, i, j), if i == j { 1.0 } else { SQRT2 }));
        }
    }
    let mut rows = Vec::new();
    let mut b = Vec::new();
    let mut gammas = Vec::new();
    for (gamma, entries) in groups.iter().enumerate() {
        if gamma == 0 || entries.is_empty() {
            continue;
        }
        let norm = entries.iter().map(|(_, v)| v * v).sum::<f64>().sqrt();
        rows.push(Row { idx: entries.iter().map(|e| e.0).collect(), val: entries.iter().map(|e| e.1 / norm).collect() });
        b.push(-fh[gamma] / norm);
        gammas.push((gamma, norm));
    }
    let mut c = vec![0.0; svec_len(r)];
    for i in 0..r {
        c[svec_pos(r, i, i)] = 1.0;
    }
    let tables = index
        .iter()
        .map(|&a| (0..1u32 << n).map(|x| crate::cube::character(a, x)).collect())
        .collect();
    Ok((Formulation { problem: Problem { r, c, rows, b }, tables, f: f.values().to_vec() }, index, gammas))
}

/// Change of basis `χ_α = Σ_{A⊆α} (−2)^{|A|} x^A` over a downward-closed index.
fn character_to_monomial(index: &[u32]) -> SymMatrixLike {
    let r = index.len();
    let mut m = vec![0.0; r * r];
    for (i, &alpha) in index.iter().enumerate() {
        for (j, &a) in index.iter().enumerate() {
            if a & alpha == a {
                m[i * r + j] = (-2.0f64).powi(popcount(a) as i32);
            }
        }
    }
    SymMatrixLike { r, m }
}

/// Plain square matrix used for basis changes.
struct SymMatrixLike {
    r: usize,
    m: Vec<f64>,
}

impl SymMatrixLike {
    /// `Mᵀ G M`.
    fn congruence_t(&self, g: &SymMatrix) -> SymMatrix {
        let r = self.r;
        let mut gm = vec![0.0; r * r];
        for i in 0..r {
            for j in 0..r {
                let mut s = 0.0;
                for k in 0..r {
                    s += g.get(i, k) * self.m[k * r + j];
                }
                gm[i * r + j] = s;
            }
        }
        SymMatrix::from_fn(r, |a, b| {
            let mut s = 0.0;
            for i in 0..r {
                s += self.m[i * r + a] * gm[i * r + b];
            }
            s
        })
    }
}

fn solve_admm(form: &Formulation, tol: f64) -> Result<(sdp::Solution, bool)> {
    let settings = Settings { tol: (tol * 1e-3).clamp(1e-13, 1e-9), max_iter: 50_000 };
    match form.problem.solve(settings, None) {
        Ok(s) => Ok((s, true)),
        Err(Error::NonConvergence { .. }) => {
            // Rerun with a loose target so a usable iterate is available for polishing.
            let loose = Settings { tol: 1e-6, max_iter: 50_000 };
            match form.problem.solve(loose, None) {
                Ok(s) => Ok((s, false)),
                Err(e) => Err(e),
            }
        }
        Err(e) => Err(e),
    }
}

/// Degree-`d` sum-of-squares upper bound with primal certificate and dual
/// pseudo-density.
pub fn sos_upper_bound(f: &CubeFunction, d: usize, tol: f64) -> Result<SosSolution> {
    let n = f.n();
    let d = even_degree(d);
    if n > MAX_SOS_VARS {
        return Err(Error::Capacity(format!("{n} variables exceeds {MAX_SOS_VARS}")));
    }
    let order = (d / 2).min(n);
    if basis_size(n, order) > MAX_BASIS {
        return Err(Error::Capacity(format!("basis size {} exceeds {MAX_BASIS}", basis_size(n, order))));
    }
    let (form, index, gammas) = character_formulation(f, d)?;
    let (sol, _) = solve_admm(&form, tol)?;
    let (g_chi, c, _spread) = form.best_primal(&sol.x)?;

    // Dual: D̂(γ) = −y_γ / ‖B_γ‖, then mix with the uniform density until PSD.
    let mut coeffs = vec![0.0; 1 << n];
    coeffs[0] = 1.0;
    for (k, &(gamma, norm)) in gammas.iter().enumerate() {
        coeffs[gamma] = -sol.y[k] / norm;
    }
    let r = index.len();
    let moment = SymMatrix::from_fn(r, |i, j| coeffs[(index[i] ^ index[j]) as usize]);
    let lam = moment.min_eigenvalue()?;
    let theta = if lam < 0.0 { (-lam / (1.0 - lam)) * (1.0 + 1e-9) + 1e-15 } else { 0.0 };
    for (gamma, v) in coeffs.iter_mut().enumerate() {
        if gamma != 0 {
            *v *= 1.0 - theta;
        }
    }
    let dfun = CubeFunction::from_fourier(n, &coeffs)?;
    let density = PseudoDensity::sos(dfun, d)?;
    let value = density.pair(f)?;
    let gap = c - value;
    if gap > tol {
        return Err(Error::NonConvergence { iterations: sol.iterations, residual: gap });
    }

    let conv = character_to_monomial(&index);
    let gram = conv.congruence_t(&g_chi);
    let basis = monomial_basis(n, order)?;
    let squares = extract_squares(&gram, &basis)?;
    let certificate = SosCertificate {
        c,
        degree: Some(d),
        descriptor: BasisDescriptor::Monomial { n, order },
        basis,
        gram,
        squares,
    };
    Ok(SosSolution { certificate, dual: SosDualSolution { density, value }, gap, iterations: sol.iterations })
}

/// Least `c` such that `c − f` is a sum of squares of functions in
/// `span(basis)`.
pub fn subspace_sos_upper_bound(f: &CubeFunction, basis: &[CubeFunction], tol: f64) -> Result<SubspaceSolution> {
    let n = f.n();
    if basis.is_empty() {
        return Err(Error::InvalidInput("empty basis".into()));
    }
    if basis.len() > MAX_BASIS {
        return Err(Error::Capacity(format!("basis size {} exceeds {MAX_BASIS}", basis.len())));
    }
    if basis.iter().any(|u| u.n() != n) {
        return Err(Error::ShapeMismatch("basis functions must live on the same cube as f".into()));
    }
    let npts = 1usize << n;
    let r = basis.len();
    let s = svec_len(r);
    if npts.saturating_mul(s) > 50_000_000 {
        return Err(Error::Capacity("subspace problem too large".into()));
    }
    let gram_u = SymMatrix::from_fn(r, |i, j| {
        basis[i].values().iter().zip(basis[j].values()).map(|(a, b)| a * b).sum::<f64>() / npts as f64
    });
    let gmin = gram_u.min_eigenvalue()?;
    if gmin <= 1e-10 {
        return Err(Error::InvalidInput(format!("basis is linearly dependent (Gram min eigenvalue {gmin:e})")));
    }
    // Solve over the whitened basis u' = W u with W = Gram^{-1/2}, so that
    // E u' u'ᵀ = Id; the Gram matrix is mapped back as G = W G' W.
    let w = gram_u.inv_sqrt_pd()?;
    let tables: Vec<Vec<f64>> = (0..r)
        .map(|k| (0..npts).map(|x| (0..r).map(|i| w.get(k, i) * basis[i].values()[x]).sum()).collect())
        .collect();
    // Z = P K: centered svec products, one row per point.
    let mut z: Vec<Vec<f64>> = (0..npts)
        .map(|x| {
            let mut v = vec![0.0; s];
            for i in 0..r {
                for j in i..r {
                    let w = if i == j { 1.0 } else { SQRT2 };
                    v[svec_pos(r, i, j)] = w * tables[i][x] * tables[j][x];
                }
            }
            v
        })
        .collect();
    let mut cvec = vec![0.0; s];
    for row in &z {
        for (c, v) in cvec.iter_mut().zip(row) {
            *c += v / npts as f64;
        }
    }
    for row in z.iter_mut() {
        for (v, c) in row.iter_mut().zip(&cvec) {
            *v -= c;
        }
    }
    let fmean = f.mean();
    let pf: Vec<f64> = f.values().iter().map(|v| v - fmean).collect();
    // Modified Gram-Schmidt on the rows of Z, tracking coefficients.
    let zmax = z.iter().map(|r| r.iter().map(|v| v * v).sum::<f64>().sqrt()).fold(0.0, f64::max);
    let mut q: Vec<Vec<f64>> = Vec::new();
    let mut coef: Vec<Vec<f64>> = Vec::new();
    for (x, row) in z.iter().enumerate() {
        let mut v = row.clone();
        let mut cx = vec![0.0; npts];
        cx[x] = 1.0;
        for _pass in 0..2 {
            for (qk, ck) in q.iter().zip(&coef) {
                let t: f64 = qk.iter().zip(&v).map(|(a, b)| a * b).sum();
                for (vi, qi) in v.iter_mut().zip(qk) {
                    *vi -= t * qi;
                }
                for (ci, cki) in cx.iter_mut().zip(ck) {
                    *ci -= t * cki;
                }
            }
        }
        let nv = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        if nv > 1e-10 * zmax.max(1e-300) {
            v.iter_mut().for_each(|a| *a /= nv);
            cx.iter_mut().for_each(|a| *a /= nv);
            q.push(v);
            coef.push(cx);
        }
    }
    let b: Vec<f64> = coef.iter().map(|ck| -ck.iter().zip(&pf).map(|(a, b)| a * b).sum::<f64>()).collect();
    let form = Formulation {
        problem: Problem { r, c: cvec.clone(), rows: q.into_iter().map(Row::dense).collect(), b },
        tables: tables.clone(),
        f: f.values().to_vec(),
    };
    let (sol, _) = solve_admm(&form, tol)?;
    let (gram_w, c, spread) = form.best_primal(&sol.x)?;
    let gram = gram_w.congruence(&w);
    if spread > 1e-6 * (1.0 + f.sup_norm()) {
        return Err(Error::Infeasible(format!(
            "f minus a constant is not in the span of products of the basis (spread {spread:e})"
        )));
    }
    // D = 1 − N·P z with z = Σ y_k coef_k.
    let mut zz = vec![0.0; npts];
    for (yk, ck) in sol.y.iter().zip(&coef) {
        for (a, b) in zz.iter_mut().zip(ck) {
            *a += yk * b;
        }
    }
    let zmean = zz.iter().sum::<f64>() / npts as f64;
    let dvals: Vec<f64> = zz.iter().map(|v| 1.0 - npts as f64 * (v - zmean)).collect();
    let sd = SymMatrix::from_fn(r, |i, j| {
        (0..npts).map(|x| dvals[x] * tables[i][x] * tables[j][x]).sum::<f64>() / npts as f64
    });
    let lam = sd.min_eigenvalue()?;
    let theta = if lam < 0.0 { (-lam / (1.0 - lam)) * (1.0 + 1e-9) + 1e-15 } else { 0.0 };
    let dual = CubeFunction::new(n, dvals.iter().map(|v| (1.0 - theta) * v + theta).collect())?;
    let dual_value = dual.inner(f)?;
    let gap = c - dual_value;
    if gap > tol {
        return Err(Error::NonConvergence { iterations: sol.iterations, residual: gap });
    }
    let squares = extract_squares(&gram, basis)?;
    let certificate = SosCertificate {
        c,
        degree: None,
        descriptor: BasisDescriptor::Custom,
        basis: basis.to_vec(),
        gram,
        squares,
    };
    Ok(SubspaceSolution { certificate, dual, dual_value, gap })
}

/// `g_t = √λ_t Σ_A V_{A,t} basis_A` over the eigenpairs of `gram`.
pub fn extract_squares(gram: &SymMatrix, basis: &[CubeFunction]) -> Result<Vec<CubeFunction>> {
    let r = gram.dim();
    if basis.len() != r {
        return Err(Error::ShapeMismatch(format!("gram is {r}x{r} but basis has {} functions", basis.len())));
    }
    if r == 0 {
        return Ok(Vec::new());
    }
    let n = basis[0].n();
    let e = gram.eig()?;
    let lmax = e.values[r - 1].max(0.0);
    if e.values[0] < -1e-8 * lmax.max(1.0) {
        return Err(Error::NotPsd(e.values[0]));
    }
    let mut out = Vec::new();
    for t in (0..r).rev() {
        let l = e.values[t];
        if l <= SQUARE_DROP * lmax {
            continue;
        }
        let s = l.sqrt();
        let v = e.vector(t);
        let mut vals = vec![0.0; 1 << n];
        for (a, u) in basis.iter().enumerate() {
            let w = s * v[a];
            if w == 0.0 {
                continue;
            }
            for (o, b) in vals.iter_mut().zip(u.values()) {
                *o += w * b;
            }
        }
        out.push(CubeFunction::new(n, vals)?);
    }
    Ok(out)
}

/// Checks the pointwise identity `c − f = Σ g_t²` within
/// `tol·max(1, ‖f‖_∞)`, PSD-ness of the Gram matrix within 1e-8 and, for
/// monomial certificates, `deg g_t ≤ d/2`.
pub fn verify_certificate(f: &CubeFunction, cert: &SosCertificate, tol: f64) -> CertificateReport {
    let mut max_residual = 0.0f64;
    let shapes_ok = cert.squares.iter().all(|g| g.n() == f.n());
    if shapes_ok {
        for x in 0..1u32 << f.n() {
            let s: f64 = cert.squares.iter().map(|g| g.eval(x).powi(2)).sum();
            max_residual = max_residual.max((cert.c - f.eval(x) - s).abs());
        }
    } else {
        max_residual = f64::INFINITY;
    }
    let gram_min_eigenvalue = cert.gram.min_eigenvalue().unwrap_or(f64::NEG_INFINITY);
    let psd_ok = gram_min_eigenvalue >= -1e-8;
    let max_square_degree = cert.squares.iter().map(|g| g.degree()).max().unwrap_or(0);
    let degree_ok = match cert.degree {
        Some(d) => max_square_degree <= d / 2,
        None => true,
    };
    let identity_ok = max_residual <= tol * f.sup_norm().max(1.0);
    CertificateReport {
        passed: identity_ok && psd_ok && degree_ok,
        identity_ok,
        psd_ok,
        degree_ok,
        max_residual,
        gram_min_eigenvalue,
        max_square_degree,
    }
}

/// Smallest even `d` for which `f` is a sum of squares of degree-`d/2`
/// functions, found by a feasibility sweep `d = 2, 4, …, 2n`.
pub fn sos_degree(f: &CubeFunction, tol: f64) -> Result<SosDegree> {
    let n = f.n();
    if n > 10 {
        return Err(Error::Capacity(format!("{n} variables exceeds 10")));
    }
    let fmin = f.min();
    if fmin < -tol {
        return Err(Error::Domain(format!("f is negative somewhere (min {fmin:e})")));
    }
    let scale = f.sup_norm().max(1.0);
    let neg = f.scale(-1.0);
    let fdeg = f.degree();
    let mut witnesses = Vec::new();
    let mut d = 2;
    while d <= 2 * n.max(1) {
        if fdeg > d {
            witnesses.push((d, high_degree_witness(f, d)?));
            d += 2;
            continue;
        }
        let sol = sos_upper_bound(&neg, d, tol.min(1e-7))?;
        let cert = &sol.certificate;
        // f = Σ g² + max(0, −c): fold the constant into the Gram entry of 1.
        let shift = (-cert.c).max(0.0);
        let mut gram = cert.gram.clone();
        gram = gram.with_entry(0, 0, gram.get(0, 0) + shift);
        let mut resid = 0.0f64;
        let r = cert.basis.len();
        let mut u = vec![0.0; r];
        for x in 0..1u32 << n {
            for (k, b) in cert.basis.iter().enumerate() {
                u[k] = b.eval(x);
            }
            resid = resid.max((f.eval(x) - gram.quad_form(&u)).abs());
        }
        if resid < CERT_TOL * scale {
            let squares = extract_squares(&gram, &cert.basis)?;
            let certificate = SosCertificate { c: 0.0, gram, squares, ..cert.clone() };
            return Ok(SosDegree { degree: d, certificate, witnesses });
        }
        // Infeasible: the dual of sos_d(−f) has E D (−f) ≈ c > 0.
        let value = sol.dual.density.pair(f)?;
        if value >= 0.0 {
            return Err(Error::NonConvergence { iterations: sol.iterations, residual: resid });
        }
        witnesses.push((d, SosDualSolution { density: sol.dual.density, value }));
        d += 2;
    }
    Err(Error::NonConvergence { iterations: 0, residual: f64::NAN })
}

/// For `deg f > d`: `D = 1 − t·f_{>d}` has the uniform moments up to degree
/// `d` and `E D f = −1`.
pub fn high_degree_witness(f: &CubeFunction, d: usize) -> Result<SosDualSolution> {
    let n = f.n();
    let high = f.fourier_filter(|a| popcount(a) > d);
    let h2 = high.inner(&high)?;
    if h2 <= 1e-24 {
        return Err(Error::InvalidInput(format!("f has no Fourier mass above degree {d}")));
    }
    let t = (f.mean() + 1.0) / h2;
    let dfun = CubeFunction::from_fn(n, |x| 1.0 - t * high.eval(x))?;
    let density = PseudoDensity::sos(dfun, d)?;
    let value = density.pair(f)?;
    debug_assert!(validate_sos_pseudo_density(&density, d, 1e-8).map(|v| v.passed).unwrap_or(false));
    Ok(SosDualSolution { density, value })
}
