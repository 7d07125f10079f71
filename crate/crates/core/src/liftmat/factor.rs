use std::collections::HashMap;

use rayon::prelude::*;

use super::pattern::{DenseMatrix, EntryMatrix, PatternMatrix};
use crate::cube::{deposit_mask, subsets_up_to, CubeFunction};
use crate::error::{Error, Result};
use crate::rng::SplitMix64;
use crate::sos::{subspace_sos_upper_bound, verify_certificate, BasisDescriptor, SosCertificate, CERT_TOL};
use crate::symmat::{SymMatrix, MAX_DIM};

/// `M_ij = Tr(P_i Q_j)` with `r x r` PSD factors.
#[derive(Debug, Clone, PartialEq)]
pub struct PsdFactorization {
    pub r: usize,
    pub p: Vec<SymMatrix>,
    pub q: Vec<SymMatrix>,
}

impl PsdFactorization {
    pub fn new(p: Vec<SymMatrix>, q: Vec<SymMatrix>) -> Result<Self> {
        let r = p.first().or(q.first()).map(|a| a.dim()).unwrap_or(0);
        if p.iter().chain(&q).any(|a| a.dim() != r) {
            return Err(Error::ShapeMismatch("factors must share one dimension".into()));
        }
        Ok(Self { r, p, q })
    }
}

impl EntryMatrix for PsdFactorization {
    fn shape(&self) -> (usize, usize) {
        (self.p.len(), self.q.len())
    }

    fn entry(&self, i: usize, j: usize) -> f64 {
        self.p[i].dot(&self.q[j])
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FactorizationReport {
    pub passed: bool,
    pub max_residual: f64,
    pub min_p_eigenvalue: f64,
    pub min_q_eigenvalue: f64,
    pub entries_checked: usize,
}

/// Max entrywise `|M_ij − Tr(P_i Q_j)|` and PSD-ness of every factor
/// (within 1e-8).
pub fn verify_psd_factorization(m: &dyn EntryMatrix, fact: &PsdFactorization, tol: f64) -> FactorizationReport {
    let (p, q) = m.shape();
    if fact.shape() != (p, q) {
        return FactorizationReport {
            passed: false,
            max_residual: f64::INFINITY,
            min_p_eigenvalue: f64::NAN,
            min_q_eigenvalue: f64::NAN,
            entries_checked: 0,
        };
    }
    let max_residual = (0..p)
        .into_par_iter()
        .map(|i| (0..q).map(|j| (m.entry(i, j) - fact.entry(i, j)).abs()).fold(0.0, f64::max))
        .reduce(|| 0.0, f64::max);
    let min_eig = |v: &[SymMatrix]| {
        v.par_iter().map(|a| a.min_eigenvalue().unwrap_or(f64::NEG_INFINITY)).reduce(|| f64::INFINITY, f64::min)
    };
    let min_p_eigenvalue = min_eig(&fact.p);
    let min_q_eigenvalue = min_eig(&fact.q);
    FactorizationReport {
        passed: max_residual <= tol && min_p_eigenvalue >= -1e-8 && min_q_eigenvalue >= -1e-8,
        max_residual,
        min_p_eigenvalue,
        min_q_eigenvalue,
        entries_checked: p * q,
    }
}

/// Factorization of `M_n^f` from a certificate `f = Σ_j g_j²` over the
/// monomials of degree `≤ k` on `{0,1}^m`: `(Q_x)_{A,B} = x^A x^B` and
/// `(P_S)_{A,B} = Σ_j ĝ_{S,j}(A) ĝ_{S,j}(B)` over `F = {A ⊆ [n] : |A| ≤ k}`.
/// The sum over `j` equals the certificate's Gram matrix placed on the
/// coordinates of `S`.
pub fn explicit_psd_factorization(f: &CubeFunction, cert: &SosCertificate, n: usize) -> Result<PsdFactorization> {
    let m = f.n();
    let order = match cert.descriptor {
        BasisDescriptor::Monomial { n: cm, order } if cm == m => order,
        _ => return Err(Error::InvalidCertificate("certificate must use the monomial basis on f's cube".into())),
    };
    // The certificate must express f itself: 0 − (−f) = Σ g².
    let target = f.scale(-1.0);
    let mut shifted = cert.clone();
    shifted.c = 0.0;
    let rep = verify_certificate(&target, &shifted, CERT_TOL);
    if !rep.passed {
        return Err(Error::InvalidCertificate(format!(
            "certificate does not express f as a sum of squares (residual {:e})",
            rep.max_residual
        )));
    }
    let pattern = PatternMatrix::new(f.clone(), n)?;
    let family = subsets_up_to(n, order);
    let r = family.len();
    if r > MAX_DIM {
        return Err(Error::Capacity(format!("factor dimension {r} exceeds {MAX_DIM}")));
    }
    let pos: HashMap<u32, usize> = family.iter().enumerate().map(|(i, &a)| (a, i)).collect();
    let local = subsets_up_to(m, order);
    let p = pattern
        .row_sets()
        .par_iter()
        .map(|&s| {
            let idx: Vec<usize> = local.iter().map(|&a| pos[&deposit_mask(a, s)]).collect();
            let mut full = vec![0.0; r * r];
            for (a, &ia) in idx.iter().enumerate() {
                for (b, &ib) in idx.iter().enumerate() {
                    full[ia * r + ib] = cert.gram.get(a, b);
                }
            }
            SymMatrix::from_full(r, &full)
        })
        .collect::<Result<Vec<_>>>()?;
    let q = (0..1u32 << n)
        .map(|x| {
            let v: Vec<f64> = family.iter().map(|&a| if x & a == a { 1.0 } else { 0.0 }).collect();
            SymMatrix::outer(&v)
        })
        .collect();
    PsdFactorization::new(p, q)
}

/// Result of [`pre_balance`].
#[derive(Debug, Clone, PartialEq)]
pub struct Balanced {
    pub factorization: PsdFactorization,
    pub t: f64,
    /// `max_i ‖A_i‖ · max_j ‖B_j‖_*` before and after.
    pub product_before: f64,
    pub product_after: f64,
}

fn max_op(v: &[SymMatrix]) -> Result<f64> {
    v.iter().map(|a| a.operator_norm()).try_fold(0.0f64, |m, x| x.map(|x| m.max(x)))
}

fn max_trace_norm(v: &[SymMatrix]) -> Result<f64> {
    v.iter().map(|a| a.trace_norm()).try_fold(0.0f64, |m, x| x.map(|x| m.max(x)))
}

/// `A_i → A_i/t`, `B_j → t B_j` with `t = sqrt(max‖A_i‖ / max‖B_j‖_*)`,
/// which equalizes the two maxima.
pub fn pre_balance(fact: &PsdFactorization) -> Result<Balanced> {
    let a = max_op(&fact.p)?;
    let b = max_trace_norm(&fact.q)?;
    if a == 0.0 || b == 0.0 {
        return Err(Error::InvalidInput("zero factor family".into()));
    }
    let t = (a / b).sqrt();
    let p = fact.p.iter().map(|x| x.scale(1.0 / t)).collect();
    let q = fact.q.iter().map(|x| x.scale(t)).collect();
    let factorization = PsdFactorization { r: fact.r, p, q };
    let product_after = max_op(&factorization.p)? * max_trace_norm(&factorization.q)?;
    Ok(Balanced { factorization, t, product_before: a * b, product_after })
}

/// Postcondition report of [`rescale_factorization`].
#[derive(Debug, Clone, PartialEq)]
pub struct RescaleReport {
    pub r: usize,
    pub eta: f64,
    /// `‖M‖_∞`.
    pub m_inf: f64,
    /// `max_i ‖A_i‖ · max_j ‖B_j‖_*` of the input.
    pub gamma: f64,
    /// (1): largest violation of `M ≤ Tr(PQ) ≤ M + η‖M‖_∞`.
    pub item1_violation: f64,
    /// (2): `‖mean P_i − Id‖_max`.
    pub item2_error: f64,
    /// (3): `max ‖P_i‖` with the bound `2γ/(η‖M‖_∞)` and the bound `2r²/η`.
    pub max_p_norm: f64,
    pub p_bound_balanced: f64,
    pub p_bound_rank: f64,
    /// (4): `max λ_max(Q_j)` with the bound `γ + η‖M‖_∞` and `‖M‖_∞(η + r²)`.
    pub max_q_eigenvalue: f64,
    pub q_bound_balanced: f64,
    pub q_bound_rank: f64,
    /// Items (1) to (4), each within 1e-8.
    pub items: [bool; 4],
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Rescaled {
    pub factorization: PsdFactorization,
    pub report: RescaleReport,
}

/// Normalizes so that `max ‖B_j‖_* = 1`, then sets
/// `A = η‖M‖_∞ Id + mean A_i`, `P_i = A^{-1/2}(η‖M‖_∞ Id + A_i)A^{-1/2}` and
/// `Q_j = A^{1/2} B_j A^{1/2}`, and checks the four postconditions within 1e-8.
pub fn rescale_factorization(m: &dyn EntryMatrix, fact: &PsdFactorization, eta: f64) -> Result<Rescaled> {
    if !(eta > 0.0 && eta <= 1.0) {
        return Err(Error::Domain(format!("eta = {eta} must lie in (0, 1]")));
    }
    let (pn, qn) = m.shape();
    if fact.shape() != (pn, qn) || pn == 0 || qn == 0 {
        return Err(Error::ShapeMismatch("factorization shape differs from M".into()));
    }
    let r = fact.r;
    let m_inf = m.max_abs();
    if m_inf == 0.0 {
        return Err(Error::InvalidInput("M is zero".into()));
    }
    let beta = max_trace_norm(&fact.q)?;
    if beta == 0.0 {
        return Err(Error::InvalidInput("zero column factors".into()));
    }
    let a_fam: Vec<SymMatrix> = fact.p.iter().map(|a| a.scale(beta)).collect();
    let b_fam: Vec<SymMatrix> = fact.q.iter().map(|b| b.scale(1.0 / beta)).collect();
    let gamma = max_op(&a_fam)?;
    let eps = eta * m_inf;
    let mut mean = SymMatrix::zeros(r);
    for a in &a_fam {
        mean = mean.add(a);
    }
    let big_a = mean.scale(1.0 / pn as f64).add(&SymMatrix::scalar(r, eps));
    let a_isqrt = big_a.inv_sqrt_pd().map_err(|_| Error::Domain("A is singular".into()))?;
    let a_sqrt = big_a.sqrt_psd()?;
    let p: Vec<SymMatrix> =
        a_fam.par_iter().map(|a| a.add(&SymMatrix::scalar(r, eps)).congruence(&a_isqrt)).collect();
    let q: Vec<SymMatrix> = b_fam.par_iter().map(|b| b.congruence(&a_sqrt)).collect();
    let factorization = PsdFactorization { r, p, q };

    let item1_violation = (0..pn)
        .into_par_iter()
        .map(|i| {
            (0..qn)
                .map(|j| {
                    let t = factorization.entry(i, j);
                    let mij = m.entry(i, j);
                    (mij - t).max(t - mij - eps).max(0.0)
                })
                .fold(0.0, f64::max)
        })
        .reduce(|| 0.0, f64::max);
    let mut pmean = SymMatrix::zeros(r);
    for a in &factorization.p {
        pmean = pmean.add(a);
    }
    let item2_error = pmean.scale(1.0 / pn as f64).sub(&SymMatrix::identity(r)).max_abs();
    let max_p_norm = max_op(&factorization.p)?;
    let max_q_eigenvalue = factorization
        .q
        .iter()
        .map(|b| b.max_eigenvalue())
        .try_fold(f64::NEG_INFINITY, |acc, x| x.map(|x| acc.max(x)))?;
    let p_bound_balanced = 2.0 * gamma / eps;
    let q_bound_balanced = gamma + eps;
    let rr = (r * r) as f64;
    let tol = 1e-8;
    let items = [
        item1_violation <= tol * m_inf.max(1.0),
        item2_error <= tol,
        max_p_norm <= p_bound_balanced * (1.0 + tol),
        max_q_eigenvalue <= q_bound_balanced * (1.0 + tol),
    ];
    let report = RescaleReport {
        r,
        eta,
        m_inf,
        gamma,
        item1_violation,
        item2_error,
        max_p_norm,
        p_bound_balanced,
        p_bound_rank: 2.0 * rr / eta,
        max_q_eigenvalue,
        q_bound_balanced,
        q_bound_rank: m_inf * (eta + rr),
        items,
        passed: items.iter().all(|&b| b),
    };
    Ok(Rescaled { factorization, report })
}

/// Factorization of `M(i, x) = c − f_i(x)` from sum-of-squares certificates
/// over `span(basis)`: `Q(x) = u(x)u(x)ᵀ` and `P_i = Λ_i`. Returns the
/// factorization together with `M`.
pub fn factorization_from_subspace(
    basis: &[CubeFunction],
    instances: &[(CubeFunction, f64)],
    tol: f64,
) -> Result<(PsdFactorization, DenseMatrix)> {
    let Some(first) = basis.first() else {
        return Err(Error::InvalidInput("empty basis".into()));
    };
    let n = first.n();
    let npts = 1usize << n;
    let r = basis.len();
    // Coefficients of the constant function in the basis, if it lies in the span.
    let one = constant_coefficients(basis)?;
    let mut p = Vec::with_capacity(instances.len());
    let mut rows = Vec::with_capacity(instances.len() * npts);
    for (k, (f, c)) in instances.iter().enumerate() {
        let sol = subspace_sos_upper_bound(f, basis, tol)?;
        let cert = sol.certificate;
        if cert.c > c + tol * f.sup_norm().max(1.0) {
            return Err(Error::InvalidCertificate(format!(
                "instance {k}: best bound {} exceeds c = {c}",
                cert.c
            )));
        }
        let slack = (c - cert.c).max(0.0);
        let lam = if slack > 0.0 {
            let Some(w) = &one else {
                return Err(Error::InvalidCertificate(format!(
                    "instance {k}: slack {slack:e} needs the constant function in the span"
                )));
            };
            cert.gram.add(&SymMatrix::outer(w).scale(slack))
        } else {
            cert.gram
        };
        p.push(lam);
        rows.extend(f.values().iter().map(|v| c - v));
    }
    let q = (0..npts)
        .map(|x| SymMatrix::outer(&basis.iter().map(|u| u.values()[x]).collect::<Vec<_>>()))
        .collect();
    let fact = PsdFactorization { r, p, q };
    Ok((fact, DenseMatrix::new(instances.len(), npts, rows)?))
}

/// Least-squares coefficients `w` with `Σ w_i u_i = 1`, when exact.
fn constant_coefficients(basis: &[CubeFunction]) -> Result<Option<Vec<f64>>> {
    let r = basis.len();
    let npts = basis[0].values().len();
    let gram = SymMatrix::from_fn(r, |i, j| basis[i].values().iter().zip(basis[j].values()).map(|(a, b)| a * b).sum());
    let rhs: Vec<f64> = basis.iter().map(|u| u.values().iter().sum()).collect();
    let inv = gram.try_map_spectrum(|l| (l > 1e-12).then(|| 1.0 / l))?;
    let w = inv.mul_vec(&rhs);
    let err = (0..npts)
        .map(|x| (basis.iter().zip(&w).map(|(u, wi)| wi * u.values()[x]).sum::<f64>() - 1.0).abs())
        .fold(0.0, f64::max);
    Ok((err < 1e-9).then_some(w))
}

/// Linearly independent subset of the entry functions `x ↦ R(x)_{ij}`,
/// `i ≤ j`, of `R(x) = Q(x)^{1/2}`; columns must be indexed by `{0,1}^n`.
pub fn subspace_from_factorization(fact: &PsdFactorization) -> Result<Vec<CubeFunction>> {
    let npts = fact.q.len();
    if !npts.is_power_of_two() {
        return Err(Error::ShapeMismatch(format!("{npts} columns is not a cube")));
    }
    let n = npts.trailing_zeros() as usize;
    let r = fact.r;
    let roots: Vec<SymMatrix> = fact.q.par_iter().map(|q| q.sqrt_psd()).collect::<Result<_>>()?;
    let mut kept: Vec<Vec<f64>> = Vec::new();
    let mut ortho: Vec<Vec<f64>> = Vec::new();
    let scale = roots.iter().map(|m| m.max_abs()).fold(0.0, f64::max).max(1e-300);
    for i in 0..r {
        for j in i..r {
            let v: Vec<f64> = roots.iter().map(|m| m.get(i, j)).collect();
            let mut w = v.clone();
            for _ in 0..2 {
                for o in &ortho {
                    let t: f64 = o.iter().zip(&w).map(|(a, b)| a * b).sum();
                    w.iter_mut().zip(o).for_each(|(a, b)| *a -= t * b);
                }
            }
            let nw = w.iter().map(|a| a * a).sum::<f64>().sqrt();
            let nv = v.iter().map(|a| a * a).sum::<f64>().sqrt();
            if nv > 1e-9 * scale * (npts as f64).sqrt() && nw > 1e-6 * nv {
                w.iter_mut().for_each(|a| *a /= nw);
                ortho.push(w);
                kept.push(v);
            }
        }
    }
    kept.into_iter().map(|v| CubeFunction::new(n, v)).collect()
}

/// Sum of `rank` outer products of standard Gaussian vectors.
pub fn random_psd(r: usize, rank: usize, rng: &mut SplitMix64) -> SymMatrix {
    let vs: Vec<Vec<f64>> = (0..rank).map(|_| (0..r).map(|_| rng.normal()).collect()).collect();
    SymMatrix::weighted_outer_sum(r, vs.iter().map(|v| (1.0, v.as_slice())))
}

/// Random `rows × cols` bundle of `r × r` PSD factors, each of rank `rank`.
pub fn random_psd_factorization(r: usize, rank: usize, rows: usize, cols: usize, rng: &mut SplitMix64) -> Result<PsdFactorization> {
    let p = (0..rows).map(|_| random_psd(r, rank, rng)).collect();
    let q = (0..cols).map(|_| random_psd(r, rank, rng)).collect();
    PsdFactorization::new(p, q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pseudo::knapsack_function;
    use crate::sos::sos_degree;
    use approx::assert_abs_diff_eq;

    fn dictator_cert() -> (CubeFunction, SosCertificate) {
        let f = CubeFunction::monomial(1, 1).unwrap();
        let basis = vec![CubeFunction::monomial(1, 0).unwrap(), f.clone()];
        let gram = SymMatrix::diag(&[0.0, 1.0]);
        let cert = SosCertificate {
            c: 0.0,
            degree: Some(2),
            descriptor: BasisDescriptor::Monomial { n: 1, order: 1 },
            squares: crate::sos::extract_squares(&gram, &basis).unwrap(),
            basis,
            gram,
        };
        (f, cert)
    }

    #[test]
    fn dictator_factorization() {
        let (f, cert) = dictator_cert();
        let fact = explicit_psd_factorization(&f, &cert, 2).unwrap();
        assert_eq!(fact.r, 3);
        let m = PatternMatrix::new(f, 2).unwrap();
        let rep = verify_psd_factorization(&m, &fact, 1e-12);
        assert!(rep.passed, "{rep:?}");
    }

    #[test]
    fn constant_factorization_has_rank_one() {
        let f = CubeFunction::constant(2, 1.0).unwrap();
        let basis = vec![CubeFunction::constant(2, 1.0).unwrap()];
        let gram = SymMatrix::identity(1);
        let cert = SosCertificate {
            c: 0.0,
            degree: Some(0),
            descriptor: BasisDescriptor::Monomial { n: 2, order: 0 },
            squares: crate::sos::extract_squares(&gram, &basis).unwrap(),
            basis,
            gram,
        };
        let fact = explicit_psd_factorization(&f, &cert, 3).unwrap();
        assert_eq!(fact.r, 1);
        assert!(fact.p.iter().chain(&fact.q).all(|a| a.get(0, 0) == 1.0));
    }

    #[test]
    fn knapsack_factorization_size() {
        let f = knapsack_function(3).unwrap();
        let deg = sos_degree(&f, 1e-9).unwrap();
        let fact = explicit_psd_factorization(&f, &deg.certificate, 6).unwrap();
        assert_eq!(fact.r, 1 + 6 + 15);
        let m = PatternMatrix::new(f, 6).unwrap();
        assert!(verify_psd_factorization(&m, &fact, 1e-8).passed);
    }

    #[test]
    fn scalar_rescale_closed_form() {
        // M = [2] = 1·2, η = 1: β = 2, A = 2, ε = 2, P = 1, Q = 2·(1) = 2, Tr = 2 + 2·1.
        let m = DenseMatrix::new(1, 1, vec![2.0]).unwrap();
        let fact = PsdFactorization::new(vec![SymMatrix::scalar(1, 1.0)], vec![SymMatrix::scalar(1, 2.0)]).unwrap();
        let out = rescale_factorization(&m, &fact, 1.0).unwrap();
        assert_abs_diff_eq!(out.factorization.p[0].get(0, 0), 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(out.factorization.q[0].get(0, 0), 4.0, epsilon = 1e-14);
        assert!(out.report.passed);
    }

    #[test]
    fn random_rescale_passes() {
        let mut rng = SplitMix64::new(11);
        let p: Vec<_> = (0..10).map(|_| random_psd(4, 2, &mut rng)).collect();
        let q: Vec<_> = (0..10).map(|_| random_psd(4, 2, &mut rng)).collect();
        let fact = PsdFactorization::new(p, q).unwrap();
        let m = fact.to_dense().unwrap();
        let out = rescale_factorization(&m, &fact, 0.5).unwrap();
        assert!(out.report.passed, "{:?}", out.report);
        // Rescaling an already normalized factorization keeps the mean identity.
        let m2 = out.factorization.to_dense().unwrap();
        let again = rescale_factorization(&m2, &out.factorization, 0.5).unwrap();
        assert!(again.report.passed, "{:?}", again.report);
    }

    #[test]
    fn rejects_bad_eta() {
        let m = DenseMatrix::new(1, 1, vec![1.0]).unwrap();
        let fact = PsdFactorization::new(vec![SymMatrix::identity(1)], vec![SymMatrix::identity(1)]).unwrap();
        assert!(rescale_factorization(&m, &fact, 0.0).is_err());
        assert!(rescale_factorization(&m, &fact, 1.5).is_err());
    }

    #[test]
    fn balance_examples() {
        let fact = PsdFactorization::new(vec![SymMatrix::scalar(1, 4.0)], vec![SymMatrix::scalar(1, 1.0)]).unwrap();
        let b = pre_balance(&fact).unwrap();
        assert_abs_diff_eq!(b.t, 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(b.factorization.p[0].get(0, 0), 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(b.factorization.q[0].get(0, 0), 2.0, epsilon = 1e-15);
        let again = pre_balance(&b.factorization).unwrap();
        assert_abs_diff_eq!(again.t, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn subspace_factorization_examples() {
        let basis = vec![CubeFunction::constant(2, 1.0).unwrap()];
        let f = CubeFunction::constant(2, 0.0).unwrap();
        let (fact, m) = factorization_from_subspace(&basis, &[(f, 4.0)], 1e-8).unwrap();
        assert_abs_diff_eq!(fact.p[0].get(0, 0), 4.0, epsilon = 1e-7);
        assert_eq!(fact.q[0].get(0, 0), 1.0);
        assert!(verify_psd_factorization(&m, &fact, 1e-7).passed);
    }

    #[test]
    fn subspace_of_constant_identity() {
        let fact = PsdFactorization::new(vec![SymMatrix::identity(2)], vec![SymMatrix::identity(2); 4]).unwrap();
        let basis = subspace_from_factorization(&fact).unwrap();
        assert_eq!(basis.len(), 1);
        assert!(basis[0].values().iter().all(|&v| v == basis[0].values()[0]));
    }

    #[test]
    fn knapsack_round_trip() {
        let f = knapsack_function(3).unwrap();
        let deg = sos_degree(&f, 1e-9).unwrap();
        let n = 6;
        let fact = explicit_psd_factorization(&f, &deg.certificate, n).unwrap();
        let basis = subspace_from_factorization(&fact).unwrap();
        assert!(basis.len() <= fact.r * fact.r);
        let m = PatternMatrix::new(f, n).unwrap();
        for row in [0, 7, 19] {
            let vals: Vec<f64> = (0..1usize << n).map(|x| -m.entry(row, x)).collect();
            let neg = CubeFunction::new(n, vals).unwrap();
            let sol = subspace_sos_upper_bound(&neg, &basis, 1e-7).unwrap();
            // 0 − (−row) = Σ g² up to the bound c.
            assert!(sol.certificate.c < 1e-6, "row {row}: c = {}", sol.certificate.c);
            assert!(verify_certificate(&neg, &sol.certificate, 1e-6).passed);
        }
    }
}
