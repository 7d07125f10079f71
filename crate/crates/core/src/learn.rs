//! Approximation of high-entropy states by low-degree squares.
//!
//! Gibbs states, squared Taylor polynomials of the matrix exponential, mirror
//! descent against a family of tests and its classical specialization to
//! junta approximation over product measures.

use crate::cube::{bits, CubeFunction, ProductMeasure};
use crate::error::{Error, Result};
use crate::liftmat::PsdFactorization;
use crate::pseudo::PseudoDensity;
use crate::symmat::{horner, neg_entropy, quantum_relative_entropy, DensityMatrix, SymMatrix};

/// Largest `‖λF‖` accepted by `gibbs_state`.
pub const GIBBS_OVERFLOW_GUARD: f64 = 700.0;
/// Constant `C` used for the recorded degree bound of `low_degree_square_approx`.
pub const DEGREE_CONSTANT: f64 = 8.0;
/// Slack allowed on every approximation guarantee.
pub const GUARANTEE_SLACK: f64 = 1e-9;
/// Slack allowed on the per-step entropy decrease.
pub const ENTROPY_SLACK: f64 = 1e-6;

/// A nonempty family of symmetric test matrices with its width `Δ(T)`.
#[derive(Debug, Clone)]
pub struct TestFamily {
    tests: Vec<SymMatrix>,
    delta: f64,
    convex: bool,
}

impl TestFamily {
    /// `convex` declares that the family stands for its convex hull, which is
    /// what `approx_against_family` needs.
    pub fn new(tests: Vec<SymMatrix>, convex: bool) -> Result<Self> {
        let first = tests.first().ok_or_else(|| Error::InvalidInput("empty test family".into()))?;
        let dim = first.dim();
        let mut delta = 0.0f64;
        for t in &tests {
            if t.dim() != dim {
                return Err(Error::ShapeMismatch(format!("test of dim {} in family of dim {dim}", t.dim())));
            }
            delta = delta.max(t.operator_norm()?);
        }
        Ok(Self { tests, delta, convex })
    }

    pub fn tests(&self) -> &[SymMatrix] {
        &self.tests
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn dim(&self) -> usize {
        self.tests[0].dim()
    }

    pub fn is_convex(&self) -> bool {
        self.convex
    }

    pub fn len(&self) -> usize {
        self.tests.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tests.is_empty()
    }

    /// `[A]_T = max over tests of Tr(B A)`.
    pub fn gauge(&self, a: &SymMatrix) -> f64 {
        self.tests.iter().map(|t| t.dot(a)).fold(f64::NEG_INFINITY, f64::max)
    }
}

/// `e^{−λF} / Tr e^{−λF}`, computed with the spectrum shifted by its maximum.
pub fn gibbs_state(f: &SymMatrix, lambda: f64) -> Result<DensityMatrix> {
    let norm = lambda.abs() * f.operator_norm()?;
    if !(norm <= GIBBS_OVERFLOW_GUARD) {
        return Err(Error::Domain(format!("‖λF‖ = {norm:e} exceeds {GIBBS_OVERFLOW_GUARD}")));
    }
    exp_density(&f.scale(-lambda))
}

/// `e^H / Tr e^H` with the exponent shifted by `λ_max(H)`.
fn exp_density(h: &SymMatrix) -> Result<DensityMatrix> {
    let e = h.eig()?;
    let top = e.values.last().copied().unwrap_or(0.0);
    DensityMatrix::normalized(e.reconstruct_with(|l| (l - top).exp()))
}

/// `log Tr e^H`.
fn log_partition(h: &SymMatrix) -> Result<f64> {
    let vals = h.eigenvalues()?;
    let top = vals.last().copied().unwrap_or(0.0);
    Ok(top + vals.iter().map(|l| (l - top).exp()).sum::<f64>().ln())
}

/// `D(Q ‖ e^H/Tr e^H)` from the exponent.
fn relative_entropy_to_exp(q: &DensityMatrix, h: &SymMatrix) -> Result<f64> {
    Ok(neg_entropy(q)? - q.matrix().dot(h) + log_partition(h)?)
}

/// Outcome of the single-test guarantee check for a Gibbs state.
#[derive(Debug, Clone, PartialEq)]
pub struct GibbsCheck {
    /// `Tr(F X*)`.
    pub value: f64,
    /// `Tr(F Q)`.
    pub reference: f64,
    /// `D(Q ‖ U)`.
    pub entropy: f64,
    /// Smallest `λ` covered by the guarantee, `D(Q‖U)/ε`.
    pub lambda_required: f64,
    /// `λ ≥ lambda_required`.
    pub applies: bool,
    /// `Tr(F X*) ≤ Tr(F Q) + ε + 1e-9`.
    pub holds: bool,
}

/// Check `Tr(F X*) ≤ Tr(FQ) + ε` for `X* = gibbs_state(F, λ)`.
pub fn gibbs_check(f: &SymMatrix, lambda: f64, q: &DensityMatrix, eps: f64) -> Result<GibbsCheck> {
    let x = gibbs_state(f, lambda)?;
    let entropy = quantum_relative_entropy(q, &DensityMatrix::uniform(q.dim()))?;
    let value = f.dot(x.matrix());
    let reference = f.dot(q.matrix());
    let lambda_required = entropy / eps;
    Ok(GibbsCheck {
        value,
        reference,
        entropy,
        lambda_required,
        applies: lambda >= lambda_required,
        holds: value <= reference + eps + GUARANTEE_SLACK,
    })
}

/// `log(1/ε) / log log(1/ε)` with the denominator clamped below at 1/2.
pub fn log_ratio(eps: f64) -> f64 {
    let l = (1.0 / eps).ln();
    l / l.ln().max(0.5)
}

/// Taylor degree `⌊3e(τ + log(1/ε)/log log(1/ε))⌋` for `τ = ‖F‖`.
pub fn taylor_degree(tau: f64, eps: f64) -> usize {
    (3.0 * std::f64::consts::E * (tau + log_ratio(eps))).floor() as usize
}

/// Coefficients `1/t!` for `t = 0..=k`.
pub fn taylor_coefficients(k: usize) -> Vec<f64> {
    let mut c = Vec::with_capacity(k + 1);
    let mut term = 1.0;
    for t in 0..=k {
        if t > 0 {
            term /= t as f64;
        }
        c.push(term);
    }
    c
}

/// Trace-norm distance between `e^F/Tr e^F` and `p_k(F/2)²/Tr p_k(F/2)²`.
pub fn taylor_error(f: &SymMatrix, k: usize) -> Result<f64> {
    let vals = f.eigenvalues()?;
    let coeffs = taylor_coefficients(k);
    let top = vals.last().copied().unwrap_or(0.0);
    let e: Vec<f64> = vals.iter().map(|l| (l - top).exp()).collect();
    let p: Vec<f64> = vals.iter().map(|&l| horner(&coeffs, l / 2.0).powi(2)).collect();
    let (se, sp): (f64, f64) = (e.iter().sum(), p.iter().sum());
    if !(sp > 0.0) {
        return Ok(2.0);
    }
    Ok(e.iter().zip(&p).map(|(a, b)| (a / se - b / sp).abs()).sum())
}

/// Squared Taylor approximation of a normalized matrix exponential.
#[derive(Debug, Clone)]
pub struct TaylorApprox {
    pub k: usize,
    /// `1/t!` for `t ≤ k`.
    pub coefficients: Vec<f64>,
    pub density: DensityMatrix,
    /// Measured trace-norm error.
    pub error: f64,
    pub eps: f64,
    pub holds: bool,
}

/// `p_k(F/2)² / Tr p_k(F/2)²` with `k` from `taylor_degree(‖F‖, ε)`.
pub fn taylor_square_approx(f: &SymMatrix, eps: f64) -> Result<TaylorApprox> {
    if !(eps > 0.0 && eps < 0.5) {
        return Err(Error::Domain(format!("ε = {eps} outside (0, 1/2)")));
    }
    let k = taylor_degree(f.operator_norm()?, eps);
    let coefficients = taylor_coefficients(k);
    let density = DensityMatrix::normalized(f.eig()?.reconstruct_with(|l| horner(&coefficients, l / 2.0).powi(2)))?;
    let error = taylor_error(f, k)?;
    Ok(TaylorApprox { k, coefficients, density, error, eps, holds: error <= eps + GUARANTEE_SLACK })
}

/// A state of the form `e^{−λF}` or `p_k(−λF/2)²`, normalized.
#[derive(Debug, Clone)]
pub struct GibbsApproximator {
    pub f: SymMatrix,
    pub lambda: f64,
    /// Taylor coefficients `p_k` (nonnegative) when the exponential is replaced by a square.
    pub taylor: Option<Vec<f64>>,
}

impl GibbsApproximator {
    pub fn state(&self) -> Result<DensityMatrix> {
        match &self.taylor {
            None => gibbs_state(&self.f, self.lambda),
            Some(c) => {
                let s = -self.lambda / 2.0;
                DensityMatrix::normalized(self.f.eig()?.reconstruct_with(|l| horner(c, s * l).powi(2)))
            }
        }
    }

    /// Degree of `p(x) = p_k(−λx/2)` as a polynomial in `F`.
    pub fn degree(&self) -> usize {
        match &self.taylor {
            Some(c) if self.lambda != 0.0 => c.len() - 1,
            _ => 0,
        }
    }
}

/// Result of `low_degree_square_approx`.
#[derive(Debug, Clone)]
pub struct LowDegreeApprox {
    pub approximator: GibbsApproximator,
    pub density: DensityMatrix,
    pub degree: usize,
    /// `C·(‖F‖/ε)·D(Q‖U) + C·log(1/ε)/loglog(1/ε)` with `C = DEGREE_CONSTANT`.
    pub degree_bound: f64,
    pub constant: f64,
    pub entropy: f64,
    /// `Tr(F p(F)²)/Tr p(F)²`.
    pub value: f64,
    /// `Tr(F Q)`.
    pub reference: f64,
    pub holds: bool,
}

/// Low-degree square `p(F)²` whose pairing with `F` is within `ε` of `Tr(FQ)`.
///
/// `λ = 2D(Q‖U)/ε`, `ε' = min(ε/(2‖F‖), 0.49)` and `p(x) = p_k(−λx/2)` with
/// `k = taylor_degree(λ‖F‖, ε')`.
pub fn low_degree_square_approx(f: &SymMatrix, q: &DensityMatrix, eps: f64) -> Result<LowDegreeApprox> {
    if !(eps > 0.0 && eps < 0.5) {
        return Err(Error::Domain(format!("ε = {eps} outside (0, 1/2)")));
    }
    if f.dim() != q.dim() {
        return Err(Error::ShapeMismatch(format!("F dim {} vs Q dim {}", f.dim(), q.dim())));
    }
    let entropy = quantum_relative_entropy(q, &DensityMatrix::uniform(q.dim()))?;
    let norm = f.operator_norm()?;
    let lambda = 2.0 * entropy / eps;
    let eps_taylor = if norm > 0.0 { (eps / (2.0 * norm)).min(0.49) } else { 0.49 };
    let k = taylor_degree(lambda * norm, eps_taylor);
    let approximator = GibbsApproximator { f: f.clone(), lambda, taylor: Some(taylor_coefficients(k)) };
    let density = approximator.state()?;
    let degree = approximator.degree();
    let value = f.dot(density.matrix());
    let reference = f.dot(q.matrix());
    Ok(LowDegreeApprox {
        approximator,
        density,
        degree,
        degree_bound: DEGREE_CONSTANT * (norm / eps) * entropy + DEGREE_CONSTANT * log_ratio(eps),
        constant: DEGREE_CONSTANT,
        entropy,
        value,
        reference,
        holds: value <= reference + eps + GUARANTEE_SLACK,
    })
}

/// One accepted mirror-descent step.
#[derive(Debug, Clone, PartialEq)]
pub struct DescentStep {
    pub step: usize,
    pub test: usize,
    /// Gap of the selected test before the step.
    pub gap: f64,
    /// Relative entropy to the target after the step.
    pub entropy: f64,
}

/// Result of a mirror-descent run.
#[derive(Debug, Clone)]
pub struct MirrorDescent<T> {
    pub approximant: T,
    /// Selected test indices, in order.
    pub selected: Vec<usize>,
    /// Step budget `⌈8 D Δ² / ε²⌉`.
    pub h: usize,
    /// Step size `ε/(4Δ²)`.
    pub step_size: f64,
    pub initial_entropy: f64,
    /// Largest gap over the family at the end.
    pub final_gap: f64,
    /// Smallest per-step entropy decrease (infinite with no steps).
    pub min_decrease: f64,
    /// Every decrease is at least `ε²/(8Δ²) − 1e-6`.
    pub decrease_ok: bool,
    pub trace: Vec<DescentStep>,
}

fn step_budget(entropy: f64, delta: f64, eps: f64) -> usize {
    if delta == 0.0 {
        return 0;
    }
    (8.0 * entropy.max(0.0) * delta * delta / (eps * eps)).ceil() as usize
}

/// Shared descent loop. `gaps(t)` returns gaps of every test at state `t`,
/// `advance(t, i)` moves the exponent along test `i`, `entropy(t)` measures
/// the distance to the target.
fn descend<S>(
    state: &mut S,
    ntests: usize,
    eps: f64,
    delta: f64,
    initial_entropy: f64,
    mut gaps: impl FnMut(&S) -> Result<Vec<f64>>,
    mut advance: impl FnMut(&mut S, usize) -> Result<()>,
    mut entropy: impl FnMut(&S) -> Result<f64>,
) -> Result<(Vec<usize>, usize, f64, f64, Vec<DescentStep>)> {
    let h = step_budget(initial_entropy, delta, eps);
    let mut selected = Vec::new();
    let mut trace = Vec::new();
    let mut prev = initial_entropy;
    let mut min_decrease = f64::INFINITY;
    loop {
        let g = gaps(state)?;
        debug_assert_eq!(g.len(), ntests);
        let worst = g.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let hit = g.iter().position(|&v| v > eps);
        let Some(i) = hit else {
            return Ok((selected, h, worst, min_decrease, trace));
        };
        if selected.len() >= h {
            return Err(Error::Guarantee(format!(
                "gap {worst:e} > ε = {eps} after the full budget of {h} steps"
            )));
        }
        advance(state, i)?;
        let e = entropy(state)?;
        min_decrease = min_decrease.min(prev - e);
        trace.push(DescentStep { step: selected.len() + 1, test: i, gap: g[i], entropy: e });
        selected.push(i);
        prev = e;
    }
}

/// Mirror descent toward `Q` from `Q0` against the tests of `T`.
///
/// The approximant is `exp(log Q0 + (ε/4Δ²) Σ A_i)` normalized; each step adds
/// the first test whose gap `Tr(A(Q − Q̃))` exceeds `ε`.
pub fn mirror_descent_approx(
    q: &DensityMatrix,
    family: &TestFamily,
    eps: f64,
    q0: &DensityMatrix,
) -> Result<MirrorDescent<DensityMatrix>> {
    if !(eps > 0.0) {
        return Err(Error::Domain(format!("ε = {eps} must be positive")));
    }
    if q.dim() != family.dim() || q0.dim() != family.dim() {
        return Err(Error::ShapeMismatch("Q, Q0 and tests must share a dimension".into()));
    }
    let min0 = q0.matrix().min_eigenvalue()?;
    if min0 < 1e-10 {
        return Err(Error::Domain(format!("Q0 min eigenvalue {min0:e} below 1e-10")));
    }
    let delta = family.delta();
    let step_size = if delta > 0.0 { eps / (4.0 * delta * delta) } else { 0.0 };
    let log_q0 = q0.matrix().log_pd()?;
    let initial_entropy = relative_entropy_to_exp(q, &log_q0)?;
    let tests = family.tests();
    struct State {
        h: SymMatrix,
        density: DensityMatrix,
    }
    let mut state = State { h: log_q0.clone(), density: q0.clone() };
    let (selected, h, final_gap, min_decrease, trace) = descend(
        &mut state,
        tests.len(),
        eps,
        delta,
        initial_entropy,
        |s| {
            let diff = q.matrix().sub(s.density.matrix());
            Ok(tests.iter().map(|t| t.dot(&diff)).collect())
        },
        |s, i| {
            s.h = s.h.axpy(step_size, &tests[i]);
            s.density = exp_density(&s.h)?;
            Ok(())
        },
        |s| relative_entropy_to_exp(q, &s.h),
    )?;
    let required = if delta > 0.0 { eps * eps / (8.0 * delta * delta) } else { 0.0 };
    Ok(MirrorDescent {
        approximant: state.density,
        selected,
        h,
        step_size,
        initial_entropy,
        final_gap,
        min_decrease,
        decrease_ok: min_decrease >= required - ENTROPY_SLACK,
        trace,
    })
}

/// Result of `approx_against_family`.
#[derive(Debug, Clone)]
pub struct FamilyApprox {
    /// `F = (1/h') Σ A_i`, a point of the convex hull (the first test when no step was taken).
    pub f: SymMatrix,
    /// `λ` such that the mirror approximant is `e^{λF}/Tr e^{λF}`.
    pub lambda: f64,
    /// Taylor coefficients `p_k`; the returned polynomial is `p(x) = scale·p_k(λx/2)`.
    pub taylor: Vec<f64>,
    pub scale: f64,
    pub degree: usize,
    /// `(1 + D(Q‖U))·Δ/ε`.
    pub degree_reference: f64,
    /// `p(F)²`, trace one.
    pub density: DensityMatrix,
    /// `[Q − p(F)²]_T`.
    pub gap: f64,
    pub holds: bool,
    pub mirror: MirrorDescent<DensityMatrix>,
}

/// Square of a polynomial in a point of `conv(T)` approximating `Q` against `T`.
///
/// Mirror descent from the uniform state at `ε/2`, then a squared Taylor
/// approximation of `e^{λF}` at trace-norm error `min(ε/(2Δ), 0.49)`.
pub fn approx_against_family(q: &DensityMatrix, family: &TestFamily, eps: f64) -> Result<FamilyApprox> {
    if !(eps > 0.0 && eps < 0.5) {
        return Err(Error::Domain(format!("ε = {eps} outside (0, 1/2)")));
    }
    if !family.is_convex() {
        return Err(Error::Domain("family is not declared convex".into()));
    }
    let dim = family.dim();
    let mirror = mirror_descent_approx(q, family, eps / 2.0, &DensityMatrix::uniform(dim))?;
    let tests = family.tests();
    let (f, lambda) = if mirror.selected.is_empty() {
        (tests[0].clone(), 0.0)
    } else {
        let mut sum = SymMatrix::zeros(dim);
        for &i in &mirror.selected {
            sum = sum.add(&tests[i]);
        }
        let h = mirror.selected.len() as f64;
        (sum.scale(1.0 / h), mirror.step_size * h)
    };
    let delta = family.delta();
    let eps_taylor = if delta > 0.0 { (eps / (2.0 * delta)).min(0.49) } else { 0.49 };
    let lf = f.scale(lambda);
    let k = if lambda == 0.0 { 0 } else { taylor_degree(lf.operator_norm()?, eps_taylor) };
    let taylor = taylor_coefficients(k);
    let e = lf.eig()?;
    let sq = e.reconstruct_with(|l| horner(&taylor, l / 2.0).powi(2));
    let tr = sq.trace();
    let density = DensityMatrix::normalized(sq)?;
    let diff = q.matrix().sub(density.matrix());
    let gap = family.gauge(&diff);
    let entropy = quantum_relative_entropy(q, &DensityMatrix::uniform(dim))?;
    Ok(FamilyApprox {
        f,
        lambda,
        taylor,
        scale: 1.0 / tr.sqrt(),
        degree: k,
        degree_reference: (1.0 + entropy) * delta / eps,
        density,
        gap,
        holds: gap <= eps + GUARANTEE_SLACK,
        mirror,
    })
}

/// The block operator `F = Σ e_x e_xᵀ ⊗ F_x`, `F_x = E_S D(x_S) P_S`, and the
/// state `Q = (1/τ) E_x e_x e_xᵀ ⊗ Q_x` built from a factorization of a
/// matrix indexed by m-subsets (colex) and points of `{0,1}^n`.
#[derive(Debug, Clone)]
pub struct BlockOperator {
    pub blocks: Vec<SymMatrix>,
    pub f: SymMatrix,
    pub q: DensityMatrix,
    pub tau: f64,
}

pub fn block_operator(d: &PseudoDensity, fact: &PsdFactorization, n: usize) -> Result<BlockOperator> {
    let m = d.m();
    let rows = crate::cube::subsets_of_size(n, m);
    if fact.p.len() != rows.len() || fact.q.len() != 1usize << n {
        return Err(Error::ShapeMismatch(format!(
            "factorization has {}×{} factors, expected {}×{}",
            fact.p.len(),
            fact.q.len(),
            rows.len(),
            1usize << n
        )));
    }
    let dfun = d.function();
    let ns = rows.len() as f64;
    let blocks: Vec<SymMatrix> = (0..1u32 << n)
        .map(|x| {
            let mut acc = SymMatrix::zeros(fact.r);
            for (s, p) in rows.iter().zip(&fact.p) {
                let xs = crate::cube::restrict_mask(x, *s);
                acc = acc.axpy(dfun.eval(xs) / ns, p);
            }
            acc
        })
        .collect();
    let npts = (1usize << n) as f64;
    let tau = fact.q.iter().map(|q| q.trace()).sum::<f64>() / npts;
    let f = SymMatrix::block_diag(&blocks);
    let qblocks: Vec<SymMatrix> = fact.q.iter().map(|q| q.scale(1.0 / (npts * tau))).collect();
    let q = DensityMatrix::new(SymMatrix::block_diag(&qblocks))?;
    Ok(BlockOperator { blocks, f, q, tau })
}

impl BlockOperator {
    /// Family of single blocks `e_x e_xᵀ ⊗ F_x`, declared convex.
    pub fn block_family(&self) -> Result<TestFamily> {
        let r = self.blocks[0].dim();
        let total = self.f.dim();
        let tests = self
            .blocks
            .iter()
            .enumerate()
            .map(|(x, b)| SymMatrix::from_fn(total, |i, j| {
                if i / r == x && j / r == x {
                    b.get(i % r, j % r)
                } else {
                    0.0
                }
            }))
            .collect();
        TestFamily::new(tests, true)
    }
}

/// A classical test `g` declared to depend only on `coords`.
#[derive(Debug, Clone)]
pub struct JuntaTest {
    pub g: CubeFunction,
    pub coords: Vec<usize>,
}

impl JuntaTest {
    pub fn new(g: CubeFunction, mut coords: Vec<usize>) -> Result<Self> {
        coords.sort_unstable();
        coords.dedup();
        let mask: u32 = coords.iter().fold(0, |m, &i| m | 1 << i);
        if coords.iter().any(|&i| i >= g.n()) {
            return Err(Error::InvalidInput("junta coordinate out of range".into()));
        }
        let leak = g
            .fourier()
            .iter()
            .enumerate()
            .filter(|(a, _)| (*a as u32) & !mask != 0)
            .fold(0.0f64, |m, (_, c)| m.max(c.abs()));
        if leak > 1e-12 * (1.0 + g.sup_norm()) {
            return Err(Error::InvalidInput(format!("test depends on undeclared coordinates ({leak:e})")));
        }
        Ok(Self { g, coords })
    }

    /// `x ↦ 1{x_i = 1}`.
    pub fn dictator(n: usize, i: usize) -> Result<Self> {
        Self::new(CubeFunction::from_fn(n, |x| ((x >> i) & 1) as f64)?, vec![i])
    }

    /// `x ↦ 1{x_i = 0}`.
    pub fn anti_dictator(n: usize, i: usize) -> Result<Self> {
        Self::new(CubeFunction::from_fn(n, |x| 1.0 - ((x >> i) & 1) as f64)?, vec![i])
    }
}

/// Result of `junta_approx`.
#[derive(Debug, Clone)]
pub struct JuntaApprox {
    pub density: CubeFunction,
    /// Union of the selected tests' coordinates.
    pub support: Vec<usize>,
    /// Largest declared test arity `k`.
    pub k: usize,
    /// `E_μ g(f − f̃)` for every test.
    pub gaps: Vec<f64>,
    pub holds: bool,
    pub mirror: MirrorDescent<()>,
}

fn classical_entropy(f: &[f64], w: &[f64], h: &[f64]) -> f64 {
    // D(f ‖ f̃) with f̃ = e^h / E_μ e^h.
    let top = h.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let z: f64 = h.iter().zip(w).map(|(hv, wv)| wv * (hv - top).exp()).sum();
    let log_z = top + z.ln();
    f.iter()
        .zip(w)
        .zip(h)
        .filter(|((fv, _), _)| **fv > 0.0)
        .map(|((fv, wv), hv)| wv * fv * (fv.ln() - hv + log_z))
        .sum()
}

fn classical_density(w: &[f64], h: &[f64]) -> Vec<f64> {
    let top = h.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let e: Vec<f64> = h.iter().map(|hv| (hv - top).exp()).collect();
    let z: f64 = e.iter().zip(w).map(|(a, b)| a * b).sum();
    e.into_iter().map(|v| v / z).collect()
}

/// Junta density `f̃ = exp((ε/4Δ²) Σ g_i) / E_μ[...]` with `E_μ g(f − f̃) ≤ ε` for every test.
pub fn junta_approx(f: &CubeFunction, mu: &ProductMeasure, tests: &[JuntaTest], eps: f64) -> Result<JuntaApprox> {
    if !(eps > 0.0) {
        return Err(Error::Domain(format!("ε = {eps} must be positive")));
    }
    if tests.is_empty() {
        return Err(Error::InvalidInput("empty test family".into()));
    }
    let n = f.n();
    if mu.n() != n || tests.iter().any(|t| t.g.n() != n) {
        return Err(Error::ShapeMismatch("density, measure and tests must share n".into()));
    }
    if f.min() < 0.0 {
        return Err(Error::Domain(format!("density takes negative value {}", f.min())));
    }
    let mean = f.mean_under(mu)?;
    if (mean - 1.0).abs() > 1e-10 {
        return Err(Error::Domain(format!("E_μ f = {mean} differs from 1")));
    }
    let w = mu.weights();
    let fv = f.values();
    let delta = tests.iter().map(|t| t.g.sup_norm()).fold(0.0f64, f64::max);
    let step_size = if delta > 0.0 { eps / (4.0 * delta * delta) } else { 0.0 };
    let zero = vec![0.0; fv.len()];
    let initial_entropy = classical_entropy(fv, &w, &zero);
    let gap_of = |dens: &[f64], g: &CubeFunction| -> f64 {
        g.values().iter().zip(fv).zip(dens).zip(&w).map(|(((gv, a), b), wv)| wv * gv * (a - b)).sum()
    };
    struct State {
        h: Vec<f64>,
        density: Vec<f64>,
    }
    let mut state = State { density: vec![1.0; fv.len()], h: zero };
    let (selected, h, final_gap, min_decrease, trace) = descend(
        &mut state,
        tests.len(),
        eps,
        delta,
        initial_entropy,
        |s| Ok(tests.iter().map(|t| gap_of(&s.density, &t.g)).collect()),
        |s, i| {
            for (hv, gv) in s.h.iter_mut().zip(tests[i].g.values()) {
                *hv += step_size * gv;
            }
            s.density = classical_density(&w, &s.h);
            Ok(())
        },
        |s| Ok(classical_entropy(fv, &w, &s.h)),
    )?;
    let mut support: Vec<usize> = selected.iter().flat_map(|&i| tests[i].coords.iter().copied()).collect();
    support.sort_unstable();
    support.dedup();
    let gaps: Vec<f64> = tests.iter().map(|t| gap_of(&state.density, &t.g)).collect();
    let holds = gaps.iter().all(|&g| g <= eps + GUARANTEE_SLACK);
    let required = if delta > 0.0 { eps * eps / (8.0 * delta * delta) } else { 0.0 };
    let density = CubeFunction::new(n, state.density)?;
    Ok(JuntaApprox {
        density,
        support,
        k: tests.iter().map(|t| t.coords.len()).max().unwrap_or(0),
        gaps,
        holds,
        mirror: MirrorDescent {
            approximant: (),
            selected,
            h,
            step_size,
            initial_entropy,
            final_gap,
            min_decrease,
            decrease_ok: min_decrease >= required - ENTROPY_SLACK,
            trace,
        },
    })
}

/// `D(f ‖ μ) = E_μ f log f`.
pub fn classical_relative_entropy(f: &CubeFunction, mu: &ProductMeasure) -> Result<f64> {
    if f.n() != mu.n() {
        return Err(Error::ShapeMismatch("density and measure must share n".into()));
    }
    let w = mu.weights();
    Ok(classical_entropy(f.values(), &w, &vec![0.0; w.len()]))
}

/// Coordinates a function depends on.
pub fn junta_coordinates(f: &CubeFunction) -> Vec<usize> {
    let scale = 1e-12 * (1.0 + f.sup_norm());
    let mask = f
        .fourier()
        .iter()
        .enumerate()
        .filter(|(_, c)| c.abs() > scale)
        .fold(0u32, |m, (a, _)| m | a as u32);
    bits(mask)
}
