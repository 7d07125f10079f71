//! Boolean max-CSP instances, exact optima and sos relaxation values.

use rayon::prelude::*;

use crate::cube::{bits, popcount, subsets_up_to, CubeFunction, MAX_N};
use crate::error::{Error, Result};
use crate::liftmat::{DenseMatrix, EntryMatrix};
use crate::sos::{even_degree, sos_upper_bound, subspace_sos_upper_bound, SosSolution};
use crate::symmat::SymMatrix;

/// Largest `n` accepted by `brute_opt`.
pub const MAX_BRUTE_VARS: usize = 24;

/// A predicate on `k` literals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Predicate {
    /// `l_1 ≠ l_2`.
    NotEqual,
    /// `l_1 ∨ … ∨ l_k`.
    Or,
    /// Truth table indexed by the literal assignment, bit `j` holding `l_{j+1}`.
    Table(Vec<bool>),
}

impl Predicate {
    /// Identifier used in instance files.
    pub fn id(&self) -> String {
        match self {
            Predicate::NotEqual => "neq".into(),
            Predicate::Or => "or".into(),
            Predicate::Table(t) => {
                let s: String = t.iter().map(|&b| if b { '1' } else { '0' }).collect();
                format!("table:{s}")
            }
        }
    }

    pub fn parse(id: &str) -> Result<Self> {
        match id {
            "neq" => Ok(Predicate::NotEqual),
            "or" => Ok(Predicate::Or),
            _ => {
                let body = id
                    .strip_prefix("table:")
                    .ok_or_else(|| Error::InvalidInput(format!("unknown predicate {id:?}")))?;
                let t = body
                    .chars()
                    .map(|c| match c {
                        '0' => Ok(false),
                        '1' => Ok(true),
                        _ => Err(Error::InvalidInput(format!("bad truth table {body:?}"))),
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(Predicate::Table(t))
            }
        }
    }

    fn check_arity(&self, k: usize) -> Result<()> {
        let ok = match self {
            Predicate::NotEqual => k == 2,
            Predicate::Or => k >= 1,
            Predicate::Table(t) => k >= 1 && t.len() == 1 << k,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!("predicate {} does not take {k} literals", self.id())))
        }
    }

    /// Value on a literal assignment `y` (bit `j` = literal `j`).
    pub fn eval(&self, y: u32, k: usize) -> bool {
        match self {
            Predicate::NotEqual => (y & 1) != ((y >> 1) & 1),
            Predicate::Or => y & ((1u32 << k) - 1) != 0,
            Predicate::Table(t) => t[y as usize],
        }
    }
}

/// One constraint `P(x_{i_1} ⊕ s_1, …, x_{i_k} ⊕ s_k)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub predicate: Predicate,
    pub vars: Vec<usize>,
    /// `true` negates the corresponding variable.
    pub negated: Vec<bool>,
}

impl Constraint {
    pub fn new(predicate: Predicate, vars: Vec<usize>, negated: Vec<bool>) -> Result<Self> {
        if vars.len() != negated.len() {
            return Err(Error::ShapeMismatch(format!("{} variables but {} signs", vars.len(), negated.len())));
        }
        predicate.check_arity(vars.len())?;
        for (a, &i) in vars.iter().enumerate() {
            if vars[..a].contains(&i) {
                return Err(Error::InvalidInput(format!("variable {i} repeated in a constraint")));
            }
        }
        Ok(Self { predicate, vars, negated })
    }

    pub fn arity(&self) -> usize {
        self.vars.len()
    }

    pub fn eval(&self, x: u32) -> bool {
        let mut y = 0u32;
        for (j, (&i, &neg)) in self.vars.iter().zip(&self.negated).enumerate() {
            let lit = ((x >> i) & 1 == 1) != neg;
            y |= (lit as u32) << j;
        }
        self.predicate.eval(y, self.arity())
    }
}

/// A max-CSP instance with value `Im(x) = (1/M) Σ P_i(x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CspInstance {
    n: usize,
    constraints: Vec<Constraint>,
}

impl CspInstance {
    pub fn new(n: usize, constraints: Vec<Constraint>) -> Result<Self> {
        if n == 0 || n > MAX_N {
            return Err(Error::Capacity(format!("n = {n} outside 1..={MAX_N}")));
        }
        if constraints.is_empty() {
            return Err(Error::InvalidInput("instance has no constraints".into()));
        }
        for c in &constraints {
            if let Some(&i) = c.vars.iter().find(|&&i| i >= n) {
                return Err(Error::IndexOutOfRange { index: i, bound: n });
            }
        }
        Ok(Self { n, constraints })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    /// Largest constraint arity.
    pub fn arity(&self) -> usize {
        self.constraints.iter().map(Constraint::arity).max().unwrap_or(0)
    }

    /// Fraction of satisfied constraints.
    pub fn value(&self, x: u32) -> f64 {
        let sat = self.constraints.iter().filter(|c| c.eval(x)).count();
        sat as f64 / self.constraints.len() as f64
    }

    pub fn function(&self) -> Result<CubeFunction> {
        CubeFunction::from_fn(self.n, |x| self.value(x))
    }
}

/// `Σ_{ij∈E} (x_i − x_j)²`, the number of cut edges.
pub fn maxcut_function(n: usize, edges: &[(usize, usize)]) -> Result<CubeFunction> {
    check_graph(n, edges)?;
    CubeFunction::from_fn(n, |x| edges.iter().filter(|&&(i, j)| (x >> i) & 1 != (x >> j) & 1).count() as f64)
}

/// Cut fraction `f_G / |E|`.
pub fn maxcut_fraction(n: usize, edges: &[(usize, usize)]) -> Result<CubeFunction> {
    let f = maxcut_function(n, edges)?;
    Ok(f.scale(1.0 / edges.len() as f64))
}

/// Max-cut as a CSP over `NotEqual` constraints.
pub fn maxcut_instance(n: usize, edges: &[(usize, usize)]) -> Result<CspInstance> {
    check_graph(n, edges)?;
    let cons = edges
        .iter()
        .map(|&(i, j)| Constraint::new(Predicate::NotEqual, vec![i, j], vec![false, false]))
        .collect::<Result<Vec<_>>>()?;
    CspInstance::new(n, cons)
}

fn check_graph(n: usize, edges: &[(usize, usize)]) -> Result<()> {
    if n > 20 {
        return Err(Error::Capacity(format!("graph on {n} > 20 vertices")));
    }
    if edges.is_empty() {
        return Err(Error::InvalidInput("graph has no edges".into()));
    }
    let mut seen = std::collections::HashSet::new();
    for &(i, j) in edges {
        if i == j {
            return Err(Error::InvalidInput(format!("self-loop at {i}")));
        }
        if i >= n || j >= n {
            return Err(Error::IndexOutOfRange { index: i.max(j), bound: n });
        }
        if !seen.insert((i.min(j), i.max(j))) {
            return Err(Error::InvalidInput(format!("repeated edge {i}-{j}")));
        }
    }
    Ok(())
}

/// Cycle `0-1-…-(n−1)-0`.
pub fn cycle_edges(n: usize) -> Vec<(usize, usize)> {
    (0..n).map(|i| (i, (i + 1) % n)).collect()
}

/// A 3-literal disjunction: `(variable, negated)` triples.
pub type Clause = [(usize, bool); 3];

/// Max-3-SAT instance from clauses over distinct variables.
pub fn max3sat_instance(n: usize, clauses: &[Clause]) -> Result<CspInstance> {
    if clauses.is_empty() {
        return Err(Error::InvalidInput("empty 3-SAT instance".into()));
    }
    let cons = clauses
        .iter()
        .map(|cl| {
            Constraint::new(Predicate::Or, cl.iter().map(|l| l.0).collect(), cl.iter().map(|l| l.1).collect())
        })
        .collect::<Result<Vec<_>>>()?;
    CspInstance::new(n, cons)
}

/// `opt(Im) = max_x Im(x)` by enumeration.
pub fn brute_opt(im: &CspInstance) -> Result<f64> {
    if im.n > MAX_BRUTE_VARS {
        return Err(Error::Capacity(format!("n = {} > {MAX_BRUTE_VARS}", im.n)));
    }
    let best = (0..1u32 << im.n)
        .into_par_iter()
        .map(|x| im.constraints.iter().filter(|c| c.eval(x)).count())
        .max()
        .unwrap_or(0);
    Ok(best as f64 / im.constraints.len() as f64)
}

/// Degree-`d` sos relaxation value with its dual pseudo-density.
#[derive(Debug, Clone)]
pub struct LasserreValue {
    pub value: f64,
    pub solution: SosSolution,
}

/// `sos_d(Im) = min{c : c − Im is a sum of squares of degree ≤ d/2}`.
pub fn lasserre_value(im: &CspInstance, d: usize, tol: f64) -> Result<LasserreValue> {
    let solution = sos_upper_bound(&im.function()?, d, tol)?;
    Ok(LasserreValue { value: solution.certificate.c, solution })
}

/// `n·λ_max(L)/(4|E|)`, the eigenvalue bound on the max-cut fraction.
pub fn spectral_maxcut_bound(n: usize, edges: &[(usize, usize)]) -> Result<f64> {
    check_graph(n, edges)?;
    let mut lap = vec![0.0; n * n];
    for &(i, j) in edges {
        lap[i * n + i] += 1.0;
        lap[j * n + j] += 1.0;
        lap[i * n + j] -= 1.0;
        lap[j * n + i] -= 1.0;
    }
    let l = SymMatrix::from_full(n, &lap)?;
    Ok(n as f64 * l.max_eigenvalue()? / (4.0 * edges.len() as f64))
}

/// Relaxation used by `cs_check`.
#[derive(Debug, Clone)]
pub enum Relaxation {
    Degree(usize),
    Subspace(Vec<CubeFunction>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct CsEntry {
    pub index: usize,
    pub opt: f64,
    /// Relaxation value, absent when `opt > s`.
    pub value: Option<f64>,
    pub violates: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CsReport {
    pub c: f64,
    pub s: f64,
    pub entries: Vec<CsEntry>,
    /// Instances with `opt ≤ s` whose relaxation value exceeds `c`.
    pub violations: Vec<usize>,
    pub passed: bool,
}

/// Check `opt(Im) ≤ s ⟹ relaxation(Im) ≤ c` on every instance.
///
/// A value counts as exceeding `c` when it is above `c + tol`.
pub fn cs_check(instances: &[CspInstance], c: f64, s: f64, relax: &Relaxation, tol: f64) -> Result<CsReport> {
    let entries = instances
        .par_iter()
        .enumerate()
        .map(|(index, im)| {
            let opt = brute_opt(im)?;
            if opt > s + 1e-12 {
                return Ok(CsEntry { index, opt, value: None, violates: false });
            }
            let f = im.function()?;
            let value = match relax {
                Relaxation::Degree(d) => sos_upper_bound(&f, *d, tol)?.certificate.c,
                Relaxation::Subspace(b) => subspace_sos_upper_bound(&f, b, tol)?.certificate.c,
            };
            Ok(CsEntry { index, opt, value: Some(value), violates: value > c + tol })
        })
        .collect::<Result<Vec<_>>>()?;
    let violations: Vec<usize> = entries.iter().filter(|e| e.violates).map(|e| e.index).collect();
    Ok(CsReport { c, s, passed: violations.is_empty(), entries, violations })
}

/// Matrix `M(Im, x) = c − Im(x)` over instances with `opt ≤ s`.
#[derive(Debug, Clone)]
pub struct InstanceMatrix {
    pub n: usize,
    pub c: f64,
    pub s: f64,
    pub rows: Vec<CubeFunction>,
    pub min_entry: f64,
    /// All entries are nonnegative; factorization routines require this.
    pub nonnegative: bool,
}

impl EntryMatrix for InstanceMatrix {
    fn shape(&self) -> (usize, usize) {
        (self.rows.len(), 1 << self.n)
    }

    fn entry(&self, i: usize, j: usize) -> f64 {
        self.c - self.rows[i].eval(j as u32)
    }
}

/// Assemble `M(Im, x) = c − Im(x)` from instance functions on `n` variables.
pub fn instance_matrix_from_functions(rows: Vec<CubeFunction>, c: f64, s: f64) -> Result<InstanceMatrix> {
    let n = rows.first().ok_or_else(|| Error::InvalidInput("no instances".into()))?.n();
    if rows.iter().any(|r| r.n() != n) {
        return Err(Error::ShapeMismatch("instances on different numbers of variables".into()));
    }
    if let Some(i) = rows.iter().position(|r| r.max() > s + 1e-12) {
        return Err(Error::Domain(format!("instance {i} has opt {} > s = {s}", rows[i].max())));
    }
    let min_entry = rows.iter().map(|r| c - r.max()).fold(f64::INFINITY, f64::min);
    Ok(InstanceMatrix { n, c, s, rows, min_entry, nonnegative: min_entry >= -1e-12 })
}

pub fn build_instance_matrix(instances: &[CspInstance], c: f64, s: f64) -> Result<InstanceMatrix> {
    let rows = instances.iter().map(CspInstance::function).collect::<Result<Vec<_>>>()?;
    instance_matrix_from_functions(rows, c, s)
}

/// Index set `{A : |A| ≤ d/2}` ordered by size then colex.
pub fn moment_index(n: usize, d: usize) -> Vec<u32> {
    subsets_up_to(n, even_degree(d) / 2)
}

/// `x̃(A, B) = ∏_{i∈A∪B} x_i` over `moment_index(n, d)`.
pub fn lift_assignment(x: u32, n: usize, d: usize) -> SymMatrix {
    let idx = moment_index(n, d);
    let v: Vec<f64> = idx.iter().map(|&a| if x & a == a { 1.0 } else { 0.0 }).collect();
    SymMatrix::outer(&v)
}

/// Linearization `Ĩm(A_S, B_S) = Îm_S` with `A_S` the `⌈k/2⌉` smallest elements of `S`.
#[derive(Debug, Clone)]
pub struct Linearization {
    pub index: Vec<u32>,
    pub matrix: DenseMatrix,
}

impl Linearization {
    /// `⟨Ĩm, Y⟩`.
    pub fn pair(&self, y: &SymMatrix) -> f64 {
        let r = self.index.len();
        (0..r).flat_map(|i| (0..r).map(move |j| (i, j))).map(|(i, j)| self.matrix.data[i * r + j] * y.get(i, j)).sum()
    }
}

pub fn linearize(im: &CspInstance, d: usize) -> Result<Linearization> {
    let k = im.arity();
    let half = k.div_ceil(2);
    if d < 2 * half {
        return Err(Error::Domain(format!("degree {d} below 2⌈k/2⌉ = {}", 2 * half)));
    }
    let n = im.n();
    let index = moment_index(n, d);
    let pos = |a: u32| index.iter().position(|&b| b == a);
    let coeffs = im.function()?.monomial_coefficients();
    let r = index.len();
    let mut data = vec![0.0; r * r];
    for (s, &c) in coeffs.iter().enumerate() {
        if c == 0.0 {
            continue;
        }
        let s = s as u32;
        if popcount(s) > k {
            // Round-off from the Möbius inversion of non-dyadic values.
            if c.abs() <= 1e-12 {
                continue;
            }
            return Err(Error::Domain(format!("monomial of degree {} above arity {k}", popcount(s))));
        }
        let els = bits(s);
        let a: u32 = els.iter().take(half).fold(0, |m, &i| m | 1 << i);
        let b = s & !a;
        let (ia, ib) = (pos(a), pos(b));
        match (ia, ib) {
            (Some(i), Some(j)) => data[i * r + j] += c,
            _ => return Err(Error::Domain("linearization index outside the moment index".into())),
        }
    }
    Ok(Linearization { index, matrix: DenseMatrix::new(r, r, data)? })
}

/// Membership of `Y` in the degree-`d` spectrahedron: PSD, `Y(∅,∅) = 1` and
/// `Y(A,B)` depending only on `A ∪ B`.
pub fn in_moment_spectrahedron(y: &SymMatrix, n: usize, d: usize, tol: f64) -> Result<bool> {
    let index = moment_index(n, d);
    if y.dim() != index.len() {
        return Err(Error::ShapeMismatch(format!("Y has dim {} but the index has {}", y.dim(), index.len())));
    }
    if (y.get(0, 0) - 1.0).abs() > tol {
        return Ok(false);
    }
    let mut seen: std::collections::HashMap<u32, f64> = std::collections::HashMap::new();
    for (i, &a) in index.iter().enumerate() {
        for (j, &b) in index.iter().enumerate().skip(i) {
            let v = y.get(i, j);
            let e = *seen.entry(a | b).or_insert(v);
            if (e - v).abs() > tol {
                return Ok(false);
            }
        }
    }
    Ok(y.min_eigenvalue()? >= -tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cube::lift_function;
    use crate::liftmat::build_pattern_matrix;
    use crate::pseudo::{fourier_coefficient_bound_check, knapsack_function};
    use approx::assert_abs_diff_eq;

    fn nae3() -> Predicate {
        Predicate::Table((0..8).map(|y| y != 0 && y != 7).collect())
    }

    #[test]
    fn maxcut_examples() {
        let e = maxcut_function(2, &[(0, 1)]).unwrap();
        assert_eq!(e.values(), &[0.0, 1.0, 1.0, 0.0]);
        let tri = maxcut_function(3, &cycle_edges(3)).unwrap();
        assert_eq!(tri.max(), 2.0);
        let c5 = maxcut_function(5, &cycle_edges(5)).unwrap();
        assert_eq!(c5.max(), 4.0);
        assert_eq!(tri.degree(), 2);
        assert!(maxcut_function(2, &[(1, 1)]).is_err());
    }

    #[test]
    fn max3sat_examples() {
        let im = max3sat_instance(3, &[[(0, false), (1, false), (2, false)]]).unwrap();
        for x in 0..8 {
            assert_eq!(im.value(x), if x == 0 { 0.0 } else { 1.0 });
        }
        // All eight sign patterns on one triple: every x violates exactly one.
        let clauses: Vec<Clause> = (0..8u32)
            .map(|s| [(0, s & 1 == 1), (1, s & 2 == 2), (2, s & 4 == 4)])
            .collect();
        let all = max3sat_instance(3, &clauses).unwrap();
        assert_eq!(brute_opt(&all).unwrap(), 7.0 / 8.0);
        assert!(all.function().unwrap().degree() <= 3);
        assert!(max3sat_instance(3, &[]).is_err());
        assert!(max3sat_instance(3, &[[(0, false), (0, true), (2, false)]]).is_err());
    }

    #[test]
    fn brute_opt_of_builders() {
        let tri = maxcut_instance(3, &cycle_edges(3)).unwrap();
        assert_abs_diff_eq!(brute_opt(&tri).unwrap(), 2.0 / 3.0);
        let c5 = maxcut_instance(5, &cycle_edges(5)).unwrap();
        assert_eq!(brute_opt(&c5).unwrap(), 0.8);
    }

    #[test]
    fn lasserre_examples() {
        let sat = max3sat_instance(4, &[[(0, false), (1, true), (2, false)], [(1, false), (2, false), (3, true)]]).unwrap();
        assert_abs_diff_eq!(lasserre_value(&sat, 8, 1e-8).unwrap().value, 1.0, epsilon = 1e-6);
        // 1 − Im contains a point indicator, which needs degree 2n.
        assert!(lasserre_value(&sat, 4, 1e-8).unwrap().value > 1.0 + 1e-3);
        let tri = maxcut_instance(3, &cycle_edges(3)).unwrap();
        assert_abs_diff_eq!(lasserre_value(&tri, 6, 1e-8).unwrap().value, 2.0 / 3.0, epsilon = 1e-6);
        let c5 = maxcut_instance(5, &cycle_edges(5)).unwrap();
        let v = lasserre_value(&c5, 2, 1e-8).unwrap();
        // λ_max of the 5-cycle Laplacian is 2 − 2cos(4π/5).
        let oracle = (2.0 - 2.0 * (4.0 * std::f64::consts::PI / 5.0).cos()) / 4.0;
        assert_abs_diff_eq!(v.value, oracle, epsilon = 1e-6);
        assert!(fourier_coefficient_bound_check(&v.solution.dual.density, 2).unwrap().passed);
        assert_abs_diff_eq!(spectral_maxcut_bound(5, &cycle_edges(5)).unwrap(), oracle, epsilon = 1e-12);
    }

    #[test]
    fn cs_check_examples() {
        let tri = maxcut_instance(3, &cycle_edges(3)).unwrap();
        let r = cs_check(std::slice::from_ref(&tri), 1.0, 1.0, &Relaxation::Degree(6), 1e-7).unwrap();
        assert!(r.passed);
        let r = cs_check(&[], 0.5, 0.4, &Relaxation::Degree(2), 1e-7).unwrap();
        assert!(r.passed && r.entries.is_empty());
        // 1 − 9f/2 for the m = 3 knapsack f is the not-all-equal predicate.
        let nae = CspInstance::new(3, vec![Constraint::new(nae3(), vec![0, 1, 2], vec![false; 3]).unwrap()]).unwrap();
        let f = knapsack_function(3).unwrap();
        let want = f.scale(-4.5).add(&CubeFunction::constant(3, 1.0).unwrap()).unwrap();
        assert_eq!(nae.function().unwrap(), want);
        let r = cs_check(&[nae, tri], 1.0, 1.0, &Relaxation::Degree(2), 1e-7).unwrap();
        assert_eq!(r.violations, vec![0]);
    }

    #[test]
    fn instance_matrix_examples() {
        let tri = maxcut_instance(3, &cycle_edges(3)).unwrap();
        let m = build_instance_matrix(std::slice::from_ref(&tri), 1.0, 1.0).unwrap();
        for x in 0..8 {
            assert_eq!(m.entry(0, x), 1.0 - tri.value(x as u32));
        }
        assert!(m.nonnegative);
        assert!(build_instance_matrix(std::slice::from_ref(&tri), 1.0, 0.5).is_err());
        let neg = build_instance_matrix(&[tri], 0.5, 1.0).unwrap();
        assert!(!neg.nonnegative);
    }

    #[test]
    fn lifted_knapsack_rows_match_pattern_matrix() {
        let n = 5;
        let f = knapsack_function(3).unwrap().scale(4.5);
        let im0 = f.scale(-1.0).add(&CubeFunction::constant(3, 1.0).unwrap()).unwrap();
        let pattern = build_pattern_matrix(&f, n).unwrap();
        let rows = pattern
            .row_sets()
            .iter()
            .map(|&s| lift_function(&im0, &bits(s), n))
            .collect::<Result<Vec<_>>>()
            .unwrap();
        let m = instance_matrix_from_functions(rows, 1.0, 1.0).unwrap();
        let (r, c) = pattern.shape();
        for i in 0..r {
            for j in 0..c {
                assert_abs_diff_eq!(m.entry(i, j), pattern.entry(i, j), epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn linearization_reproduces_value() {
        let clauses: Vec<Clause> = vec![[(0, false), (1, true), (3, false)], [(1, false), (2, false), (3, true)]];
        let im = max3sat_instance(4, &clauses).unwrap();
        let lin = linearize(&im, 4).unwrap();
        for x in 0..16u32 {
            let y = lift_assignment(x, 4, 4);
            assert!(in_moment_spectrahedron(&y, 4, 4, 1e-12).unwrap());
            assert_abs_diff_eq!(lin.pair(&y), im.value(x), epsilon = 1e-12);
        }
        assert!(linearize(&im, 2).is_err());
    }

    #[test]
    fn linearization_ignores_roundoff_above_arity() {
        for n in 3..=7 {
            let im = maxcut_instance(n, &cycle_edges(n)).unwrap();
            let lin = linearize(&im, 2).unwrap();
            for x in 0..1u32 << n {
                assert_abs_diff_eq!(lin.pair(&lift_assignment(x, n, 2)), im.value(x), epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn spectrahedron_rejects_inconsistent_moments() {
        let y = lift_assignment(3, 2, 2).with_entry(1, 1, 0.5);
        assert!(!in_moment_spectrahedron(&y, 2, 2, 1e-9).unwrap());
    }
}
