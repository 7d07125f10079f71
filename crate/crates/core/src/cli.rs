//! Command-line drivers. Every subcommand produces a [`Report`]: ordered
//! `key value` lines, one `check <name> PASS|FAIL` line per postcondition and
//! a final `result PASS|FAIL` line. Artifacts go to `--out` when given.
//!
//! Exit codes: 0 when every check passes, 1 on a failed check or a library
//! error, 2 on a usage error.

use std::fmt::Display;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::csp::{
    brute_opt, cs_check, cycle_edges, lasserre_value, maxcut_instance, spectral_maxcut_bound, CspInstance,
    Relaxation,
};
use crate::cube::{binomial, popcount, CubeFunction, ProductMeasure};
use crate::error::{Error, Result};
use crate::io;
use crate::learn::{
    classical_relative_entropy, junta_approx, low_degree_square_approx, mirror_descent_approx,
    taylor_error, taylor_square_approx, JuntaTest, TestFamily,
};
use crate::liftmat::{
    explicit_psd_factorization, ld_functional, random_low_degree_square_matrix, random_psd_factorization,
    rescale_factorization, verify_psd_factorization, EntryMatrix, LdOptions, PatternMatrix,
};
use crate::pseudo::{
    fourier_coefficient_bound_check, grigoriev_knapsack, knapsack_function, knapsack_moment, lopsided_function,
    lopsided_pseudo_density, lopsided_rebalanced_pseudo_density, validate_local_pseudo_density,
    validate_sos_pseudo_density, PseudoDensity, PseudoKind,
};
use crate::rng::SplitMix64;
use crate::sos::{sos_degree, sos_upper_bound, verify_certificate, BasisDescriptor};
use crate::symmat::{DensityMatrix, SymMatrix};

/// Tolerance for `L_D(N) ≥ −tol` on the null battery.
pub const BATTERY_TOL: f64 = 1e-9;
/// Largest duality gap accepted from the sos solver.
pub const GAP_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Parser)]
#[command(name = "sosrank", version, about = "Sum-of-squares certificates and psd factorizations over the boolean cube")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    /// Numerical tolerance; each subcommand has its own default.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Seed for every sampled computation.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Sample this many pattern-matrix rows instead of using all of them.
    #[arg(long, global = true)]
    pub sample_rows: Option<usize>,
    /// Directory for artifacts and `report.txt`.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

/// A base function: a `cube-function` file or the built-in knapsack function.
#[derive(Debug, Clone, Args)]
#[group(required = true, multiple = false)]
pub struct FunctionSource {
    /// `cube-function` file.
    #[arg(long = "f", value_name = "FILE")]
    pub file: Option<PathBuf>,
    /// Built-in `((Σx − m/2)² − 1/4)/m²` on odd m in 3..=15.
    #[arg(long, value_name = "M", value_parser = parse_odd_m)]
    pub knapsack: Option<usize>,
}

/// A CSP instance: a `csp-instance` or DIMACS file, or max-cut on a cycle.
#[derive(Debug, Clone, Args)]
#[group(required = true, multiple = false)]
pub struct InstanceSource {
    #[arg(long, value_name = "FILE")]
    pub instance: Option<PathBuf>,
    /// Max-cut on the cycle with this many vertices.
    #[arg(long, value_name = "N")]
    pub cycle: Option<usize>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum)]
pub enum LopsidedVariant {
    /// `⌊m/2⌋`-local, `E_μ D f = −1`.
    #[default]
    Original,
    /// `(⌊m/2⌋+1)`-local, `E_μ D f = −(m−2)/(m+2)`.
    Rebalanced,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Knapsack pseudo-density with its validation and moment table.
    KnapsackCert {
        #[arg(long, value_parser = parse_odd_m)]
        m: usize,
    },
    /// Local pseudo-density for lopsided disjointness.
    LopsidedCert {
        #[arg(long, value_parser = parse_lopsided_m)]
        m: usize,
        #[arg(long, value_enum, default_value_t)]
        variant: LopsidedVariant,
    },
    /// Sos degree with its certificate and lower-degree witnesses.
    Sosdeg {
        #[command(flatten)]
        f: FunctionSource,
    },
    /// Degree-d sos upper bound on max f.
    Sosbound {
        #[command(flatten)]
        f: FunctionSource,
        #[arg(long)]
        d: usize,
    },
    /// L_D on the pattern matrix and on a battery of low-degree square matrices.
    Separate {
        #[command(flatten)]
        f: FunctionSource,
        #[arg(long)]
        n: usize,
        /// `pseudo-density` file; defaults to the knapsack density or the highest sos witness.
        #[arg(long, value_name = "FILE")]
        density: Option<PathBuf>,
        /// Number of random low-degree square matrices.
        #[arg(long, default_value_t = 200)]
        battery: usize,
        /// Side length of the battery's matrices.
        #[arg(long, default_value_t = 3)]
        k: usize,
    },
    /// Explicit psd factorization of the pattern matrix from an sos certificate.
    Factorize {
        #[command(flatten)]
        f: FunctionSource,
        #[arg(long)]
        n: usize,
        /// `sos-certificate` file for `f = Σ g²`; computed when absent.
        #[arg(long, value_name = "FILE")]
        cert: Option<PathBuf>,
    },
    /// Check a factorization bundle against a matrix dump or a pattern matrix.
    VerifyFact {
        #[arg(long, value_name = "FILE")]
        bundle: PathBuf,
        /// `pattern-matrix` dump.
        #[arg(long, value_name = "FILE", conflicts_with_all = ["file", "knapsack", "n"])]
        matrix: Option<PathBuf>,
        #[arg(long = "f", value_name = "FILE", conflicts_with = "knapsack", requires = "n")]
        file: Option<PathBuf>,
        #[arg(long, value_name = "M", value_parser = parse_odd_m, requires = "n")]
        knapsack: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
    },
    /// Rescale a factorization and check the four postconditions.
    Rescale {
        #[arg(long, value_name = "FILE", conflicts_with = "random", required_unless_present = "random")]
        bundle: Option<PathBuf>,
        /// Use a seeded random factorization.
        #[arg(long)]
        random: bool,
        #[arg(long, default_value_t = 4)]
        r: usize,
        #[arg(long, default_value_t = 2)]
        rank: usize,
        #[arg(long, default_value_t = 20)]
        rows: usize,
        #[arg(long, default_value_t = 30)]
        cols: usize,
        #[arg(long, default_value_t = 0.5)]
        eta: f64,
    },
    /// Mirror descent toward Q against a family of tests.
    LearnDensity {
        /// `sym-matrix` file holding Q.
        #[arg(long, value_name = "FILE", conflicts_with = "random", required_unless_present = "random")]
        q: Option<PathBuf>,
        /// `uniform`, `target` (Q0 = Q) or a `sym-matrix` file.
        #[arg(long, default_value = "uniform")]
        q0: String,
        /// `sym-matrix` test file, repeatable.
        #[arg(long = "test", value_name = "FILE")]
        tests: Vec<PathBuf>,
        /// Seeded random Q and tests.
        #[arg(long)]
        random: bool,
        #[arg(long, default_value_t = 8)]
        dim: usize,
        #[arg(long, default_value_t = 6)]
        count: usize,
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
    },
    /// Squared Taylor approximation of exp(F), optionally against Q.
    Taylor {
        /// `sym-matrix` file holding F.
        #[arg(long, value_name = "FILE", conflicts_with = "random", required_unless_present = "random")]
        f: Option<PathBuf>,
        #[arg(long)]
        random: bool,
        #[arg(long, default_value_t = 6)]
        dim: usize,
        /// Operator norm of the random F.
        #[arg(long, default_value_t = 3.0)]
        norm: f64,
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
        /// `sym-matrix` file holding Q for the low-degree square approximation.
        #[arg(long, value_name = "FILE")]
        q: Option<PathBuf>,
    },
    /// Junta approximation of a density against dictator tests.
    Junta {
        /// `cube-function` density file; a seeded random density when absent.
        #[arg(long = "f", value_name = "FILE")]
        file: Option<PathBuf>,
        #[arg(long, default_value_t = 12)]
        n: usize,
        /// Bias `P(x_i = 1)` of the product measure.
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        #[arg(long, default_value_t = 0.2)]
        eps: f64,
    },
    /// Exact optimum by enumeration.
    CspOpt {
        #[command(flatten)]
        instance: InstanceSource,
    },
    /// Degree-d sos relaxation value.
    CspRelax {
        #[command(flatten)]
        instance: InstanceSource,
        #[arg(long)]
        d: usize,
    },
    /// Check that the degree-d relaxation (c,s)-solves the given instances.
    CsCheck {
        #[arg(long = "instance", value_name = "FILE", required = true)]
        instances: Vec<PathBuf>,
        #[arg(long)]
        c: f64,
        #[arg(long)]
        s: f64,
        #[arg(long)]
        d: usize,
    },
    /// Dense dump of a pattern matrix.
    PatternDump {
        #[command(flatten)]
        f: FunctionSource,
        #[arg(long)]
        n: usize,
    },
}

fn parse_odd_m(s: &str) -> std::result::Result<usize, String> {
    let m: usize = s.parse().map_err(|_| format!("{s:?} is not an integer"))?;
    if m.is_multiple_of(2) || !(3..=15).contains(&m) {
        return Err(format!("m must be odd and in 3..=15, got {m}"));
    }
    Ok(m)
}

fn parse_lopsided_m(s: &str) -> std::result::Result<usize, String> {
    let m: usize = s.parse().map_err(|_| format!("{s:?} is not an integer"))?;
    if !(3..=16).contains(&m) {
        return Err(format!("m must be in 3..=16, got {m}"));
    }
    Ok(m)
}

/// Ordered report of one run.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    lines: Vec<String>,
    failed: usize,
    artifacts: Vec<(String, String)>,
}

/// Shortest round-trip text; exponent form outside `[1e-4, 1e15)`.
pub fn num(v: f64) -> String {
    if v == 0.0 || (1e-4..1e15).contains(&v.abs()) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

impl Report {
    fn new(command: &str) -> Self {
        let mut r = Report::default();
        r.kv("command", command);
        r
    }

    fn kv(&mut self, key: &str, value: impl Display) {
        self.lines.push(format!("{key} {value}"));
    }

    fn real(&mut self, key: &str, v: f64) {
        self.kv(key, num(v));
    }

    fn check(&mut self, name: &str, ok: bool) {
        if !ok {
            self.failed += 1;
        }
        self.lines.push(format!("check {name} {}", if ok { "PASS" } else { "FAIL" }));
    }

    fn artifact(&mut self, name: &str, contents: String) {
        self.kv("artifact", name);
        self.artifacts.push((name.into(), contents));
    }

    pub fn passed(&self) -> bool {
        self.failed == 0
    }

    pub fn artifacts(&self) -> &[(String, String)] {
        &self.artifacts
    }

    pub fn artifact_text(&self, name: &str) -> Option<&str> {
        self.artifacts.iter().find(|(n, _)| n == name).map(|(_, t)| t.as_str())
    }

    /// Value of the first `key value` line with this key.
    pub fn value(&self, key: &str) -> Option<&str> {
        self.lines.iter().find_map(|l| l.strip_prefix(key).and_then(|r| r.strip_prefix(' ')))
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        for l in &self.lines {
            s.push_str(l);
            s.push('\n');
        }
        s.push_str(if self.passed() { "result PASS\n" } else { "result FAIL\n" });
        s
    }

    /// Write every artifact and `report.txt` into `dir`.
    pub fn write_to(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        for (name, text) in &self.artifacts {
            std::fs::write(dir.join(name), text)?;
        }
        std::fs::write(dir.join("report.txt"), self.render())?;
        Ok(())
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))
}

impl FunctionSource {
    fn load(&self) -> Result<(CubeFunction, String)> {
        resolve_function(self.file.as_deref(), self.knapsack)
    }
}

fn resolve_function(file: Option<&Path>, knapsack: Option<usize>) -> Result<(CubeFunction, String)> {
    match (file, knapsack) {
        (Some(p), None) => Ok((io::read_cube_function(&read(p)?)?, p.display().to_string())),
        (None, Some(m)) => Ok((knapsack_function(m)?, format!("knapsack:{m}"))),
        _ => Err(Error::InvalidInput("give exactly one of --f and --knapsack".into())),
    }
}

impl InstanceSource {
    fn load(&self) -> Result<(CspInstance, Option<usize>)> {
        match (&self.instance, self.cycle) {
            (Some(p), None) => Ok((read_any_instance(&read(p)?)?, None)),
            (None, Some(n)) => Ok((maxcut_instance(n, &cycle_edges(n))?, Some(n))),
            _ => Err(Error::InvalidInput("give exactly one of --instance and --cycle".into())),
        }
    }
}

/// `csp-instance` text, or DIMACS CNF when the first record is not a header.
fn read_any_instance(text: &str) -> Result<CspInstance> {
    if text.trim_start().starts_with("format ") {
        io::read_instance(text)
    } else {
        io::parse_dimacs(text)
    }
}

fn read_sym(path: &Path) -> Result<SymMatrix> {
    io::read_sym_matrix(&read(path)?)
}

/// Random symmetric matrix with operator norm `norm`.
fn random_test(dim: usize, norm: f64, rng: &mut SplitMix64) -> Result<SymMatrix> {
    let a = SymMatrix::from_fn(dim, |_, _| rng.normal());
    let s = a.operator_norm()?;
    Ok(if s > 0.0 { a.scale(norm / s) } else { a })
}

/// Random density matrix `Σ v vᵀ / Tr` of the given rank.
fn random_density(dim: usize, rank: usize, rng: &mut SplitMix64) -> Result<DensityMatrix> {
    let mut m = SymMatrix::zeros(dim);
    for _ in 0..rank {
        let v: Vec<f64> = (0..dim).map(|_| rng.normal()).collect();
        m = m.add(&SymMatrix::outer(&v));
    }
    DensityMatrix::normalized(m)
}

/// Random density `e^g / E_μ e^g` with `g` a signed sum of coordinates,
/// halved until `D(f ‖ μ) ≤ 2`.
fn random_junta_density(mu: &ProductMeasure, rng: &mut SplitMix64) -> Result<CubeFunction> {
    let n = mu.n();
    let w: Vec<f64> = (0..n).map(|_| rng.uniform(-1.0, 1.0)).collect();
    let mut scale = 1.0;
    loop {
        let g = CubeFunction::from_fn(n, |x| {
            scale * (0..n).map(|i| if x >> i & 1 == 1 { w[i] } else { -w[i] }).sum::<f64>()
        })?;
        let e = g.map(f64::exp);
        let f = e.scale(1.0 / e.mean_under(mu)?);
        if classical_relative_entropy(&f, mu)? <= 2.0 {
            return Ok(f);
        }
        scale /= 2.0;
    }
}

/// Parse arguments, run, print the report and return the exit code.
pub fn main() -> i32 {
    main_from(std::env::args_os())
}

pub fn main_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cfg = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(&cfg) {
        Ok(report) => {
            print!("{}", report.render());
            if report.passed() {
                0
            } else {
                1
            }
        }
        Err(e) => {
            println!("error {e}");
            println!("result FAIL");
            1
        }
    }
}

/// Run and write artifacts when `--out` is set.
pub fn execute(cfg: &RunConfig) -> Result<Report> {
    let report = run(cfg)?;
    if let Some(dir) = &cfg.out {
        report.write_to(dir)?;
    }
    Ok(report)
}

/// Run one subcommand without touching the file system for output.
pub fn run(cfg: &RunConfig) -> Result<Report> {
    let tol = |default: f64| cfg.tol.unwrap_or(default);
    match &cfg.command {
        Command::KnapsackCert { m } => knapsack_cert(*m, tol(1e-8)),
        Command::LopsidedCert { m, variant } => lopsided_cert(*m, *variant, tol(1e-10)),
        Command::Sosdeg { f } => sosdeg(f, tol(1e-7)),
        Command::Sosbound { f, d } => sosbound(f, *d, tol(1e-7)),
        Command::Separate { f, n, density, battery, k } => {
            separate(cfg, f, *n, density.as_deref(), *battery, *k, tol(1e-8))
        }
        Command::Factorize { f, n, cert } => factorize(f, *n, cert.as_deref(), tol(1e-8)),
        Command::VerifyFact { bundle, matrix, file, knapsack, n } => {
            verify_fact(bundle, matrix.as_deref(), file.as_deref(), *knapsack, *n, tol(1e-8))
        }
        Command::Rescale { bundle, random: _, r, rank, rows, cols, eta } => {
            rescale(cfg, bundle.as_deref(), *r, *rank, *rows, *cols, *eta)
        }
        Command::LearnDensity { q, q0, tests, random: _, dim, count, eps } => {
            learn_density(cfg, q.as_deref(), q0, tests, *dim, *count, *eps)
        }
        Command::Taylor { f, random: _, dim, norm, eps, q } => taylor(cfg, f.as_deref(), *dim, *norm, *eps, q.as_deref()),
        Command::Junta { file, n, p, eps } => junta(cfg, file.as_deref(), *n, *p, *eps),
        Command::CspOpt { instance } => csp_opt(instance),
        Command::CspRelax { instance, d } => csp_relax(instance, *d, tol(1e-7)),
        Command::CsCheck { instances, c, s, d } => cs(instances, *c, *s, *d, tol(1e-7)),
        Command::PatternDump { f, n } => pattern_dump(cfg, f, *n),
    }
}

fn knapsack_cert(m: usize, tol: f64) -> Result<Report> {
    let mut r = Report::new("knapsack-cert");
    r.kv("m", m);
    let d = grigoriev_knapsack(m)?;
    let half = m as f64 / 2.0;
    let sq = CubeFunction::from_fn(m, |x| (popcount(x) as f64 - half).powi(2))?;
    let mean = d.mass();
    let sq_value = d.pair(&sq)?;
    let sup = d.sup_norm();
    let v = validate_sos_pseudo_density(&d, m, tol)?;
    r.real("mean", mean);
    r.real("pair_square", sq_value);
    r.real("sup_norm", sup);
    r.real("sup_bound", (m as f64).powf(1.5));
    r.real("moment_min_eigenvalue", v.min_eigenvalue);
    let moments = d.all_moments();
    let mut worst = 0.0f64;
    for s in 0..=m {
        let want = knapsack_moment(m, s);
        let dev = moments
            .iter()
            .enumerate()
            .filter(|(t, _)| popcount(*t as u32) == s)
            .map(|(_, v)| (v - want).abs())
            .fold(0.0, f64::max);
        worst = worst.max(dev);
        r.kv("moment", format!("{s} {} {}", num(want), num(dev)));
    }
    r.check("mean", (mean - 1.0).abs() <= 1e-12);
    r.check("pair_square", sq_value.abs() <= 1e-9);
    r.check("moment_psd", v.min_eigenvalue >= -tol);
    r.check("sup_norm", sup <= (m as f64).powf(1.5));
    r.check("moments", worst <= 1e-10);
    r.artifact("density.txt", io::write_pseudo_density(&d));
    r.artifact("function.txt", io::write_cube_function(&knapsack_function(m)?));
    Ok(r)
}

fn lopsided_cert(m: usize, variant: LopsidedVariant, tol: f64) -> Result<Report> {
    let mut r = Report::new("lopsided-cert");
    r.kv("m", m);
    let d = match variant {
        LopsidedVariant::Original => lopsided_pseudo_density(m)?,
        LopsidedVariant::Rebalanced => lopsided_rebalanced_pseudo_density(m)?,
    };
    r.kv("variant", format!("{variant:?}").to_lowercase());
    let mu = d.measure().clone();
    let claimed = d.claimed_degree();
    let at = validate_local_pseudo_density(&d, claimed, &mu, tol)?;
    let above = validate_local_pseudo_density(&d, claimed + 1, &mu, tol)?;
    let f = lopsided_function(m)?;
    let w = mu.weights();
    let pair: f64 = d.function().values().iter().zip(f.values()).zip(&w).map(|((a, b), c)| a * b * c).sum();
    r.real("mean", at.mean);
    r.kv("local_degree", claimed);
    r.real("local_min", at.min_value);
    r.real("local_min_above", above.min_value);
    r.kv("local_above", if above.passed { "holds" } else { "fails" });
    r.real("pair_f", pair);
    r.real("sup_norm", d.sup_norm());
    let want = match variant {
        LopsidedVariant::Original => -1.0,
        LopsidedVariant::Rebalanced => -((m as f64 - 2.0) / (m as f64 + 2.0)),
    };
    r.check("mean", (at.mean - 1.0).abs() <= tol);
    r.check("local", at.passed);
    r.check("pair_f", (pair - want).abs() <= tol);
    r.check("sup_norm", d.sup_norm() <= 27.0 + tol);
    r.artifact("density.txt", io::write_pseudo_density(&d));
    Ok(r)
}

fn sosdeg(src: &FunctionSource, tol: f64) -> Result<Report> {
    let (f, name) = src.load()?;
    let mut r = Report::new("sosdeg");
    r.kv("f", &name);
    r.kv("n", f.n());
    let s = sos_degree(&f, tol)?;
    r.kv("sos_degree", s.degree);
    let cr = verify_certificate(&f.scale(-1.0), &s.certificate, tol.max(1e-7));
    r.real("certificate_residual", cr.max_residual);
    r.real("gram_min_eigenvalue", cr.gram_min_eigenvalue);
    r.kv("squares", s.certificate.squares.len());
    r.check("certificate", cr.passed);
    for (d, w) in &s.witnesses {
        r.kv("witness", format!("{d} {}", num(w.value)));
        r.check(&format!("witness_{d}"), w.value < 0.0);
        r.artifact(&format!("witness-{d}.txt"), io::write_pseudo_density(&w.density));
    }
    r.artifact("certificate.txt", io::write_certificate(&s.certificate));
    Ok(r)
}

fn sosbound(src: &FunctionSource, d: usize, tol: f64) -> Result<Report> {
    let (f, name) = src.load()?;
    let mut r = Report::new("sosbound");
    r.kv("f", &name);
    r.kv("d", d);
    let sol = sos_upper_bound(&f, d, tol)?;
    r.real("bound", sol.certificate.c);
    r.real("dual_value", sol.dual.value);
    r.real("gap", sol.gap);
    r.real("max_f", f.max());
    let cr = verify_certificate(&f, &sol.certificate, tol.max(1e-7));
    r.real("certificate_residual", cr.max_residual);
    r.check("gap", sol.gap.abs() <= GAP_TOL);
    r.check("certificate", cr.passed);
    r.check("upper_bound", sol.certificate.c >= f.max() - tol.max(1e-7));
    r.artifact("certificate.txt", io::write_certificate(&sol.certificate));
    r.artifact("dual.txt", io::write_pseudo_density(&sol.dual.density));
    Ok(r)
}

#[allow(clippy::too_many_arguments)]
fn separate(
    cfg: &RunConfig,
    src: &FunctionSource,
    n: usize,
    density: Option<&Path>,
    battery: usize,
    k: usize,
    tol: f64,
) -> Result<Report> {
    let (f, name) = src.load()?;
    let mut r = Report::new("separate");
    r.kv("f", &name);
    r.kv("m", f.n());
    r.kv("n", n);
    let (d, source) = match (density, src.knapsack) {
        (Some(p), _) => (io::read_pseudo_density(&read(p)?)?, p.display().to_string()),
        (None, Some(m)) => (grigoriev_knapsack(m)?, format!("knapsack:{m}")),
        (None, None) => match sos_degree(&f, 1e-7)?.witnesses.pop() {
            Some((deg, w)) => (w.density, format!("witness:{deg}")),
            None => (PseudoDensity::sos(CubeFunction::constant(f.n(), 1.0)?, 0)?, "constant".into()),
        },
    };
    if !d.measure().is_uniform() {
        return Err(Error::InvalidInput("L_D needs a density for the uniform measure".into()));
    }
    if d.m() != f.n() {
        return Err(Error::ShapeMismatch(format!("density on {} variables, f on {}", d.m(), f.n())));
    }
    let deg = d.claimed_degree();
    r.kv("density", source);
    r.kv("density_degree", deg);
    let valid = match d.kind() {
        PseudoKind::Sos => validate_sos_pseudo_density(&d, deg, tol)?.passed,
        PseudoKind::Local => validate_local_pseudo_density(&d, deg, d.measure(), tol)?.passed,
    };
    r.real("pair_f", d.pair(&f)?);
    let opts = LdOptions { sample_rows: cfg.sample_rows, seed: cfg.seed };
    let pm = PatternMatrix::new(f, n)?;
    let ld = ld_functional(&d, &pm, n, opts)?;
    r.real("ld", ld.value);
    if let Some(se) = ld.stderr {
        r.real("ld_stderr", se);
    }
    r.kv("rows_used", ld.rows_used);
    r.kv("separates", if ld.value < 0.0 { "yes" } else { "no" });
    let mut rng = SplitMix64::new(cfg.seed);
    let mut min_null = f64::INFINITY;
    for _ in 0..battery {
        let nm = random_low_degree_square_matrix(n, d.m(), k, deg / 2, &mut rng)?;
        let v = ld_functional(&d, &nm, n, opts)?;
        min_null = min_null.min(v.value);
    }
    r.kv("battery", battery);
    r.kv("battery_degree", deg / 2);
    if battery > 0 {
        r.real("battery_min", min_null);
    }
    r.check("density", valid);
    r.check("battery", battery == 0 || min_null >= -BATTERY_TOL);
    Ok(r)
}

fn rank_formula(n: usize, cert_degree: Option<usize>, descriptor: &BasisDescriptor) -> Option<u64> {
    match descriptor {
        BasisDescriptor::Monomial { order, .. } if cert_degree.is_some() => {
            Some((0..=*order).map(|i| binomial(n, i)).sum())
        }
        _ => None,
    }
}

fn factorize(src: &FunctionSource, n: usize, cert: Option<&Path>, tol: f64) -> Result<Report> {
    let (f, name) = src.load()?;
    let mut r = Report::new("factorize");
    r.kv("f", &name);
    r.kv("m", f.n());
    r.kv("n", n);
    let cert = match cert {
        Some(p) => io::read_certificate(&read(p)?)?,
        None => sos_degree(&f, 1e-7)?.certificate,
    };
    let d = cert.degree.unwrap_or(2 * cert.squares.iter().map(|g| g.degree()).max().unwrap_or(0));
    r.kv("degree", d);
    let fact = explicit_psd_factorization(&f, &cert, n)?;
    let pm = PatternMatrix::new(f, n)?;
    let rep = verify_psd_factorization(&pm, &fact, tol);
    let bound = 1.0 + (n as f64).powf(1.0 + d as f64 / 2.0);
    r.kv("r", fact.r);
    r.real("rank_bound", bound);
    let formula = rank_formula(n, cert.degree, &cert.descriptor);
    if let Some(v) = formula {
        r.kv("rank_formula", v);
    }
    r.kv("entries_checked", rep.entries_checked);
    r.real("max_residual", rep.max_residual);
    r.real("min_p_eigenvalue", rep.min_p_eigenvalue);
    r.real("min_q_eigenvalue", rep.min_q_eigenvalue);
    r.check("factorization", rep.passed);
    r.check("rank_bound", fact.r as f64 <= bound);
    if let Some(v) = formula {
        r.check("rank_formula", fact.r as u64 == v);
    }
    r.artifact("factorization.txt", io::write_factorization(&fact));
    Ok(r)
}

fn verify_fact(
    bundle: &Path,
    matrix: Option<&Path>,
    file: Option<&Path>,
    knapsack: Option<usize>,
    n: Option<usize>,
    tol: f64,
) -> Result<Report> {
    let fact = io::read_factorization(&read(bundle)?)?;
    let mut r = Report::new("verify-fact");
    r.kv("bundle", bundle.display());
    r.kv("r", fact.r);
    let rep = match (matrix, n) {
        (Some(p), _) => {
            let dump = io::read_matrix_dump(&read(p)?)?;
            r.kv("matrix", p.display());
            verify_psd_factorization(&dump.matrix, &fact, tol)
        }
        (None, Some(n)) => {
            let (f, name) = resolve_function(file, knapsack)?;
            r.kv("f", name);
            r.kv("n", n);
            verify_psd_factorization(&PatternMatrix::new(f, n)?, &fact, tol)
        }
        (None, None) => return Err(Error::InvalidInput("give --matrix or a function with --n".into())),
    };
    r.kv("entries_checked", rep.entries_checked);
    r.real("max_residual", rep.max_residual);
    r.real("min_p_eigenvalue", rep.min_p_eigenvalue);
    r.real("min_q_eigenvalue", rep.min_q_eigenvalue);
    r.check("factorization", rep.passed);
    Ok(r)
}

#[allow(clippy::too_many_arguments)]
fn rescale(
    cfg: &RunConfig,
    bundle: Option<&Path>,
    rr: usize,
    rank: usize,
    rows: usize,
    cols: usize,
    eta: f64,
) -> Result<Report> {
    let mut r = Report::new("rescale");
    let fact = match bundle {
        Some(p) => {
            r.kv("bundle", p.display());
            io::read_factorization(&read(p)?)?
        }
        None => {
            r.kv("bundle", format!("random:{}", cfg.seed));
            random_psd_factorization(rr, rank, rows, cols, &mut SplitMix64::new(cfg.seed))?
        }
    };
    let m = fact.to_dense()?;
    let out = rescale_factorization(&m, &fact, eta)?;
    let rep = &out.report;
    r.kv("r", rep.r);
    r.kv("rows", fact.p.len());
    r.kv("cols", fact.q.len());
    r.real("eta", rep.eta);
    r.real("m_inf", rep.m_inf);
    r.real("gamma", rep.gamma);
    r.real("item1_violation", rep.item1_violation);
    r.real("item2_error", rep.item2_error);
    r.real("max_p_norm", rep.max_p_norm);
    r.real("p_bound_balanced", rep.p_bound_balanced);
    r.real("p_bound_rank", rep.p_bound_rank);
    r.real("max_q_eigenvalue", rep.max_q_eigenvalue);
    r.real("q_bound_balanced", rep.q_bound_balanced);
    r.real("q_bound_rank", rep.q_bound_rank);
    for (i, ok) in rep.items.iter().enumerate() {
        r.check(&format!("item{}", i + 1), *ok);
    }
    r.artifact("rescaled.txt", io::write_factorization(&out.factorization));
    Ok(r)
}

fn learn_density(
    cfg: &RunConfig,
    q: Option<&Path>,
    q0: &str,
    tests: &[PathBuf],
    dim: usize,
    count: usize,
    eps: f64,
) -> Result<Report> {
    let mut r = Report::new("learn-density");
    let mut rng = SplitMix64::new(cfg.seed);
    let (q, tests) = match q {
        Some(p) => {
            let tests = tests.iter().map(|t| read_sym(t)).collect::<Result<Vec<_>>>()?;
            (DensityMatrix::new(read_sym(p)?)?, tests)
        }
        None => {
            let q = random_density(dim, dim, &mut rng)?;
            let tests = (0..count).map(|_| random_test(dim, 1.0, &mut rng)).collect::<Result<Vec<_>>>()?;
            (q, tests)
        }
    };
    let q0 = match q0 {
        "uniform" => DensityMatrix::uniform(q.dim()),
        "target" => q.clone(),
        path => DensityMatrix::new(read_sym(Path::new(path))?)?,
    };
    let family = TestFamily::new(tests, false)?;
    r.kv("dim", family.dim());
    r.kv("tests", family.len());
    r.real("delta", family.delta());
    r.real("eps", eps);
    let md = mirror_descent_approx(&q, &family, eps, &q0)?;
    r.real("initial_entropy", md.initial_entropy);
    r.kv("budget", md.h);
    r.real("step_size", md.step_size);
    r.kv("steps", md.selected.len());
    r.real("final_gap", md.final_gap);
    if !md.trace.is_empty() {
        r.real("min_decrease", md.min_decrease);
    }
    for s in &md.trace {
        r.kv("step", format!("{} {} {} {}", s.step, s.test, num(s.gap), num(s.entropy)));
    }
    r.check("guarantee", md.final_gap <= eps);
    r.check("budget", md.selected.len() <= md.h);
    r.check("entropy_decrease", md.decrease_ok);
    r.artifact("trace.txt", io::write_trace(&md.trace));
    r.artifact("approximant.txt", io::write_sym_matrix(md.approximant.matrix()));
    Ok(r)
}

fn taylor(cfg: &RunConfig, f: Option<&Path>, dim: usize, norm: f64, eps: f64, q: Option<&Path>) -> Result<Report> {
    let mut r = Report::new("taylor");
    let f = match f {
        Some(p) => read_sym(p)?,
        None => random_test(dim, norm, &mut SplitMix64::new(cfg.seed))?,
    };
    r.kv("dim", f.dim());
    r.real("norm", f.operator_norm()?);
    r.real("eps", eps);
    let t = taylor_square_approx(&f, eps)?;
    r.kv("k", t.k);
    r.real("error", t.error);
    for k in (0..5).map(|i| i * t.k / 4) {
        r.kv("grid", format!("{k} {}", num(taylor_error(&f, k)?)));
    }
    r.check("taylor", t.holds);
    r.artifact("density.txt", io::write_sym_matrix(t.density.matrix()));
    if let Some(p) = q {
        let q = DensityMatrix::new(read_sym(p)?)?;
        let a = low_degree_square_approx(&f, &q, eps)?;
        r.real("lambda", a.approximator.lambda);
        r.kv("square_degree", a.degree);
        r.real("square_degree_bound", a.degree_bound);
        r.real("square_value", a.value);
        r.real("square_reference", a.reference);
        r.check("low_degree_square", a.holds);
        r.artifact("square.txt", io::write_sym_matrix(a.density.matrix()));
    }
    Ok(r)
}

fn junta(cfg: &RunConfig, file: Option<&Path>, n: usize, p: f64, eps: f64) -> Result<Report> {
    let mut r = Report::new("junta");
    let f0 = match file {
        Some(path) => Some(io::read_cube_function(&read(path)?)?),
        None => None,
    };
    let n = f0.as_ref().map_or(n, |f| f.n());
    let mu = ProductMeasure::biased(n, p)?;
    let f = match f0 {
        Some(f) => f,
        None => random_junta_density(&mu, &mut SplitMix64::new(cfg.seed))?,
    };
    let tests = (0..n)
        .flat_map(|i| [JuntaTest::dictator(n, i), JuntaTest::anti_dictator(n, i)])
        .collect::<Result<Vec<_>>>()?;
    r.kv("n", n);
    r.real("p", p);
    r.real("eps", eps);
    r.kv("tests", tests.len());
    r.real("entropy", classical_relative_entropy(&f, &mu)?);
    let a = junta_approx(&f, &mu, &tests, eps)?;
    let h = a.mirror.h;
    r.kv("budget", h);
    r.kv("steps", a.mirror.selected.len());
    r.kv("k", a.k);
    r.kv("support_size", a.support.len());
    r.kv("support", a.support.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(","));
    r.real("max_gap", a.gaps.iter().cloned().fold(f64::NEG_INFINITY, f64::max));
    r.check("guarantee", a.holds);
    r.check("support", a.support.len() <= h * a.k);
    r.check("entropy_decrease", a.mirror.decrease_ok);
    r.artifact("trace.txt", io::write_trace(&a.mirror.trace));
    r.artifact("junta.txt", io::write_cube_function(&a.density));
    Ok(r)
}

fn describe_instance(r: &mut Report, im: &CspInstance) {
    r.kv("n", im.n());
    r.kv("constraints", im.constraints().len());
    r.kv("arity", im.arity());
}

fn csp_opt(src: &InstanceSource) -> Result<Report> {
    let (im, _) = src.load()?;
    let mut r = Report::new("csp-opt");
    describe_instance(&mut r, &im);
    r.real("opt", brute_opt(&im)?);
    Ok(r)
}

fn csp_relax(src: &InstanceSource, d: usize, tol: f64) -> Result<Report> {
    let (im, cycle) = src.load()?;
    let mut r = Report::new("csp-relax");
    describe_instance(&mut r, &im);
    r.kv("d", d);
    let opt = brute_opt(&im)?;
    let lv = lasserre_value(&im, d, tol)?;
    r.real("opt", opt);
    r.real("value", lv.value);
    r.real("gap", lv.solution.gap);
    if let (Some(n), 2) = (cycle, d) {
        r.real("spectral", spectral_maxcut_bound(n, &cycle_edges(n))?);
    }
    let fb = fourier_coefficient_bound_check(&lv.solution.dual.density, d)?;
    r.real("dual_max_fourier", fb.max_abs);
    r.check("gap", lv.solution.gap.abs() <= GAP_TOL);
    r.check("upper_bound", lv.value >= opt - tol.max(1e-7));
    r.check("fourier_bound", fb.passed);
    r.artifact("dual.txt", io::write_pseudo_density(&lv.solution.dual.density));
    Ok(r)
}

fn cs(paths: &[PathBuf], c: f64, s: f64, d: usize, tol: f64) -> Result<Report> {
    let instances = paths.iter().map(|p| read_any_instance(&read(p)?)).collect::<Result<Vec<_>>>()?;
    let mut r = Report::new("cs-check");
    r.real("c", c);
    r.real("s", s);
    r.kv("d", d);
    let rep = cs_check(&instances, c, s, &Relaxation::Degree(d), tol)?;
    for e in &rep.entries {
        let v = e.value.map_or("-".to_string(), num);
        r.kv("instance", format!("{} {} {v} {}", e.index, num(e.opt), if e.violates { "violates" } else { "ok" }));
    }
    r.kv("violations", rep.violations.len());
    r.check("cs", rep.passed);
    Ok(r)
}

fn pattern_dump(cfg: &RunConfig, src: &FunctionSource, n: usize) -> Result<Report> {
    let (f, name) = src.load()?;
    let m = f.n();
    let pm = PatternMatrix::new(f, n)?;
    let (nr, nc) = pm.shape();
    let rows: Option<Vec<usize>> = cfg.sample_rows.map(|k| {
        let mut rng = SplitMix64::new(cfg.seed);
        let mut v: Vec<usize> = (0..k).map(|_| rng.below(nr as u64) as usize).collect();
        v.sort_unstable();
        v.dedup();
        v
    });
    let dump = io::pattern_dump(&pm, &name, rows.as_deref())?;
    let mut r = Report::new("pattern-dump");
    r.kv("f", &name);
    r.kv("m", m);
    r.kv("n", n);
    r.kv("rows_total", nr);
    r.kv("rows", dump.matrix.rows);
    r.kv("cols", nc);
    if let Some(&first) = dump.row_sets.first() {
        r.kv("first_row", first);
    }
    r.real("max_abs", dump.matrix.max_abs());
    r.artifact("matrix.txt", io::write_matrix_dump(&dump));
    Ok(r)
}
