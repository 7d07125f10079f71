//! Text formats for functions, matrices, certificates, factorizations,
//! instances and traces.
//!
//! Every file is a record:
//!
//! ```text
//! format <kind> v1
//! <key> <value>
//! begin <block> <line count> [argument]
//! <payload lines>
//! ```
//!
//! Blank lines and lines starting with `#` are ignored outside blocks. Reals
//! are written in shortest round-trip exponent notation, so reading a written
//! file reproduces every value bit for bit.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::csp::{Constraint, CspInstance, Predicate};
use crate::cube::{CubeFunction, ProductMeasure};
use crate::error::{Error, Result};
use crate::learn::DescentStep;
use crate::liftmat::{DenseMatrix, PsdFactorization};
use crate::pseudo::{PseudoDensity, PseudoKind};
use crate::sos::{monomial_basis, BasisDescriptor, SosCertificate};
use crate::symmat::SymMatrix;

pub const VERSION: &str = "v1";

/// A named block of payload lines.
#[derive(Debug, Clone, PartialEq)]
pub struct Block {
    pub name: String,
    pub arg: String,
    pub lines: Vec<String>,
}

/// A parsed or assembled record.
#[derive(Debug, Clone, PartialEq)]
pub struct Document {
    pub kind: String,
    pub fields: Vec<(String, String)>,
    pub blocks: Vec<Block>,
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

impl Document {
    pub fn new(kind: &str) -> Self {
        Self { kind: kind.into(), fields: Vec::new(), blocks: Vec::new() }
    }

    pub fn field(mut self, key: &str, value: impl std::fmt::Display) -> Self {
        self.fields.push((key.into(), value.to_string()));
        self
    }

    pub fn block(mut self, name: &str, arg: impl std::fmt::Display, lines: Vec<String>) -> Self {
        self.blocks.push(Block { name: name.into(), arg: arg.to_string(), lines });
        self
    }

    pub fn get(&self, key: &str) -> Result<&str> {
        self.fields
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
            .ok_or_else(|| parse_err(0, format!("missing field {key:?}")))
    }

    pub fn get_parsed<T: FromStr>(&self, key: &str) -> Result<T> {
        let v = self.get(key)?;
        v.parse().map_err(|_| parse_err(0, format!("field {key:?}: cannot parse {v:?}")))
    }

    pub fn find_block(&self, name: &str) -> Result<&Block> {
        self.blocks.iter().find(|b| b.name == name).ok_or_else(|| parse_err(0, format!("missing block {name:?}")))
    }

    pub fn blocks_named<'a>(&'a self, name: &'a str) -> impl Iterator<Item = &'a Block> + 'a {
        self.blocks.iter().filter(move |b| b.name == name)
    }

    pub fn expect_kind(&self, kind: &str) -> Result<()> {
        if self.kind == kind {
            Ok(())
        } else {
            Err(parse_err(1, format!("expected format {kind}, found {}", self.kind)))
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let all: Vec<(usize, &str)> = text.lines().enumerate().map(|(i, l)| (i + 1, l)).collect();
        let mut pos = 0;
        let next_content = |pos: &mut usize| {
            while *pos < all.len() {
                let (ln, l) = all[*pos];
                *pos += 1;
                let t = l.trim();
                if !t.is_empty() && !t.starts_with('#') {
                    return Some((ln, l));
                }
            }
            None
        };
        let (ln, head) = next_content(&mut pos).ok_or_else(|| parse_err(0, "empty input"))?;
        let parts: Vec<&str> = head.split_whitespace().collect();
        if parts.len() != 3 || parts[0] != "format" {
            return Err(parse_err(ln, "expected `format <kind> v1`"));
        }
        if parts[2] != VERSION {
            return Err(parse_err(ln, format!("unsupported version {}", parts[2])));
        }
        let mut doc = Document::new(parts[1]);
        while let Some((ln, line)) = next_content(&mut pos) {
            let line = line.trim();
            let (key, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
            let rest = rest.trim();
            if key == "begin" {
                let mut it = rest.splitn(3, char::is_whitespace);
                let name = it.next().filter(|s| !s.is_empty()).ok_or_else(|| parse_err(ln, "block without name"))?;
                let count: usize = it
                    .next()
                    .and_then(|c| c.parse().ok())
                    .ok_or_else(|| parse_err(ln, "block without line count"))?;
                let arg = it.next().unwrap_or("").trim().to_string();
                let mut body = Vec::with_capacity(count);
                for k in 0..count {
                    let (_, l) = all
                        .get(pos)
                        .ok_or_else(|| parse_err(ln + k + 1, format!("block {name} ended after {k} of {count} lines")))?;
                    pos += 1;
                    body.push(l.trim().to_string());
                }
                doc.blocks.push(Block { name: name.into(), arg, lines: body });
            } else {
                doc.fields.push((key.into(), rest.into()));
            }
        }
        Ok(doc)
    }
}

impl std::fmt::Display for Document {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "format {} {VERSION}", self.kind)?;
        for (k, v) in &self.fields {
            writeln!(f, "{k} {v}")?;
        }
        for b in &self.blocks {
            if b.arg.is_empty() {
                writeln!(f, "begin {} {}", b.name, b.lines.len())?;
            } else {
                writeln!(f, "begin {} {} {}", b.name, b.lines.len(), b.arg)?;
            }
            for l in &b.lines {
                writeln!(f, "{l}")?;
            }
        }
        Ok(())
    }
}

/// Shortest round-trip exponent form.
pub fn real(v: f64) -> String {
    format!("{v:e}")
}

fn reals_line(v: &[f64]) -> String {
    let mut s = String::with_capacity(v.len() * 24);
    for (i, x) in v.iter().enumerate() {
        if i > 0 {
            s.push(' ');
        }
        let _ = write!(s, "{x:e}");
    }
    s
}

fn parse_reals(line: &str) -> Result<Vec<f64>> {
    line.split_whitespace()
        .map(|t| t.parse::<f64>().map_err(|_| parse_err(0, format!("bad real {t:?}"))))
        .collect()
}

fn block_rows(b: &Block, width: usize) -> Result<Vec<Vec<f64>>> {
    b.lines
        .iter()
        .map(|l| {
            let r = parse_reals(l)?;
            if r.len() != width {
                return Err(parse_err(0, format!("block {}: row of {} values, expected {width}", b.name, r.len())));
            }
            Ok(r)
        })
        .collect()
}

fn block_column(b: &Block) -> Result<Vec<f64>> {
    Ok(block_rows(b, 1)?.into_iter().map(|r| r[0]).collect())
}

fn function_fields(doc: Document, f: &CubeFunction) -> Document {
    doc.field("n", f.n())
        .field("encoding", "dense")
        .block("values", "", f.values().iter().map(|v| real(*v)).collect())
}

fn read_function_fields(doc: &Document) -> Result<CubeFunction> {
    let n: usize = doc.get_parsed("n")?;
    let enc = doc.get("encoding")?;
    if enc != "dense" {
        return Err(parse_err(0, format!("unsupported encoding {enc:?}")));
    }
    let values = block_column(doc.find_block("values")?)?;
    CubeFunction::new(n, values)
}

/// `format cube-function v1`: fields `n`, `encoding dense`; block `values`
/// with `2^n` reals in index order (bit `i` of the index is `x_{i+1}`).
pub fn write_cube_function(f: &CubeFunction) -> String {
    function_fields(Document::new("cube-function"), f).to_string()
}

pub fn read_cube_function(text: &str) -> Result<CubeFunction> {
    let doc = Document::parse(text)?;
    doc.expect_kind("cube-function")?;
    read_function_fields(&doc)
}

fn measure_field(mu: &ProductMeasure) -> String {
    if mu.is_uniform() {
        "uniform".into()
    } else {
        let p: Vec<String> = mu.probabilities().iter().map(|v| real(*v)).collect();
        format!("product {}", p.join(" "))
    }
}

fn parse_measure(s: &str, n: usize) -> Result<ProductMeasure> {
    if s == "uniform" {
        return Ok(ProductMeasure::uniform(n));
    }
    let body = s.strip_prefix("product").ok_or_else(|| parse_err(0, format!("bad measure {s:?}")))?;
    ProductMeasure::new(parse_reals(body)?)
}

/// `format pseudo-density v1`: the cube-function fields plus `measure`
/// (`uniform` or `product p_1 … p_n`), `claimed_degree` and `kind` (`sos` or `local`).
pub fn write_pseudo_density(d: &PseudoDensity) -> String {
    let doc = Document::new("pseudo-density")
        .field("measure", measure_field(d.measure()))
        .field("claimed_degree", d.claimed_degree())
        .field("kind", d.kind().name());
    function_fields(doc, d.function()).to_string()
}

pub fn read_pseudo_density(text: &str) -> Result<PseudoDensity> {
    let doc = Document::parse(text)?;
    doc.expect_kind("pseudo-density")?;
    let f = read_function_fields(&doc)?;
    let mu = parse_measure(doc.get("measure")?, f.n())?;
    let kind = match doc.get("kind")? {
        "sos" => PseudoKind::Sos,
        "local" => PseudoKind::Local,
        k => return Err(parse_err(0, format!("unknown kind {k:?}"))),
    };
    PseudoDensity::new(f, mu, doc.get_parsed("claimed_degree")?, kind)
}

fn matrix_lines(m: &SymMatrix) -> Vec<String> {
    (0..m.dim()).map(|i| reals_line(m.row(i))).collect()
}

fn read_matrix_block(b: &Block, dim: usize) -> Result<SymMatrix> {
    if b.lines.len() != dim {
        return Err(parse_err(0, format!("block {}: {} rows, expected {dim}", b.name, b.lines.len())));
    }
    let data: Vec<f64> = block_rows(b, dim)?.into_iter().flatten().collect();
    for i in 0..dim {
        for j in 0..i {
            if data[i * dim + j] != data[j * dim + i] {
                return Err(parse_err(0, format!("block {}: entries ({i},{j}) and ({j},{i}) differ", b.name)));
            }
        }
    }
    Ok(SymMatrix::from_fn(dim, |i, j| data[i * dim + j]))
}

/// `format sym-matrix v1`: field `dim`; block `rows` with `dim` rows.
pub fn write_sym_matrix(m: &SymMatrix) -> String {
    Document::new("sym-matrix").field("dim", m.dim()).block("rows", "", matrix_lines(m)).to_string()
}

pub fn read_sym_matrix(text: &str) -> Result<SymMatrix> {
    let doc = Document::parse(text)?;
    doc.expect_kind("sym-matrix")?;
    read_matrix_block(doc.find_block("rows")?, doc.get_parsed("dim")?)
}

/// `format sos-certificate v1`: fields `n`, `c`, `d` (or `none`), `basis`
/// (`monomial <order>` or `custom`), `dim`; block `gram`, block `basis` for
/// custom bases (one function per line), block `squares`.
pub fn write_certificate(cert: &SosCertificate) -> String {
    let n = cert.basis.first().map(|b| b.n()).unwrap_or(0);
    let basis = match &cert.descriptor {
        BasisDescriptor::Monomial { order, .. } => format!("monomial {order}"),
        BasisDescriptor::Custom => "custom".into(),
    };
    let mut doc = Document::new("sos-certificate")
        .field("n", n)
        .field("c", real(cert.c))
        .field("d", cert.degree.map(|d| d.to_string()).unwrap_or_else(|| "none".into()))
        .field("basis", basis)
        .field("dim", cert.gram.dim())
        .block("gram", "", matrix_lines(&cert.gram));
    if cert.descriptor == BasisDescriptor::Custom {
        doc = doc.block("basis", "", cert.basis.iter().map(|b| reals_line(b.values())).collect());
    }
    doc.block("squares", "", cert.squares.iter().map(|s| reals_line(s.values())).collect()).to_string()
}

pub fn read_certificate(text: &str) -> Result<SosCertificate> {
    let doc = Document::parse(text)?;
    doc.expect_kind("sos-certificate")?;
    let n: usize = doc.get_parsed("n")?;
    let dim: usize = doc.get_parsed("dim")?;
    let width = 1usize << n;
    let funcs = |b: &Block| -> Result<Vec<CubeFunction>> {
        block_rows(b, width)?.into_iter().map(|r| CubeFunction::new(n, r)).collect()
    };
    let (descriptor, basis) = match doc.get("basis")?.split_whitespace().collect::<Vec<_>>().as_slice() {
        ["monomial", order] => {
            let order: usize = order.parse().map_err(|_| parse_err(0, "bad basis order"))?;
            (BasisDescriptor::Monomial { n, order }, monomial_basis(n, order)?)
        }
        ["custom"] => (BasisDescriptor::Custom, funcs(doc.find_block("basis")?)?),
        other => return Err(parse_err(0, format!("bad basis descriptor {other:?}"))),
    };
    if basis.len() != dim {
        return Err(parse_err(0, format!("basis has {} functions, gram dim {dim}", basis.len())));
    }
    let degree = match doc.get("d")? {
        "none" => None,
        d => Some(d.parse().map_err(|_| parse_err(0, format!("bad degree {d:?}")))?),
    };
    Ok(SosCertificate {
        c: doc.get_parsed("c")?,
        degree,
        descriptor,
        basis,
        gram: read_matrix_block(doc.find_block("gram")?, dim)?,
        squares: funcs(doc.find_block("squares")?)?,
    })
}

/// `format psd-factorization v1`: fields `r`, `rows`, `cols`; one block `p`
/// per row factor and one block `q` per column factor, each in the
/// sym-matrix row layout with its index as the block argument.
pub fn write_factorization(fact: &PsdFactorization) -> String {
    let mut doc = Document::new("psd-factorization")
        .field("r", fact.r)
        .field("rows", fact.p.len())
        .field("cols", fact.q.len());
    for (i, p) in fact.p.iter().enumerate() {
        doc = doc.block("p", i, matrix_lines(p));
    }
    for (j, q) in fact.q.iter().enumerate() {
        doc = doc.block("q", j, matrix_lines(q));
    }
    doc.to_string()
}

pub fn read_factorization(text: &str) -> Result<PsdFactorization> {
    let doc = Document::parse(text)?;
    doc.expect_kind("psd-factorization")?;
    let r: usize = doc.get_parsed("r")?;
    let read = |name: &str, count: usize| -> Result<Vec<SymMatrix>> {
        let v = doc.blocks_named(name).map(|b| read_matrix_block(b, r)).collect::<Result<Vec<_>>>()?;
        if v.len() != count {
            return Err(parse_err(0, format!("{} {name} blocks, expected {count}", v.len())));
        }
        Ok(v)
    };
    PsdFactorization::new(read("p", doc.get_parsed("rows")?)?, read("q", doc.get_parsed("cols")?)?)
}

/// A dumped matrix with the subsets labelling its rows.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixDump {
    pub n: usize,
    pub m: usize,
    pub f_reference: String,
    pub row_sets: Vec<u32>,
    pub matrix: DenseMatrix,
}

/// `format pattern-matrix v1`: fields `n`, `m`, `f` (reference to the base
/// function), `cols`; block `sets` (one subset mask per line), block `rows`.
pub fn write_matrix_dump(d: &MatrixDump) -> String {
    Document::new("pattern-matrix")
        .field("n", d.n)
        .field("m", d.m)
        .field("f", &d.f_reference)
        .field("cols", d.matrix.cols)
        .block("sets", "", d.row_sets.iter().map(|s| s.to_string()).collect())
        .block("rows", "", (0..d.matrix.rows).map(|i| reals_line(d.matrix.row(i))).collect())
        .to_string()
}

pub fn read_matrix_dump(text: &str) -> Result<MatrixDump> {
    let doc = Document::parse(text)?;
    doc.expect_kind("pattern-matrix")?;
    let cols: usize = doc.get_parsed("cols")?;
    let row_sets = doc
        .find_block("sets")?
        .lines
        .iter()
        .map(|l| l.parse::<u32>().map_err(|_| parse_err(0, format!("bad subset mask {l:?}"))))
        .collect::<Result<Vec<_>>>()?;
    let rows = block_rows(doc.find_block("rows")?, cols)?;
    let nrows = rows.len();
    Ok(MatrixDump {
        n: doc.get_parsed("n")?,
        m: doc.get_parsed("m")?,
        f_reference: doc.get("f")?.to_string(),
        row_sets,
        matrix: DenseMatrix::new(nrows, cols, rows.into_iter().flatten().collect())?,
    })
}

/// `format csp-instance v1`: fields `n`, `k`; block `constraints` with lines
/// `<pred-id> <vars comma-separated> <signs>` where signs are `+` (plain) or
/// `-` (negated), e.g. `or 0,3,4 +-+`.
pub fn write_instance(im: &CspInstance) -> String {
    let lines = im
        .constraints()
        .iter()
        .map(|c| {
            let vars: Vec<String> = c.vars.iter().map(|v| v.to_string()).collect();
            let signs: String = c.negated.iter().map(|&s| if s { '-' } else { '+' }).collect();
            format!("{} {} {}", c.predicate.id(), vars.join(","), signs)
        })
        .collect();
    Document::new("csp-instance")
        .field("n", im.n())
        .field("k", im.arity())
        .block("constraints", "", lines)
        .to_string()
}

pub fn read_instance(text: &str) -> Result<CspInstance> {
    let doc = Document::parse(text)?;
    doc.expect_kind("csp-instance")?;
    let n: usize = doc.get_parsed("n")?;
    let k: usize = doc.get_parsed("k")?;
    let cons = doc
        .find_block("constraints")?
        .lines
        .iter()
        .map(|l| {
            let parts: Vec<&str> = l.split_whitespace().collect();
            let [pred, vars, signs] = parts.as_slice() else {
                return Err(parse_err(0, format!("constraint line {l:?} needs 3 fields")));
            };
            let vars = vars
                .split(',')
                .map(|v| v.parse::<usize>().map_err(|_| parse_err(0, format!("bad variable {v:?}"))))
                .collect::<Result<Vec<_>>>()?;
            let negated = signs
                .chars()
                .map(|c| match c {
                    '+' => Ok(false),
                    '-' => Ok(true),
                    _ => Err(parse_err(0, format!("bad sign {c:?}"))),
                })
                .collect::<Result<Vec<_>>>()?;
            Constraint::new(Predicate::parse(pred)?, vars, negated)
        })
        .collect::<Result<Vec<_>>>()?;
    let im = CspInstance::new(n, cons)?;
    if im.arity() > k {
        return Err(parse_err(0, format!("constraint arity {} exceeds declared k = {k}", im.arity())));
    }
    Ok(im)
}

/// DIMACS CNF with every clause of exactly three distinct variables.
pub fn parse_dimacs(text: &str) -> Result<CspInstance> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut current: Vec<i64> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let ln = i + 1;
        let t = line.trim();
        if t.is_empty() || t.starts_with('c') || t.starts_with('%') {
            continue;
        }
        if t.starts_with('p') {
            let parts: Vec<&str> = t.split_whitespace().collect();
            match parts.as_slice() {
                ["p", "cnf", v, c] => {
                    let v = v.parse().map_err(|_| parse_err(ln, "bad variable count"))?;
                    let c = c.parse().map_err(|_| parse_err(ln, "bad clause count"))?;
                    header = Some((v, c));
                }
                _ => return Err(parse_err(ln, "expected `p cnf <vars> <clauses>`")),
            }
            continue;
        }
        let (nvars, _) = header.ok_or_else(|| parse_err(ln, "clause before problem line"))?;
        for tok in t.split_whitespace() {
            let lit: i64 = tok.parse().map_err(|_| parse_err(ln, format!("bad literal {tok:?}")))?;
            if lit == 0 {
                if current.len() != 3 {
                    return Err(parse_err(ln, format!("clause with {} literals, expected 3", current.len())));
                }
                let vars: Vec<usize> = current.iter().map(|l| l.unsigned_abs() as usize - 1).collect();
                let neg: Vec<bool> = current.iter().map(|&l| l < 0).collect();
                clauses.push(Constraint::new(Predicate::Or, vars, neg).map_err(|e| parse_err(ln, e.to_string()))?);
                current.clear();
            } else {
                if lit.unsigned_abs() as usize > nvars {
                    return Err(parse_err(ln, format!("literal {lit} beyond {nvars} variables")));
                }
                current.push(lit);
            }
        }
    }
    let (nvars, ncl) = header.ok_or_else(|| parse_err(0, "missing problem line"))?;
    if !current.is_empty() {
        return Err(parse_err(0, "last clause not terminated by 0"));
    }
    if clauses.len() != ncl {
        return Err(parse_err(0, format!("{} clauses, header says {ncl}", clauses.len())));
    }
    CspInstance::new(nvars, clauses)
}

/// Descent trace, columns `step test gap entropy`.
pub fn write_trace(steps: &[DescentStep]) -> String {
    let mut s = String::from("step test gap entropy\n");
    for st in steps {
        let _ = writeln!(s, "{} {} {:e} {:e}", st.step, st.test, st.gap, st.entropy);
    }
    s
}

/// Build a dense matrix dump of the first `rows` (or all) rows of a pattern matrix.
pub fn pattern_dump(
    p: &crate::liftmat::PatternMatrix,
    f_reference: &str,
    rows: Option<&[usize]>,
) -> Result<MatrixDump> {
    use crate::liftmat::EntryMatrix;
    let (nr, nc) = p.shape();
    let idx: Vec<usize> = rows.map(|r| r.to_vec()).unwrap_or_else(|| (0..nr).collect());
    if idx.len().saturating_mul(nc) > crate::liftmat::DENSE_LIMIT {
        return Err(Error::Capacity(format!("{}x{nc} exceeds the dense limit", idx.len())));
    }
    let data = idx.iter().flat_map(|&i| (0..nc).map(move |j| p.entry(i, j))).collect();
    Ok(MatrixDump {
        n: p.n(),
        m: p.m(),
        f_reference: f_reference.into(),
        row_sets: idx.iter().map(|&i| p.row_sets()[i]).collect(),
        matrix: DenseMatrix::new(idx.len(), nc, data)?,
    })
}
