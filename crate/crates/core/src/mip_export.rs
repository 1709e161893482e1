//! LP-format model files for external MIP solvers.
//!
//! Variables are named `x_i_l` (vertex `i` gets label `l`), `l_i` (label of
//! `i`), `y_i_j` / `z_i_j` (edge orientation), `b` (antibandwidth) and `w_c`
//! (color used); vertices are written 1-based. Output is deterministic:
//! variables by vertex then label, constraints by family then index.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{self, BufWriter, Write};

use crate::error::{Error, Result};
use crate::exact::CliqueCatalog;
use crate::graph::Graph;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Formulation {
    /// Big-M model with label and orientation variables; the big-M is
    /// `2(n−1)`, or `(n−1)+UB` when a bound is given.
    FLit { ub: Option<usize> },
    /// Assignment model with distance-weighted objective rows, coefficients
    /// capped at `ub`; optionally with the per-vertex distance cuts.
    F { ub: usize, vertex_n: bool },
    /// Feasibility model for "antibandwidth ≥ k + 1"; optionally with static
    /// clique-window rows for the clique catalog.
    FEk { k: usize, clique_e: bool },
    Ssp,
    Gcp { color_ub: usize },
}

impl Formulation {
    /// Short name used in file names (`<instance>.<tag>.lp`).
    pub fn tag(&self) -> &'static str {
        match self {
            Formulation::FLit { .. } => "flit",
            Formulation::F { .. } => "f",
            Formulation::FEk { .. } => "fek",
            Formulation::Ssp => "ssp",
            Formulation::Gcp { .. } => "gcp",
        }
    }
}

/// Entity counts by family, e.g. `variables["x"]`, `constraints["OBJ-N"]`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ModelStats {
    pub variables: BTreeMap<&'static str, usize>,
    pub constraints: BTreeMap<&'static str, usize>,
    /// Variables fixed to zero in the bounds section (symmetry breaking).
    pub fixings: usize,
}

impl ModelStats {
    pub fn variables(&self, family: &str) -> usize {
        self.variables.get(family).copied().unwrap_or(0)
    }

    pub fn constraints(&self, family: &str) -> usize {
        self.constraints.get(family).copied().unwrap_or(0)
    }

    pub fn total_variables(&self) -> usize {
        self.variables.values().sum()
    }

    pub fn total_constraints(&self) -> usize {
        self.constraints.values().sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelText {
    pub body: String,
    pub stats: ModelStats,
}

#[derive(Debug, Clone, Copy)]
enum Var {
    X(usize, usize),
    L(usize),
    Y(usize, usize),
    Z(usize, usize),
    B,
    W(usize),
    S(usize),
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Var::X(i, l) => write!(f, "x_{}_{}", i + 1, l),
            Var::L(i) => write!(f, "l_{}", i + 1),
            Var::Y(i, j) => write!(f, "y_{}_{}", i + 1, j + 1),
            Var::Z(i, j) => write!(f, "z_{}_{}", i + 1, j + 1),
            Var::B => f.write_str("b"),
            Var::W(c) => write!(f, "w_{c}"),
            Var::S(i) => write!(f, "x_{}", i + 1),
        }
    }
}

const WRAP: usize = 100;

struct LpWriter<W: Write> {
    out: W,
    stats: ModelStats,
    buf: String,
}

impl<W: Write> LpWriter<W> {
    fn new(out: W) -> Self {
        LpWriter {
            out,
            stats: ModelStats::default(),
            buf: String::new(),
        }
    }

    fn line(&mut self, s: &str) -> io::Result<()> {
        writeln!(self.out, "{s}")
    }

    /// Writes ` head term term ... tail`, wrapping long rows onto indented
    /// continuation lines.
    fn row(&mut self, head: &str, terms: impl IntoIterator<Item = (i64, Var)>, tail: &str) -> io::Result<()> {
        use std::fmt::Write as _;
        self.buf.clear();
        self.buf.push(' ');
        self.buf.push_str(head);
        let mut first = true;
        let mut piece = String::new();
        for (c, v) in terms {
            if c == 0 {
                continue;
            }
            piece.clear();
            if c < 0 {
                piece.push_str(" -");
            } else if !first {
                piece.push_str(" +");
            }
            if c.unsigned_abs() != 1 {
                let _ = write!(piece, " {}", c.unsigned_abs());
            }
            let _ = write!(piece, " {v}");
            if self.buf.len() + piece.len() > WRAP {
                writeln!(self.out, "{}", self.buf)?;
                self.buf.clear();
                self.buf.push_str("  ");
            }
            self.buf.push_str(&piece);
            first = false;
        }
        self.buf.push_str(tail);
        writeln!(self.out, "{}", self.buf)
    }

    fn objective(&mut self, sense: &str, terms: impl IntoIterator<Item = (i64, Var)>) -> io::Result<()> {
        self.line(sense)?;
        self.row("obj:", terms, "")?;
        self.line("Subject To")
    }

    fn constraint(
        &mut self,
        family: &'static str,
        name: fmt::Arguments<'_>,
        terms: impl IntoIterator<Item = (i64, Var)>,
        op: &str,
        rhs: i64,
    ) -> io::Result<()> {
        *self.stats.constraints.entry(family).or_default() += 1;
        self.row(&format!("{name}:"), terms, &format!(" {op} {rhs}"))
    }

    fn variables(&mut self, family: &'static str, count: usize) {
        *self.stats.variables.entry(family).or_default() += count;
    }

    fn list(&mut self, section: &str, vars: impl IntoIterator<Item = Var>) -> io::Result<()> {
        use std::fmt::Write as _;
        self.line(section)?;
        self.buf.clear();
        for v in vars {
            if self.buf.len() > WRAP {
                writeln!(self.out, "{}", self.buf)?;
                self.buf.clear();
            }
            let _ = write!(self.buf, " {v}");
        }
        if !self.buf.is_empty() {
            writeln!(self.out, "{}", self.buf)?;
        }
        Ok(())
    }

    fn finish(mut self) -> io::Result<ModelStats> {
        self.line("End")?;
        self.out.flush()?;
        Ok(self.stats)
    }
}

fn require_edges(g: &Graph) -> Result<()> {
    if g.m() == 0 {
        Err(Error::Edgeless)
    } else {
        Ok(())
    }
}

/// Assignment rows shared by the label-based models.
fn assignment<W: Write>(w: &mut LpWriter<W>, n: usize) -> io::Result<()> {
    for l in 1..=n {
        w.constraint("VERTICES", format_args!("VERTICES_{l}"), (0..n).map(|i| (1, Var::X(i, l))), "=", 1)?;
    }
    for i in 0..n {
        w.constraint("LABELS", format_args!("LABELS_{}", i + 1), (1..=n).map(|l| (1, Var::X(i, l))), "=", 1)?;
    }
    Ok(())
}

/// The maximum-degree vertex only takes labels up to `⌈n/2⌉`.
fn symmetry_fixings<W: Write>(w: &mut LpWriter<W>, g: &Graph) -> io::Result<()> {
    let n = g.n();
    let hub = g.max_degree_vertex().expect("non-empty graph");
    for l in n.div_ceil(2) + 1..=n {
        w.line(&format!(" {} = 0", Var::X(hub, l)))?;
        w.stats.fixings += 1;
    }
    Ok(())
}

fn x_vars(n: usize) -> impl Iterator<Item = Var> {
    (0..n).flat_map(move |i| (1..=n).map(move |l| Var::X(i, l)))
}

fn write_f_lit<W: Write>(w: &mut LpWriter<W>, g: &Graph, ub: Option<usize>) -> io::Result<()> {
    let n = g.n();
    let big_m = match ub {
        Some(u) => (n - 1 + u) as i64,
        None => 2 * (n as i64 - 1),
    };
    w.objective("Maximize", [(1, Var::B)])?;
    assignment(w, n)?;
    for i in 0..n {
        let terms = (1..=n).map(|l| (l as i64, Var::X(i, l))).chain([(-1, Var::L(i))]);
        w.constraint("LINK", format_args!("LINK_{}", i + 1), terms, "=", 0)?;
    }
    for &(i, j) in g.edges() {
        let terms = [(1, Var::B), (-1, Var::L(i)), (1, Var::L(j)), (-big_m, Var::Y(i, j))];
        w.constraint("OBJ-1", format_args!("OBJ1_{}_{}", i + 1, j + 1), terms, "<=", 0)?;
    }
    for &(i, j) in g.edges() {
        let terms = [(1, Var::B), (-1, Var::L(j)), (1, Var::L(i)), (-big_m, Var::Z(i, j))];
        w.constraint("OBJ-2", format_args!("OBJ2_{}_{}", i + 1, j + 1), terms, "<=", 0)?;
    }
    for &(i, j) in g.edges() {
        let terms = [(1, Var::Y(i, j)), (1, Var::Z(i, j))];
        w.constraint("OBJ-3", format_args!("OBJ3_{}_{}", i + 1, j + 1), terms, "=", 1)?;
    }
    w.line("Bounds")?;
    w.line(&format!(" 1 <= b <= {}", ub.unwrap_or(n - 1)))?;
    for i in 0..n {
        w.line(&format!(" 1 <= {} <= {n}", Var::L(i)))?;
    }
    symmetry_fixings(w, g)?;
    w.list("General", (0..n).map(Var::L))?;
    let edges = g.edges();
    w.list(
        "Binary",
        x_vars(n)
            .chain(edges.iter().map(|&(i, j)| Var::Y(i, j)))
            .chain(edges.iter().map(|&(i, j)| Var::Z(i, j))),
    )?;
    w.variables("x", n * n);
    w.variables("l", n);
    w.variables("y", g.m());
    w.variables("z", g.m());
    w.variables("b", 1);
    Ok(())
}

fn write_f<W: Write>(w: &mut LpWriter<W>, g: &Graph, ub: usize, vertex_n: bool) -> io::Result<()> {
    let n = g.n();
    let cap = |a: usize, b: usize| a.abs_diff(b).min(ub) as i64;
    w.objective("Maximize", [(1, Var::B)])?;
    assignment(w, n)?;
    for l in 1..=n {
        for &(i, j) in g.edges() {
            let terms = std::iter::once((1, Var::B))
                .chain((1..=n).map(|l2| (-cap(l, l2), Var::X(i, l2))))
                .chain((1..=n).map(|l2| (-cap(l, l2), Var::X(j, l2))));
            w.constraint("OBJ-N", format_args!("OBJN_{l}_{}_{}", i + 1, j + 1), terms, "<=", 0)?;
        }
    }
    if vertex_n {
        // b + (UB − d)·(Σ_{|l−l'|≤d} x_i_l' + Σ_{i'∈N(i)} x_i'_l) ≤ 2·UB − d
        for i in 0..n {
            for l in 1..=n {
                for d in 1..ub {
                    let c = (ub - d) as i64;
                    let terms = std::iter::once((1, Var::B))
                        .chain((l.saturating_sub(d).max(1)..=(l + d).min(n)).map(|l2| (c, Var::X(i, l2))))
                        .chain(g.neighbors(i).iter().map(|&u| (c, Var::X(u, l))));
                    let rhs = (2 * ub - d) as i64;
                    w.constraint("VERTEX-N", format_args!("VERTEXN_{}_{l}_{d}", i + 1), terms, "<=", rhs)?;
                }
            }
        }
    }
    w.line("Bounds")?;
    w.line(&format!(" 1 <= b <= {ub}"))?;
    symmetry_fixings(w, g)?;
    w.list("Binary", x_vars(n))?;
    w.variables("x", n * n);
    w.variables("b", 1);
    Ok(())
}

fn write_f_e_k<W: Write>(w: &mut LpWriter<W>, g: &Graph, k: usize, clique_e: bool) -> io::Result<()> {
    let n = g.n();
    w.objective("Minimize", std::iter::empty())?;
    assignment(w, n)?;
    for &(i, j) in g.edges() {
        for l2 in 1..=n - k {
            let terms = (l2..=l2 + k).map(|l| (1, Var::X(i, l))).chain((l2..=l2 + k).map(|l| (1, Var::X(j, l))));
            w.constraint("OBJ-k", format_args!("OBJK_{}_{}_{l2}", i + 1, j + 1), terms, "<=", 1)?;
        }
    }
    if clique_e {
        for (c, clique) in CliqueCatalog::build(g).cliques().iter().enumerate() {
            for l2 in 1..=n - k {
                let terms = clique.iter().flat_map(|&v| (l2..=l2 + k).map(move |l| (1, Var::X(v, l))));
                w.constraint("CLIQUE-E", format_args!("CLIQUEE_{}_{l2}", c + 1), terms, "<=", 1)?;
            }
        }
    }
    w.line("Bounds")?;
    symmetry_fixings(w, g)?;
    w.list("Binary", x_vars(n))?;
    w.variables("x", n * n);
    Ok(())
}

fn write_ssp<W: Write>(w: &mut LpWriter<W>, g: &Graph) -> io::Result<()> {
    let n = g.n();
    w.objective("Maximize", (0..n).map(|i| (1, Var::S(i))))?;
    for &(i, j) in g.edges() {
        let terms = [(1, Var::S(i)), (1, Var::S(j))];
        w.constraint("EDGE", format_args!("EDGE_{}_{}", i + 1, j + 1), terms, "<=", 1)?;
    }
    w.list("Binary", (0..n).map(Var::S))?;
    w.variables("x", n);
    Ok(())
}

fn write_gcp<W: Write>(w: &mut LpWriter<W>, g: &Graph, colors: usize) -> io::Result<()> {
    let n = g.n();
    w.objective("Minimize", (1..=colors).map(|c| (1, Var::W(c))))?;
    for c in 1..=colors {
        for &(i, j) in g.edges() {
            let terms = [(1, Var::X(i, c)), (1, Var::X(j, c)), (-1, Var::W(c))];
            w.constraint("EDGE-COLOR", format_args!("COLOR_{}_{}_{c}", i + 1, j + 1), terms, "<=", 0)?;
        }
    }
    for i in 0..n {
        w.constraint("ASSIGN", format_args!("ASSIGN_{}", i + 1), (1..=colors).map(|c| (1, Var::X(i, c))), "=", 1)?;
    }
    w.list(
        "Binary",
        (0..n)
            .flat_map(|i| (1..=colors).map(move |c| Var::X(i, c)))
            .chain((1..=colors).map(Var::W)),
    )?;
    w.variables("x", n * colors);
    w.variables("w", colors);
    Ok(())
}

/// Streams the model to `out` and returns its statistics.
pub fn write_model<W: Write>(g: &Graph, formulation: &Formulation, out: W) -> Result<ModelStats> {
    let n = g.n();
    match *formulation {
        Formulation::FLit { ub } => {
            require_edges(g)?;
            if ub == Some(0) {
                return Err(Error::OutOfRange { value: 0, lo: 1, hi: n - 1 });
            }
        }
        Formulation::F { ub, .. } => {
            require_edges(g)?;
            if ub == 0 {
                return Err(Error::OutOfRange { value: 0, lo: 1, hi: n - 1 });
            }
        }
        Formulation::FEk { k, .. } => {
            require_edges(g)?;
            if k < 1 || k + 2 > n {
                return Err(Error::OutOfRange {
                    value: k,
                    lo: 1,
                    hi: n.saturating_sub(2),
                });
            }
        }
        Formulation::Ssp => {}
        Formulation::Gcp { color_ub } => {
            if color_ub < 1 || color_ub > n.max(1) {
                return Err(Error::OutOfRange {
                    value: color_ub,
                    lo: 1,
                    hi: n.max(1),
                });
            }
        }
    }
    let mut w = LpWriter::new(BufWriter::new(out));
    w.line(&format!("\\ {} model, n = {}, m = {}", formulation.tag(), n, g.m()))?;
    match *formulation {
        Formulation::FLit { ub } => write_f_lit(&mut w, g, ub)?,
        Formulation::F { ub, vertex_n } => write_f(&mut w, g, ub, vertex_n)?,
        Formulation::FEk { k, clique_e } => write_f_e_k(&mut w, g, k, clique_e)?,
        Formulation::Ssp => write_ssp(&mut w, g)?,
        Formulation::Gcp { color_ub } => write_gcp(&mut w, g, color_ub)?,
    }
    Ok(w.finish()?)
}

/// Builds the model in memory.
pub fn export(g: &Graph, formulation: &Formulation) -> Result<ModelText> {
    let mut bytes = Vec::new();
    let stats = write_model(g, formulation, &mut bytes)?;
    Ok(ModelText {
        body: String::from_utf8(bytes).expect("model text is ASCII"),
        stats,
    })
}

pub fn export_f_lit(g: &Graph, ub: Option<usize>) -> Result<ModelText> {
    export(g, &Formulation::FLit { ub })
}

pub fn export_f(g: &Graph, ub: usize, include_vertex_n: bool) -> Result<ModelText> {
    export(
        g,
        &Formulation::F {
            ub,
            vertex_n: include_vertex_n,
        },
    )
}

pub fn export_f_e_k(g: &Graph, k: usize) -> Result<ModelText> {
    export(g, &Formulation::FEk { k, clique_e: false })
}

pub fn export_ssp(g: &Graph) -> Result<ModelText> {
    export(g, &Formulation::Ssp)
}

pub fn export_gcp(g: &Graph, color_ub: usize) -> Result<ModelText> {
    export(g, &Formulation::Gcp { color_ub })
}

/// Reader for the LP subset written above.
pub mod lp {
    use std::collections::BTreeMap;

    use crate::error::{Error, Result};

    #[derive(Debug, Clone, Copy, PartialEq, Eq)]
    pub enum Sense {
        Maximize,
        Minimize,
    }

    #[derive(Debug, Clone, Copy, PartialEq, Eq)]
    pub enum Op {
        Le,
        Ge,
        Eq,
    }

    #[derive(Debug, Clone, PartialEq, Eq)]
    pub struct Constraint {
        pub name: String,
        pub terms: Vec<(i64, String)>,
        pub op: Op,
        pub rhs: i64,
    }

    impl Constraint {
        pub fn holds(&self, value: impl Fn(&str) -> i64) -> bool {
            let lhs: i64 = self.terms.iter().map(|(c, v)| c * value(v)).sum();
            match self.op {
                Op::Le => lhs <= self.rhs,
                Op::Ge => lhs >= self.rhs,
                Op::Eq => lhs == self.rhs,
            }
        }
    }

    #[derive(Debug, Clone, PartialEq, Eq)]
    pub struct LpModel {
        pub sense: Sense,
        pub objective: Vec<(i64, String)>,
        pub constraints: Vec<Constraint>,
        /// `(lower, upper)`; absent sides are unbounded in the file.
        pub bounds: BTreeMap<String, (Option<i64>, Option<i64>)>,
        pub general: Vec<String>,
        pub binary: Vec<String>,
    }

    impl LpModel {
        /// Names of the constraints violated by `value`.
        pub fn violated(&self, value: impl Fn(&str) -> i64) -> Vec<&str> {
            self.constraints
                .iter()
                .filter(|c| !c.holds(&value))
                .map(|c| c.name.as_str())
                .collect()
        }
    }

    #[derive(PartialEq)]
    enum Section {
        None,
        Objective,
        Constraints,
        Bounds,
        General,
        Binary,
        End,
    }

    fn int(tok: &str, line: usize) -> Result<i64> {
        tok.parse().map_err(|_| Error::parse(line, format!("expected an integer, found {tok:?}")))
    }

    /// Parses `[sign] [coef] var` terms from `toks` until a relation or the end.
    fn terms<'a>(toks: &mut std::iter::Peekable<impl Iterator<Item = (usize, &'a str)>>) -> Result<Vec<(i64, String)>> {
        let mut out = Vec::new();
        while let Some(&(line, tok)) = toks.peek() {
            if matches!(tok, "<=" | ">=" | "=" | "<" | ">" | "=<" | "=>") {
                break;
            }
            toks.next();
            let mut sign = 1;
            let mut tok = tok;
            if tok == "+" || tok == "-" {
                sign = if tok == "-" { -1 } else { 1 };
                tok = toks.next().ok_or_else(|| Error::parse(line, "dangling sign"))?.1;
            }
            let mut coef = 1;
            if tok.starts_with(|c: char| c.is_ascii_digit()) {
                coef = int(tok, line)?;
                tok = toks.next().ok_or_else(|| Error::parse(line, "coefficient without variable"))?.1;
            }
            out.push((sign * coef, tok.to_string()));
        }
        Ok(out)
    }

    pub fn parse(text: &str) -> Result<LpModel> {
        let mut sense = None;
        let mut section = Section::None;
        let mut objective_toks = Vec::new();
        let mut constraint_toks = Vec::new();
        let mut bounds = BTreeMap::new();
        let mut general = Vec::new();
        let mut binary = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let body = raw.trim();
            if body.is_empty() || body.starts_with('\\') {
                continue;
            }
            let header = match body.to_ascii_lowercase().as_str() {
                "maximize" | "maximum" | "max" => {
                    sense = Some(Sense::Maximize);
                    Some(Section::Objective)
                }
                "minimize" | "minimum" | "min" => {
                    sense = Some(Sense::Minimize);
                    Some(Section::Objective)
                }
                "subject to" | "st" | "s.t." => Some(Section::Constraints),
                "bounds" => Some(Section::Bounds),
                "general" | "generals" => Some(Section::General),
                "binary" | "binaries" => Some(Section::Binary),
                "end" => Some(Section::End),
                _ => None,
            };
            if let Some(h) = header {
                section = h;
                continue;
            }
            let toks = body.split_whitespace().map(|t| (line, t));
            match section {
                Section::Objective => objective_toks.extend(toks),
                Section::Constraints => constraint_toks.extend(toks),
                Section::General => general.extend(toks.map(|(_, t)| t.to_string())),
                Section::Binary => binary.extend(toks.map(|(_, t)| t.to_string())),
                Section::Bounds => {
                    let t: Vec<&str> = body.split_whitespace().collect();
                    match t.as_slice() {
                        [lo, "<=", v, "<=", hi] => {
                            bounds.insert(v.to_string(), (Some(int(lo, line)?), Some(int(hi, line)?)));
                        }
                        [v, "=", x] => {
                            let x = int(x, line)?;
                            bounds.insert(v.to_string(), (Some(x), Some(x)));
                        }
                        [v, "<=", hi] => {
                            bounds.insert(v.to_string(), (Some(0), Some(int(hi, line)?)));
                        }
                        [v, ">=", lo] => {
                            bounds.insert(v.to_string(), (Some(int(lo, line)?), None));
                        }
                        _ => return Err(Error::parse(line, format!("unsupported bound {body:?}"))),
                    }
                }
                Section::None | Section::End => {
                    return Err(Error::parse(line, "content outside a section"));
                }
            }
        }
        if section != Section::End {
            return Err(Error::parse(text.lines().count(), "missing End"));
        }
        let sense = sense.ok_or_else(|| Error::parse(1, "missing objective sense"))?;

        let mut toks = objective_toks.into_iter().peekable();
        if let Some(&(_, t)) = toks.peek() {
            if t.ends_with(':') {
                toks.next();
            }
        }
        let objective = terms(&mut toks)?;
        if let Some((line, t)) = toks.next() {
            return Err(Error::parse(line, format!("unexpected {t:?} in objective")));
        }

        let mut constraints = Vec::new();
        let mut toks = constraint_toks.into_iter().peekable();
        while let Some((line, t)) = toks.next() {
            let name = t
                .strip_suffix(':')
                .ok_or_else(|| Error::parse(line, format!("expected a constraint name, found {t:?}")))?
                .to_string();
            let lhs = terms(&mut toks)?;
            let (line, op) = toks.next().ok_or_else(|| Error::parse(line, "constraint without relation"))?;
            let op = match op {
                "<=" | "<" | "=<" => Op::Le,
                ">=" | ">" | "=>" => Op::Ge,
                "=" => Op::Eq,
                _ => unreachable!("terms stops at relations"),
            };
            let (line, rhs) = toks.next().ok_or_else(|| Error::parse(line, "constraint without right-hand side"))?;
            constraints.push(Constraint {
                name,
                terms: lhs,
                op,
                rhs: int(rhs, line)?,
            });
        }
        Ok(LpModel {
            sense,
            objective,
            constraints,
            bounds,
            general,
            binary,
        })
    }
}
