//! Instance readers and writers: MatrixMarket coordinate files and plain edge lists.

use std::fmt::Write as _;
use std::path::Path;

use log::warn;

use crate::error::{Error, Result};
use crate::graph::{BuildReport, Graph};

/// A parsed instance together with what was dropped on the way in.
#[derive(Debug, Clone)]
pub struct Parsed {
    pub graph: Graph,
    pub report: BuildReport,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DuplicatePolicy {
    /// Merge duplicate edges and log a warning.
    #[default]
    Merge,
    Reject,
}

fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('%') && !l.starts_with('#'))
}

fn parse_usize(tok: &str, line: usize, what: &str) -> Result<usize> {
    tok.parse::<usize>()
        .map_err(|_| Error::parse(line, format!("invalid {what} '{tok}'")))
}

fn report_drops(report: &BuildReport) {
    if report.self_loops > 0 {
        warn!("dropped {} diagonal entries (self-loops)", report.self_loops);
    }
    if report.duplicates > 0 {
        warn!("dropped {} duplicate entries", report.duplicates);
    }
}

/// Reads a MatrixMarket coordinate matrix as the undirected graph of its
/// off-diagonal nonzeros. Values are ignored; the pattern is symmetrized.
pub fn parse_matrix_market(text: &str) -> Result<Parsed> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (hline, header) = lines
        .by_ref()
        .find(|(_, l)| !l.trim().is_empty())
        .ok_or_else(|| Error::parse(1, "empty input"))?;
    let toks: Vec<String> = header.split_whitespace().map(str::to_ascii_lowercase).collect();
    if toks.len() != 5 || toks[0] != "%%matrixmarket" || toks[1] != "matrix" {
        return Err(Error::parse(hline, "expected '%%MatrixMarket matrix coordinate <field> <symmetry>'"));
    }
    if toks[2] != "coordinate" {
        return Err(Error::parse(hline, format!("unsupported format '{}'", toks[2])));
    }
    if !matches!(toks[3].as_str(), "pattern" | "real" | "integer" | "complex") {
        return Err(Error::parse(hline, format!("unknown field '{}'", toks[3])));
    }
    if !matches!(toks[4].as_str(), "general" | "symmetric" | "skew-symmetric" | "hermitian") {
        return Err(Error::parse(hline, format!("unknown symmetry '{}'", toks[4])));
    }
    let rest: String = lines.map(|(_, l)| format!("{l}\n")).collect();
    parse_coordinate_body(&rest, hline)
}

/// Coordinate body: a size line `rows cols nnz` followed by `nnz` entries.
/// `offset` is the number of lines preceding `text` in the original input.
fn parse_coordinate_body(text: &str, offset: usize) -> Result<Parsed> {
    let mut lines = data_lines(text).map(|(i, l)| (i + offset, l));
    let (sline, size) = lines
        .next()
        .ok_or_else(|| Error::parse(offset + 1, "missing size line"))?;
    let dims: Vec<&str> = size.split_whitespace().collect();
    if dims.len() != 3 {
        return Err(Error::parse(sline, "size line must be 'rows cols nnz'"));
    }
    let rows = parse_usize(dims[0], sline, "row count")?;
    let cols = parse_usize(dims[1], sline, "column count")?;
    let nnz = parse_usize(dims[2], sline, "entry count")?;
    if rows != cols {
        return Err(Error::parse(sline, format!("matrix is not square ({rows}x{cols})")));
    }
    if rows == 0 {
        return Err(Error::parse(sline, "empty graph (n = 0)"));
    }
    let mut entries = Vec::with_capacity(nnz);
    let mut last_line = sline;
    for (line, l) in lines {
        if entries.len() == nnz {
            return Err(Error::parse(line, format!("more than the declared {nnz} entries")));
        }
        let mut it = l.split_whitespace();
        let (Some(a), Some(b)) = (it.next(), it.next()) else {
            return Err(Error::parse(line, "entry must start with 'row col'"));
        };
        let i = parse_usize(a, line, "row index")?;
        let j = parse_usize(b, line, "column index")?;
        for x in [i, j] {
            if x == 0 || x > rows {
                return Err(Error::parse(line, format!("index {x} outside 1..{rows}")));
            }
        }
        entries.push((i - 1, j - 1));
        last_line = line;
    }
    if entries.len() < nnz {
        return Err(Error::parse(
            last_line,
            format!("expected {nnz} entries, found {}", entries.len()),
        ));
    }
    // A general matrix lists both (i,j) and (j,i); only exact repeats count.
    let mut seen = std::collections::HashSet::with_capacity(entries.len());
    let repeats = entries.iter().filter(|&&(i, j)| i != j && !seen.insert((i, j))).count();
    let (graph, mut report) = Graph::build(rows, entries)?;
    report.duplicates = repeats;
    report_drops(&report);
    Ok(Parsed { graph, report })
}

/// Reads the plain edge-list format: a line `n m`, then `m` lines `u v`
/// with 1-based endpoints.
pub fn parse_edge_list(text: &str, policy: DuplicatePolicy) -> Result<Parsed> {
    let mut lines = data_lines(text);
    let (hline, header) = lines.next().ok_or_else(|| Error::parse(1, "empty input"))?;
    let toks: Vec<&str> = header.split_whitespace().collect();
    if toks.len() != 2 {
        return Err(Error::parse(hline, "header must be 'n m'"));
    }
    let n = parse_usize(toks[0], hline, "vertex count")?;
    let m = parse_usize(toks[1], hline, "edge count")?;
    if n == 0 {
        return Err(Error::parse(hline, "empty graph (n = 0)"));
    }
    let mut edges = Vec::with_capacity(m);
    let mut last_line = hline;
    for (line, l) in lines {
        if edges.len() == m {
            return Err(Error::parse(line, format!("more than the declared {m} edges")));
        }
        let toks: Vec<&str> = l.split_whitespace().collect();
        if toks.len() != 2 {
            return Err(Error::parse(line, "edge line must be 'u v'"));
        }
        let u = parse_usize(toks[0], line, "endpoint")?;
        let v = parse_usize(toks[1], line, "endpoint")?;
        for x in [u, v] {
            if x == 0 || x > n {
                return Err(Error::parse(line, format!("vertex {x} outside 1..{n}")));
            }
        }
        if u == v {
            return Err(Error::parse(line, format!("self-loop at vertex {u}")));
        }
        edges.push((u - 1, v - 1));
        last_line = line;
    }
    if edges.len() < m {
        return Err(Error::parse(
            last_line,
            format!("expected {m} edge lines, found {}", edges.len()),
        ));
    }
    let (graph, report) = Graph::build(n, edges)?;
    if report.duplicates > 0 && policy == DuplicatePolicy::Reject {
        return Err(Error::parse(hline, format!("{} duplicate edges", report.duplicates)));
    }
    report_drops(&report);
    Ok(Parsed { graph, report })
}

/// Detects the format: a `%%MatrixMarket` banner, a bare coordinate body
/// (`rows cols nnz` size line), or an edge list (`n m` header).
pub fn parse_instance(text: &str) -> Result<Parsed> {
    let first = text.lines().map(str::trim).find(|l| !l.is_empty());
    match first {
        Some(l) if l.to_ascii_lowercase().starts_with("%%matrixmarket") => parse_matrix_market(text),
        _ => match data_lines(text).next() {
            Some((_, l)) if l.split_whitespace().count() == 3 => parse_coordinate_body(text, 0),
            _ => parse_edge_list(text, DuplicatePolicy::Merge),
        },
    }
}

/// Reads and parses an instance file.
pub fn read_instance(path: &Path) -> Result<Parsed> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_instance(&text)
}

/// File name up to the first dot: `pores_1.mtx.rnd` → `pores_1`.
pub fn instance_name(path: &Path) -> String {
    let file = path.file_name().map(|f| f.to_string_lossy().into_owned()).unwrap_or_default();
    match file.split_once('.') {
        Some((stem, _)) if !stem.is_empty() => stem.to_string(),
        _ => file,
    }
}

pub fn write_edge_list(g: &Graph) -> String {
    let mut out = format!("{} {}\n", g.n(), g.m());
    for &(u, v) in g.edges() {
        let _ = writeln!(out, "{} {}", u + 1, v + 1);
    }
    out
}

/// Symmetric pattern matrix, lower triangle.
pub fn write_matrix_market(g: &Graph) -> String {
    let mut out = String::from("%%MatrixMarket matrix coordinate pattern symmetric\n");
    let _ = writeln!(out, "{} {} {}", g.n(), g.n(), g.m());
    for &(u, v) in g.edges() {
        let _ = writeln!(out, "{} {}", v + 1, u + 1);
    }
    out
}
