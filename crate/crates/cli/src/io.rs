//! Text formats for instances.
//!
//! ```text
//! poset <d>          graph <d>          vrep <D> <n>
//! <i> < <j>          <i> <j>            <x_1> .. <x_D>    (n rows)
//! ```
//!
//! Indices are 1-based. Blank lines and everything after `#` are ignored.
//! Poset lines may list any relations; the transitive closure is taken.

use std::fmt;
use std::path::Path;

use polycay::{Error as CoreError, Graph, LatticePolytope, Poset};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InstanceKind {
    Poset,
    Graph,
    Vrep,
}

#[derive(Debug, Clone)]
pub enum Instance {
    Poset(Poset),
    Graph(Graph),
    Vrep(LatticePolytope),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            write!(f, "{}", self.message)
        } else {
            write!(f, "line {}: {}", self.line, self.message)
        }
    }
}

impl std::error::Error for ParseError {}

fn err(line: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        message: message.into(),
    }
}

/// Lines with comments stripped, paired with 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("");
        let toks: Vec<&str> = l.split_whitespace().collect();
        (!toks.is_empty()).then_some((i + 1, toks))
    })
}

fn number<T: std::str::FromStr>(line: usize, tok: &str) -> Result<T, ParseError> {
    tok.parse()
        .map_err(|_| err(line, format!("expected an integer, found `{tok}`")))
}

fn index(line: usize, tok: &str, d: usize) -> Result<usize, ParseError> {
    let i: usize = number(line, tok)?;
    if i == 0 || i > d {
        return Err(err(line, format!("index {i} outside 1..={d}")));
    }
    Ok(i - 1)
}

fn from_core(e: CoreError) -> ParseError {
    match e {
        CoreError::Cycle(w) => {
            let items: Vec<String> = w.iter().map(usize::to_string).collect();
            err(
                0,
                format!("relations contain a cycle {{{}}}", items.join(",")),
            )
        }
        other => err(0, other.to_string()),
    }
}

pub fn parse_instance(text: &str, kind: InstanceKind) -> Result<Instance, ParseError> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or_else(|| err(0, "empty input"))?;
    let expect = match kind {
        InstanceKind::Poset => "poset",
        InstanceKind::Graph => "graph",
        InstanceKind::Vrep => "vrep",
    };
    if header[0] != expect {
        return Err(err(
            hl,
            format!("expected header `{expect}`, found `{}`", header[0]),
        ));
    }
    let arity = if kind == InstanceKind::Vrep { 3 } else { 2 };
    if header.len() != arity {
        return Err(err(hl, "malformed header"));
    }
    let d: usize = number(hl, header[1])?;
    if d == 0 {
        return Err(err(hl, "dimension must be positive"));
    }
    match kind {
        InstanceKind::Poset => {
            let mut rels = Vec::new();
            for (ln, toks) in lines {
                if toks.len() != 3 || toks[1] != "<" {
                    return Err(err(ln, "expected `i < j`"));
                }
                rels.push((index(ln, toks[0], d)?, index(ln, toks[2], d)?));
            }
            Poset::from_relations(d, &rels)
                .map(Instance::Poset)
                .map_err(from_core)
        }
        InstanceKind::Graph => {
            let mut edges = Vec::new();
            for (ln, toks) in lines {
                if toks.len() != 2 {
                    return Err(err(ln, "expected `i j`"));
                }
                let (a, b) = (index(ln, toks[0], d)?, index(ln, toks[1], d)?);
                if a == b {
                    return Err(err(ln, "loops are not allowed"));
                }
                edges.push((a, b));
            }
            Graph::from_edges(d, &edges)
                .map(Instance::Graph)
                .map_err(from_core)
        }
        InstanceKind::Vrep => {
            let n: usize = number(hl, header[2])?;
            let mut rows = Vec::new();
            for (ln, toks) in lines {
                if toks.len() != d {
                    return Err(err(
                        ln,
                        format!("expected {d} coordinates, found {}", toks.len()),
                    ));
                }
                rows.push(
                    toks.iter()
                        .map(|t| number::<i64>(ln, t))
                        .collect::<Result<Vec<_>, _>>()?,
                );
            }
            if rows.len() != n {
                return Err(err(
                    0,
                    format!("header announces {n} points, found {}", rows.len()),
                ));
            }
            LatticePolytope::new(d, rows)
                .map(Instance::Vrep)
                .map_err(from_core)
        }
    }
}

/// Reads a file; the kind is taken from its header.
pub fn read_any(path: &Path) -> anyhow::Result<Instance> {
    let text =
        std::fs::read_to_string(path).map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))?;
    let kind = match content_lines(&text).next().map(|(_, t)| t[0]) {
        Some("poset") => InstanceKind::Poset,
        Some("graph") => InstanceKind::Graph,
        Some("vrep") => InstanceKind::Vrep,
        _ => {
            return Err(anyhow::anyhow!(
                "{}: unknown instance header",
                path.display()
            ))
        }
    };
    parse_instance(&text, kind).map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))
}

pub fn read_instance(path: &Path, kind: InstanceKind) -> anyhow::Result<Instance> {
    let text =
        std::fs::read_to_string(path).map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))?;
    parse_instance(&text, kind).map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))
}

pub fn format_poset(p: &Poset) -> String {
    let mut s = format!("poset {}\n", p.len());
    for (i, j) in p.cover_relations() {
        s += &format!("{} < {}\n", i + 1, j + 1);
    }
    s
}

pub fn format_graph(g: &Graph) -> String {
    let mut s = format!("graph {}\n", g.len());
    for (i, j) in g.edges() {
        s += &format!("{} {}\n", i + 1, j + 1);
    }
    s
}
