//! EVLP: a sorted vertex file plus a sorted edge file, space separated.
//!
//! Ordering is part of the format and is checked, never repaired.

use std::fmt;
use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use thiserror::Error;

use super::{valid_weight, Graph, VertexId};

#[derive(Debug, Clone, PartialEq)]
pub enum EvlpRule {
    NonAscii,
    BlankLine,
    /// Wrong field count, stray whitespace or an unparsable token.
    Malformed(String),
    MissingWeight,
    InvalidWeight(String),
    DuplicateVertex(VertexId),
    VertexOrder { previous: VertexId, current: VertexId },
    SelfLoop(VertexId),
    DuplicateEdge(VertexId, VertexId),
    EdgeOrder,
    /// Undirected edge listed with the larger identifier first.
    Orientation,
    UnknownEndpoint(VertexId),
}

impl fmt::Display for EvlpRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvlpRule::NonAscii => write!(f, "non-ASCII content"),
            EvlpRule::BlankLine => write!(f, "blank line"),
            EvlpRule::Malformed(why) => write!(f, "malformed line: {why}"),
            EvlpRule::MissingWeight => write!(f, "weighted edge line has no weight"),
            EvlpRule::InvalidWeight(tok) => {
                write!(f, "weight {tok:?} is not a finite non-negative number")
            }
            EvlpRule::DuplicateVertex(v) => write!(f, "duplicate vertex {v}"),
            EvlpRule::VertexOrder { previous, current } => {
                write!(f, "vertex {current} listed after {previous} (must ascend)")
            }
            EvlpRule::SelfLoop(v) => write!(f, "self-loop on vertex {v}"),
            EvlpRule::DuplicateEdge(s, d) => write!(f, "duplicate edge {s} {d}"),
            EvlpRule::EdgeOrder => write!(f, "edges not in lexicographic order"),
            EvlpRule::Orientation => {
                write!(f, "undirected edge must list the smaller identifier first")
            }
            EvlpRule::UnknownEndpoint(v) => write!(f, "edge endpoint {v} not in vertex file"),
        }
    }
}

#[derive(Debug, Error)]
pub enum EvlpError {
    #[error("{file}:{line}: {rule}")]
    Format {
        file: String,
        line: usize,
        rule: EvlpRule,
    },
    #[error("{file}: {source}")]
    Io {
        file: String,
        #[source]
        source: io::Error,
    },
}

impl EvlpError {
    pub fn rule(&self) -> Option<&EvlpRule> {
        match self {
            EvlpError::Format { rule, .. } => Some(rule),
            EvlpError::Io { .. } => None,
        }
    }

    pub fn line(&self) -> Option<usize> {
        match self {
            EvlpError::Format { line, .. } => Some(*line),
            EvlpError::Io { .. } => None,
        }
    }
}

#[derive(Clone, Copy)]
struct Pos<'a> {
    name: &'a str,
    line: usize,
}

impl Pos<'_> {
    fn err(self, rule: EvlpRule) -> EvlpError {
        EvlpError::Format {
            file: self.name.to_string(),
            line: self.line,
            rule,
        }
    }
}

struct LineReader<'a, R> {
    name: &'a str,
    inner: R,
    buf: String,
    line: usize,
}

impl<'a, R: BufRead> LineReader<'a, R> {
    fn new(name: &'a str, inner: R) -> Self {
        LineReader {
            name,
            inner,
            buf: String::new(),
            line: 0,
        }
    }

    fn pos(&self) -> Pos<'a> {
        Pos {
            name: self.name,
            line: self.line,
        }
    }

    fn err(&self, rule: EvlpRule) -> EvlpError {
        self.pos().err(rule)
    }

    /// Next line split on single spaces.
    fn next_fields(&mut self) -> Result<Option<(Pos<'a>, Vec<&str>)>, EvlpError> {
        self.buf.clear();
        let read = self
            .inner
            .read_line(&mut self.buf)
            .map_err(|source| EvlpError::Io {
                file: self.name.to_string(),
                source,
            })?;
        if read == 0 {
            return Ok(None);
        }
        self.line += 1;
        let text = self.buf.strip_suffix('\n').unwrap_or(&self.buf);
        if !text.is_ascii() {
            return Err(self.err(EvlpRule::NonAscii));
        }
        if text.is_empty() {
            return Err(self.err(EvlpRule::BlankLine));
        }
        let fields: Vec<&str> = text.split(' ').collect();
        if fields.iter().any(|f| f.is_empty()) {
            return Err(self.err(EvlpRule::Malformed("empty field".into())));
        }
        Ok(Some((self.pos(), fields)))
    }
}

fn parse_id(tok: &str) -> Result<VertexId, EvlpRule> {
    // `i64::from_str` accepts a leading '+', which EVLP never writes.
    if tok.starts_with('+') {
        return Err(EvlpRule::Malformed(format!("bad vertex id {tok:?}")));
    }
    tok.parse()
        .map_err(|_| EvlpRule::Malformed(format!("bad vertex id {tok:?}")))
}

/// Reads an EVLP pair, naming the inputs "vertex file" and "edge file" in errors.
pub fn read_evlp<V: BufRead, E: BufRead>(
    vertices: V,
    edges: E,
    directed: bool,
    weighted: bool,
) -> Result<Graph, EvlpError> {
    read_evlp_named("vertex file", vertices, "edge file", edges, directed, weighted)
}

pub fn read_evlp_files(
    vertex_path: &Path,
    edge_path: &Path,
    directed: bool,
    weighted: bool,
) -> Result<Graph, EvlpError> {
    let open = |p: &Path| {
        File::open(p)
            .map(BufReader::new)
            .map_err(|source| EvlpError::Io {
                file: p.display().to_string(),
                source,
            })
    };
    let (vname, ename) = (vertex_path.display().to_string(), edge_path.display().to_string());
    read_evlp_named(
        &vname,
        open(vertex_path)?,
        &ename,
        open(edge_path)?,
        directed,
        weighted,
    )
}

/// Reads an EVLP pair. Property columns other than the edge weight are
/// dropped with a warning.
pub fn read_evlp_named<V: BufRead, E: BufRead>(
    vertex_name: &str,
    vertices: V,
    edge_name: &str,
    edges: E,
    directed: bool,
    weighted: bool,
) -> Result<Graph, EvlpError> {
    let mut ids: Vec<VertexId> = Vec::new();
    let mut vr = LineReader::new(vertex_name, vertices);
    let mut dropped_vertex_props = 0usize;
    while let Some((at, fields)) = vr.next_fields()? {
        let id = parse_id(fields[0]).map_err(|r| at.err(r))?;
        if fields.len() > 1 {
            dropped_vertex_props += 1;
        }
        if let Some(&prev) = ids.last() {
            if id == prev {
                return Err(at.err(EvlpRule::DuplicateVertex(id)));
            }
            if id < prev {
                return Err(at.err(EvlpRule::VertexOrder {
                    previous: prev,
                    current: id,
                }));
            }
        }
        ids.push(id);
    }
    if ids.len() > u32::MAX as usize {
        return Err(vr.err(EvlpRule::Malformed("too many vertices".into())));
    }
    if dropped_vertex_props > 0 {
        log::warn!("{vertex_name}: discarded vertex properties on {dropped_vertex_props} lines");
    }

    let mut er = LineReader::new(edge_name, edges);
    let mut list: Vec<(u32, u32)> = Vec::new();
    let mut weights: Vec<f64> = Vec::new();
    let mut last: Option<(VertexId, VertexId)> = None;
    let mut dropped_edge_props = 0usize;
    while let Some((at, fields)) = er.next_fields()? {
        if fields.len() < 2 {
            return Err(at.err(EvlpRule::Malformed("edge line needs two ids".into())));
        }
        let src = parse_id(fields[0]).map_err(|r| at.err(r))?;
        let dst = parse_id(fields[1]).map_err(|r| at.err(r))?;
        let props = &fields[2..];
        if weighted {
            let tok = *props.first().ok_or_else(|| at.err(EvlpRule::MissingWeight))?;
            let w: f64 = tok
                .parse()
                .map_err(|_| at.err(EvlpRule::InvalidWeight(tok.to_string())))?;
            if !valid_weight(w) {
                return Err(at.err(EvlpRule::InvalidWeight(tok.to_string())));
            }
            weights.push(w);
            if props.len() > 1 {
                dropped_edge_props += 1;
            }
        } else if !props.is_empty() {
            dropped_edge_props += 1;
        }
        if src == dst {
            return Err(at.err(EvlpRule::SelfLoop(src)));
        }
        if !directed && src > dst {
            return Err(at.err(EvlpRule::Orientation));
        }
        if let Some(prev) = last {
            if prev == (src, dst) {
                return Err(at.err(EvlpRule::DuplicateEdge(src, dst)));
            }
            if (src, dst) < prev {
                return Err(at.err(EvlpRule::EdgeOrder));
            }
        }
        last = Some((src, dst));
        let s = ids
            .binary_search(&src)
            .map_err(|_| at.err(EvlpRule::UnknownEndpoint(src)))?;
        let d = ids
            .binary_search(&dst)
            .map_err(|_| at.err(EvlpRule::UnknownEndpoint(dst)))?;
        list.push((s as u32, d as u32));
    }
    if dropped_edge_props > 0 {
        log::warn!("{edge_name}: discarded edge properties on {dropped_edge_props} lines");
    }
    Ok(Graph::from_sorted_parts(
        directed,
        ids,
        list,
        weighted.then_some(weights),
    ))
}

/// Writes the vertex and edge files to arbitrary sinks.
///
/// Weights use the shortest decimal that parses back to the same double.
pub fn write_evlp_to<V: Write, E: Write>(g: &Graph, mut vw: V, mut ew: E) -> io::Result<()> {
    for id in g.vertex_ids() {
        writeln!(vw, "{id}")?;
    }
    for (s, d, w) in g.edges() {
        match w {
            Some(w) => writeln!(ew, "{s} {d} {w:?}")?,
            None => writeln!(ew, "{s} {d}")?,
        }
    }
    vw.flush()?;
    ew.flush()
}

/// Renders the vertex file and edge file bodies.
pub fn write_evlp(g: &Graph) -> (String, String) {
    let (mut v, mut e) = (Vec::new(), Vec::new());
    write_evlp_to(g, &mut v, &mut e).expect("writing to memory cannot fail");
    (
        String::from_utf8(v).expect("ascii"),
        String::from_utf8(e).expect("ascii"),
    )
}

pub fn write_evlp_files(g: &Graph, vertex_path: &Path, edge_path: &Path) -> io::Result<()> {
    let vw = BufWriter::new(File::create(vertex_path)?);
    let ew = BufWriter::new(File::create(edge_path)?);
    write_evlp_to(g, vw, ew)
}

/// Minimizes an input dataset to the properties the benchmark uses.
///
/// Reads `input` (which may carry arbitrary property columns), keeps the
/// edge weight only when `keep_weights` is set, and writes the result to
/// `output`. Returns the loaded graph.
pub fn format_graph(
    input: (&Path, &Path),
    directed: bool,
    input_weighted: bool,
    keep_weights: bool,
    output: (&Path, &Path),
) -> Result<Graph, EvlpError> {
    let g = read_evlp_files(input.0, input.1, directed, input_weighted)?;
    let g = if input_weighted && !keep_weights {
        g.without_weights()
    } else {
        g
    };
    write_evlp_files(&g, output.0, output.1).map_err(|source| EvlpError::Io {
        file: output.1.display().to_string(),
        source,
    })?;
    Ok(g)
}
