//! Kernel output files and the three match rules used to validate them.
//!
//! An output file holds one `<id> <value>` line per vertex. Integers are
//! plain decimals, with `i64::MIN` and `i64::MAX` standing for negative and
//! positive infinity. Floats are written in scientific notation with a
//! fifteen-digit fraction (`2.476533217845853e-08`).

use std::collections::{BTreeMap, HashMap};
use std::fmt::{self, Write as _};
use std::fs;
use std::io;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::VertexId;
use crate::kernels::{Algorithm, FloatOutput, IntOutput};

pub const INT_NEG_INFINITY: i64 = i64::MIN;
pub const INT_POS_INFINITY: i64 = i64::MAX;

/// Relative tolerance of the epsilon rule.
pub const EPSILON: f64 = 1e-4;

/// Mismatches kept in a verdict; the total is always counted.
pub const MAX_REPORTED_MISMATCHES: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ValueKind {
    Int,
    Float,
}

impl ValueKind {
    pub fn of(algorithm: Algorithm) -> ValueKind {
        if algorithm.integer_output() {
            ValueKind::Int
        } else {
            ValueKind::Float
        }
    }
}

/// Per-vertex output of one kernel run.
#[derive(Debug, Clone, PartialEq)]
pub enum OutputVector {
    Int(IntOutput),
    Float(FloatOutput),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Value {
    Int(i64),
    Float(f64),
}

impl Value {
    /// Numeric view with the integer infinity encodings mapped to `±inf`.
    pub fn as_f64(self) -> f64 {
        match self {
            Value::Int(INT_NEG_INFINITY) => f64::NEG_INFINITY,
            Value::Int(INT_POS_INFINITY) => f64::INFINITY,
            Value::Int(i) => i as f64,
            Value::Float(f) => f,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(i) => write!(f, "{i}"),
            Value::Float(x) => f.write_str(&format_float(*x)),
        }
    }
}

impl OutputVector {
    pub fn kind(&self) -> ValueKind {
        match self {
            OutputVector::Int(_) => ValueKind::Int,
            OutputVector::Float(_) => ValueKind::Float,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            OutputVector::Int(m) => m.len(),
            OutputVector::Float(m) => m.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, v: VertexId) -> Option<Value> {
        match self {
            OutputVector::Int(m) => m.get(&v).map(|&i| Value::Int(i)),
            OutputVector::Float(m) => m.get(&v).map(|&x| Value::Float(x)),
        }
    }

    /// Entries in ascending vertex order.
    pub fn iter(&self) -> Box<dyn Iterator<Item = (VertexId, Value)> + '_> {
        match self {
            OutputVector::Int(m) => Box::new(m.iter().map(|(&k, &v)| (k, Value::Int(v)))),
            OutputVector::Float(m) => Box::new(m.iter().map(|(&k, &v)| (k, Value::Float(v)))),
        }
    }

    pub fn vertices(&self) -> Box<dyn Iterator<Item = VertexId> + '_> {
        match self {
            OutputVector::Int(m) => Box::new(m.keys().copied()),
            OutputVector::Float(m) => Box::new(m.keys().copied()),
        }
    }

    pub fn same_vertices(&self, other: &OutputVector) -> bool {
        self.len() == other.len() && self.vertices().eq(other.vertices())
    }
}

/// Formats a float with a fifteen-digit fraction and a signed two-digit exponent.
pub fn format_float(x: f64) -> String {
    if x == f64::INFINITY {
        return "+inf".into();
    }
    if x == f64::NEG_INFINITY {
        return "-inf".into();
    }
    let mut raw = format!("{x:.15e}");
    if raw.parse::<f64>().is_ok_and(f64::is_infinite) {
        // Rounding pushed a value near f64::MAX out of range; truncate instead.
        let wide = format!("{x:.16e}");
        let (m, e) = wide.split_once('e').expect("exponent present");
        raw = format!("{}e{e}", &m[..m.len() - 1]);
    }
    let (mantissa, exp) = raw.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    let sign = if exp < 0 { '-' } else { '+' };
    format!("{mantissa}e{sign}{:02}", exp.abs())
}

/// Renders one line per vertex, ascending by id.
pub fn write_output(v: &OutputVector) -> String {
    let mut s = String::with_capacity(v.len() * 24);
    for (id, value) in v.iter() {
        writeln!(s, "{id} {value}").expect("write to string");
    }
    s
}

pub fn write_output_file(v: &OutputVector, path: &Path) -> io::Result<()> {
    fs::write(path, write_output(v))
}

#[derive(Debug, Error)]
pub enum OutputError {
    #[error("{file}:{line}: malformed line {text:?}")]
    Malformed {
        file: String,
        line: usize,
        text: String,
    },
    #[error("{file}:{line}: vertex {vertex} listed twice")]
    DuplicateVertex {
        file: String,
        line: usize,
        vertex: VertexId,
    },
    #[error("{file}:{line}: {token:?} is not a valid {expected:?} value")]
    WrongKind {
        file: String,
        line: usize,
        token: String,
        expected: ValueKind,
    },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: io::Error,
    },
    #[error("{0}: no output files found")]
    Missing(String),
}

fn parse_float_token(tok: &str) -> Option<f64> {
    let lower = tok.to_ascii_lowercase();
    match lower.as_str() {
        "inf" | "+inf" | "infinity" | "+infinity" => return Some(f64::INFINITY),
        "-inf" | "-infinity" => return Some(f64::NEG_INFINITY),
        _ => {}
    }
    // `f64::from_str` also takes "nan" and overflowing literals; neither is a valid value.
    tok.parse::<f64>().ok().filter(|x| x.is_finite())
}

/// Parses output text; `name` is used in error messages.
pub fn parse_output_named(
    name: &str,
    text: &str,
    kind: ValueKind,
) -> Result<OutputVector, OutputError> {
    let mut out = match kind {
        ValueKind::Int => OutputVector::Int(BTreeMap::new()),
        ValueKind::Float => OutputVector::Float(BTreeMap::new()),
    };
    parse_into(name, text, &mut out)?;
    Ok(out)
}

pub fn parse_output(text: &str, kind: ValueKind) -> Result<OutputVector, OutputError> {
    parse_output_named("output", text, kind)
}

fn parse_into(name: &str, text: &str, out: &mut OutputVector) -> Result<(), OutputError> {
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let mut tokens = raw.split_ascii_whitespace();
        let (id, value) = match (tokens.next(), tokens.next(), tokens.next()) {
            (None, _, _) => continue,
            (Some(id), Some(value), None) => (id, value),
            _ => {
                return Err(OutputError::Malformed {
                    file: name.into(),
                    line,
                    text: raw.into(),
                })
            }
        };
        let vertex: VertexId = id.parse().map_err(|_| OutputError::Malformed {
            file: name.into(),
            line,
            text: raw.into(),
        })?;
        let wrong_kind = |expected| OutputError::WrongKind {
            file: name.into(),
            line,
            token: value.into(),
            expected,
        };
        let fresh = match out {
            OutputVector::Int(m) => {
                let v: i64 = value.parse().map_err(|_| wrong_kind(ValueKind::Int))?;
                m.insert(vertex, v).is_none()
            }
            OutputVector::Float(m) => {
                let v = parse_float_token(value).ok_or_else(|| wrong_kind(ValueKind::Float))?;
                m.insert(vertex, v).is_none()
            }
        };
        if !fresh {
            return Err(OutputError::DuplicateVertex {
                file: name.into(),
                line,
                vertex,
            });
        }
    }
    Ok(())
}

/// Reads an output file, or every regular file of an output directory.
///
/// Files of a directory are merged; a vertex appearing twice is an error.
pub fn read_output_path(path: &Path, kind: ValueKind) -> Result<OutputVector, OutputError> {
    let io_err = |source| OutputError::Io {
        path: path.display().to_string(),
        source,
    };
    let files = if path.is_dir() {
        let mut files: Vec<_> = fs::read_dir(path)
            .map_err(io_err)?
            .filter_map(|e| e.ok())
            .map(|e| e.path())
            .filter(|p| p.is_file())
            .collect();
        files.sort();
        if files.is_empty() {
            return Err(OutputError::Missing(path.display().to_string()));
        }
        files
    } else if path.is_file() {
        vec![path.to_path_buf()]
    } else {
        return Err(OutputError::Missing(path.display().to_string()));
    };
    let mut out = match kind {
        ValueKind::Int => OutputVector::Int(BTreeMap::new()),
        ValueKind::Float => OutputVector::Float(BTreeMap::new()),
    };
    for file in files {
        let text = fs::read_to_string(&file).map_err(|source| OutputError::Io {
            path: file.display().to_string(),
            source,
        })?;
        parse_into(&file.display().to_string(), &text, &mut out)?;
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "lowercase")]
pub enum MatchRule {
    Exact,
    Equivalence,
    Epsilon { epsilon: f64 },
}

impl MatchRule {
    pub fn for_algorithm(a: Algorithm) -> MatchRule {
        match a {
            Algorithm::Bfs | Algorithm::Cdlp => MatchRule::Exact,
            Algorithm::Wcc => MatchRule::Equivalence,
            Algorithm::Pr | Algorithm::Lcc | Algorithm::Sssp => MatchRule::Epsilon { epsilon: EPSILON },
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            MatchRule::Exact => "exact",
            MatchRule::Equivalence => "equivalence",
            MatchRule::Epsilon { .. } => "epsilon",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MismatchReason {
    MissingVertex,
    ExtraVertex,
    KindMismatch,
    ValueDiffers,
    OutsideTolerance,
    /// The label breaks the one-to-one correspondence between label classes.
    InconsistentLabel,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Mismatch {
    pub vertex: VertexId,
    pub expected: Option<Value>,
    pub actual: Option<Value>,
    pub reason: MismatchReason,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Verdict {
    pub passed: bool,
    /// Total number of mismatching vertices.
    pub mismatch_count: usize,
    /// The first [`MAX_REPORTED_MISMATCHES`] mismatches, ascending by vertex.
    pub mismatches: Vec<Mismatch>,
}

impl Verdict {
    pub fn failing_vertices(&self) -> Vec<VertexId> {
        self.mismatches.iter().map(|m| m.vertex).collect()
    }
}

#[derive(Default)]
struct VerdictBuilder {
    count: usize,
    kept: Vec<Mismatch>,
}

impl VerdictBuilder {
    fn push(&mut self, vertex: VertexId, expected: Option<Value>, actual: Option<Value>, reason: MismatchReason) {
        self.count += 1;
        if self.kept.len() < MAX_REPORTED_MISMATCHES {
            self.kept.push(Mismatch {
                vertex,
                expected,
                actual,
                reason,
            });
        }
    }

    fn finish(self) -> Verdict {
        Verdict {
            passed: self.count == 0,
            mismatch_count: self.count,
            mismatches: self.kept,
        }
    }
}

// Walks both vectors in vertex order, reporting missing and extra vertices
// and handing matched pairs to `compare`.
fn zip_vertices(
    reference: &OutputVector,
    actual: &OutputVector,
    mut compare: impl FnMut(VertexId, Value, Value, &mut VerdictBuilder),
) -> Verdict {
    let mut b = VerdictBuilder::default();
    let mut r = reference.iter().peekable();
    let mut a = actual.iter().peekable();
    loop {
        match (r.peek().copied(), a.peek().copied()) {
            (None, None) => break,
            (Some((rv, rval)), None) => {
                b.push(rv, Some(rval), None, MismatchReason::MissingVertex);
                r.next();
            }
            (None, Some((av, aval))) => {
                b.push(av, None, Some(aval), MismatchReason::ExtraVertex);
                a.next();
            }
            (Some((rv, rval)), Some((av, aval))) => {
                if rv < av {
                    b.push(rv, Some(rval), None, MismatchReason::MissingVertex);
                    r.next();
                } else if av < rv {
                    b.push(av, None, Some(aval), MismatchReason::ExtraVertex);
                    a.next();
                } else {
                    if reference.kind() != actual.kind() {
                        b.push(rv, Some(rval), Some(aval), MismatchReason::KindMismatch);
                    } else {
                        compare(rv, rval, aval, &mut b);
                    }
                    r.next();
                    a.next();
                }
            }
        }
    }
    b.finish()
}

/// Passes iff every vertex carries an identical value.
pub fn match_exact(reference: &OutputVector, actual: &OutputVector) -> Verdict {
    zip_vertices(reference, actual, |v, r, s, b| {
        let same = match (r, s) {
            (Value::Int(x), Value::Int(y)) => x == y,
            (Value::Float(x), Value::Float(y)) => x == y,
            _ => false,
        };
        if !same {
            b.push(v, Some(r), Some(s), MismatchReason::ValueDiffers);
        }
    })
}

/// Passes iff both vectors induce the same partition of the vertices.
///
/// Labels are mapped in both directions; a vertex whose label pair
/// contradicts an earlier one is reported.
pub fn match_equivalence(reference: &OutputVector, actual: &OutputVector) -> Verdict {
    let mut forward: HashMap<u64, u64> = HashMap::new();
    let mut backward: HashMap<u64, u64> = HashMap::new();
    let bits = |v: Value| match v {
        Value::Int(i) => i as u64,
        Value::Float(f) => f.to_bits(),
    };
    zip_vertices(reference, actual, |v, r, s, b| {
        let (rk, sk) = (bits(r), bits(s));
        let fwd = *forward.entry(rk).or_insert(sk);
        let bwd = *backward.entry(sk).or_insert(rk);
        if fwd != sk || bwd != rk {
            b.push(v, Some(r), Some(s), MismatchReason::InconsistentLabel);
        }
    })
}

/// Passes iff every value equals the reference or lies within `epsilon` relative to it.
///
/// Identical values (including equal infinities and zeros) always match;
/// otherwise `|r - s| < epsilon * |r|` must hold.
pub fn match_epsilon(reference: &OutputVector, actual: &OutputVector, epsilon: f64) -> Verdict {
    zip_vertices(reference, actual, |v, r, s, b| {
        let (rf, sf) = (r.as_f64(), s.as_f64());
        if !(rf == sf || (rf - sf).abs() < epsilon * rf.abs()) {
            b.push(v, Some(r), Some(s), MismatchReason::OutsideTolerance);
        }
    })
}

pub fn validate(rule: &MatchRule, reference: &OutputVector, actual: &OutputVector) -> Verdict {
    match rule {
        MatchRule::Exact => match_exact(reference, actual),
        MatchRule::Equivalence => match_equivalence(reference, actual),
        MatchRule::Epsilon { epsilon } => match_epsilon(reference, actual, *epsilon),
    }
}
