//! Round-trip checks for the graph and output text formats.

use std::collections::BTreeMap;

use graphalytics::graph::{read_evlp, write_evlp, Graph};
use graphalytics::validator::{parse_output, write_output, OutputVector, ValueKind, INT_NEG_INFINITY, INT_POS_INFINITY};
use rand::seq::IndexedRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::RawGraph;

pub const POS_INF_SPELLINGS: [&str; 8] = ["inf", "+inf", "infinity", "+infinity", "INF", "+Inf", "Infinity", "+INFINITY"];
pub const NEG_INF_SPELLINGS: [&str; 4] = ["-inf", "-infinity", "-INF", "-Infinity"];

/// write, read, write again: both texts and the edge lists must agree.
pub fn evlp_identity(raw: &RawGraph, weighted: bool) -> Result<(), String> {
    let g = if weighted {
        raw.to_graph()
    } else {
        raw.to_graph().without_weights()
    };
    let (v, e) = write_evlp(&g);
    let back = read_evlp(v.as_bytes(), e.as_bytes(), raw.directed, weighted).map_err(|e| e.to_string())?;
    let (v2, e2) = write_evlp(&back);
    if v != v2 || e != e2 {
        return Err(format!("text changed:\n{v}{e}---\n{v2}{e2}"));
    }
    if edges(&g) != edges(&back) || g.vertex_ids() != back.vertex_ids() {
        return Err("graph changed".into());
    }
    Ok(())
}

fn edges(g: &Graph) -> Vec<(i64, i64, Option<u64>)> {
    g.edges().map(|(s, d, w)| (s, d, w.map(f64::to_bits))).collect()
}

/// A value vector with ordinary values and the infinity markers mixed in.
pub fn output_vector(rng: &mut ChaCha8Rng, kind: ValueKind) -> OutputVector {
    let n = rng.random_range(0..40);
    let mut ids: Vec<i64> = (0..n)
        .map(|_| match rng.random_range(0..10) {
            0 => i64::MIN,
            1 => i64::MAX,
            _ => rng.random_range(-1_000_000..1_000_000),
        })
        .collect();
    ids.sort_unstable();
    ids.dedup();
    match kind {
        ValueKind::Int => OutputVector::Int(
            ids.into_iter()
                .map(|id| {
                    let v = match rng.random_range(0..8) {
                        0 => INT_NEG_INFINITY,
                        1 => INT_POS_INFINITY,
                        2 => -1,
                        _ => rng.random(),
                    };
                    (id, v)
                })
                .collect(),
        ),
        ValueKind::Float => OutputVector::Float(
            ids.into_iter()
                .map(|id| {
                    let v = match rng.random_range(0..10) {
                        0 => f64::INFINITY,
                        1 => f64::NEG_INFINITY,
                        2 => 0.0,
                        3 => f64::MAX,
                        4 => f64::MIN_POSITIVE,
                        5 => rng.random::<f64>() * 1e-300,
                        _ => (rng.random::<f64>() - 0.5) * 10f64.powi(rng.random_range(-30..30)),
                    };
                    (id, v)
                })
                .collect(),
        ),
    }
}

/// Relative tolerance for a float that went through the sixteen-digit text form.
pub const TEXT_TOLERANCE: f64 = 1e-15;

fn close(a: &OutputVector, b: &OutputVector) -> bool {
    match (a, b) {
        (OutputVector::Int(x), OutputVector::Int(y)) => x == y,
        (OutputVector::Float(x), OutputVector::Float(y)) => {
            x.len() == y.len()
                && x.iter().zip(y).all(|((i, p), (j, q))| {
                    i == j && (p == q || (p - q).abs() <= TEXT_TOLERANCE * p.abs())
                })
        }
        _ => false,
    }
}

/// parse(write(v)) matches v and writing it again reproduces the text.
pub fn output_identity(v: &OutputVector) -> Result<(), String> {
    let text = write_output(v);
    let parsed = parse_output(&text, v.kind()).map_err(|e| e.to_string())?;
    if !close(v, &parsed) {
        return Err(format!("values changed:\n{text}"));
    }
    let again = write_output(&parsed);
    if again != text {
        return Err(format!("text changed:\n{text}---\n{again}"));
    }
    Ok(())
}

/// Non-canonical infinity spellings read back to the canonical text.
pub fn infinity_spellings(rng: &mut ChaCha8Rng, v: &BTreeMap<i64, f64>) -> Result<(), String> {
    let mut text = String::new();
    for (id, x) in v {
        let tok = if *x == f64::INFINITY {
            POS_INF_SPELLINGS.choose(rng).unwrap().to_string()
        } else if *x == f64::NEG_INFINITY {
            NEG_INF_SPELLINGS.choose(rng).unwrap().to_string()
        } else {
            format!("{x:?}")
        };
        text.push_str(&format!("{id} {tok}\n"));
    }
    let parsed = parse_output(&text, ValueKind::Float).map_err(|e| e.to_string())?;
    let canonical = OutputVector::Float(v.clone());
    if write_output(&parsed) != write_output(&canonical) {
        return Err(format!("spellings not normalized:\n{text}"));
    }
    Ok(())
}
