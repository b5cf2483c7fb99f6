//! Canonical JSON files and Graphviz DOT export.
//!
//! Hypergraph files are `{"vertices":[...],"edges":[[...],...]}` and
//! digraph files are `{"vertices":[...],"arcs":[[tail,head],...]}`, with
//! every array sorted, no insignificant whitespace and a trailing newline.
//! Serialization is unique per value, so files can be compared byte for
//! byte.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::constructor::ConstructionTrace;
use crate::digraph::{Digraph, DigraphError};
use crate::hypergraph::{Hyperedge, Hypergraph, HypergraphError, VertexId};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error(transparent)]
    Hypergraph(#[from] HypergraphError),
    #[error(transparent)]
    Digraph(#[from] DigraphError),
}

impl From<serde_json::Error> for FormatError {
    fn from(err: serde_json::Error) -> Self {
        FormatError::Parse { line: err.line(), column: err.column(), message: err.to_string() }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct HypergraphFile {
    vertices: Vec<String>,
    edges: Vec<Vec<String>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DigraphFile {
    vertices: Vec<String>,
    arcs: Vec<(String, String)>,
}

fn vertex(name: String) -> Result<VertexId, HypergraphError> {
    VertexId::new(name)
}

pub fn parse_hypergraph(text: &str) -> Result<Hypergraph, FormatError> {
    let file: HypergraphFile = serde_json::from_str(text)?;
    let vertices = file.vertices.into_iter().map(vertex).collect::<Result<Vec<_>, _>>()?;
    let edges = file
        .edges
        .into_iter()
        .map(|e| e.into_iter().map(vertex).collect::<Result<Hyperedge, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Hypergraph::new(vertices, edges)?)
}

pub fn hypergraph_to_json(h: &Hypergraph) -> String {
    let file = HypergraphFile {
        vertices: h.vertices().iter().map(|v| v.to_string()).collect(),
        edges: h.edges().iter().map(|e| e.iter().map(|v| v.to_string()).collect()).collect(),
    };
    let mut out = serde_json::to_string(&file).expect("hypergraph serializes");
    out.push('\n');
    out
}

pub fn parse_digraph(text: &str) -> Result<Digraph, FormatError> {
    let file: DigraphFile = serde_json::from_str(text)?;
    let vertices = file.vertices.into_iter().map(vertex).collect::<Result<Vec<_>, _>>()?;
    let arcs = file
        .arcs
        .into_iter()
        .map(|(t, h)| Ok((vertex(t)?, vertex(h)?)))
        .collect::<Result<Vec<_>, HypergraphError>>()?;
    Ok(Digraph::new(vertices, arcs)?)
}

pub fn digraph_to_json(d: &Digraph) -> String {
    let file = DigraphFile {
        vertices: d.vertices().iter().map(|v| v.to_string()).collect(),
        arcs: d.arcs().iter().map(|(t, h)| (t.to_string(), h.to_string())).collect(),
    };
    let mut out = serde_json::to_string(&file).expect("digraph serializes");
    out.push('\n');
    out
}

pub fn trace_to_json(trace: &ConstructionTrace) -> String {
    let mut out = serde_json::to_string_pretty(trace).expect("trace serializes");
    out.push('\n');
    out
}

pub fn parse_trace(text: &str) -> Result<ConstructionTrace, FormatError> {
    Ok(serde_json::from_str(text)?)
}

fn quote(name: &str) -> String {
    let mut out = String::with_capacity(name.len() + 2);
    out.push('"');
    for c in name.chars() {
        if c == '"' || c == '\\' {
            out.push('\\');
        }
        out.push(c);
    }
    out.push('"');
    out
}

pub fn digraph_to_dot(d: &Digraph) -> String {
    let mut out = String::from("digraph D {\n");
    for v in d.vertices() {
        let _ = writeln!(out, "  {};", quote(v.as_str()));
    }
    for (t, h) in d.arcs() {
        let _ = writeln!(out, "  {} -> {};", quote(t.as_str()), quote(h.as_str()));
    }
    out.push_str("}\n");
    out
}

/// Bipartite incidence drawing: vertices as ellipses, edges as boxes.
pub fn hypergraph_to_dot(h: &Hypergraph) -> String {
    let mut out = String::from("graph H {\n");
    for v in h.vertices() {
        let _ = writeln!(out, "  {} [shape=ellipse];", quote(v.as_str()));
    }
    for (i, e) in h.edges().iter().enumerate() {
        let id = quote(&format!("#e{i}"));
        let _ = writeln!(out, "  {id} [shape=box, label={}];", quote(&e.to_string()));
        for v in e.iter() {
            let _ = writeln!(out, "  {id} -- {};", quote(v.as_str()));
        }
    }
    out.push_str("}\n");
    out
}
