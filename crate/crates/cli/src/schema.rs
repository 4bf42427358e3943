// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! JSON documents read and written by the command-line tool.
//!
//! An instance document looks like
//!
//! ```json
//! {"graph": {"type": "cycle", "n": 6}, "tokens": [5, 0, 1, 2, 3, 4]}
//! ```
//!
//! `tokens[i]` is the token on vertex `i`. Vertices and tokens are 0-based
//! unless the document says `"base": 1`, or omits `base` and its tokens are
//! exactly `1..=n`. Edge lists and schedules use the same base as the
//! tokens. Optional `colors[i]` is the color of token `i`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use ptswap::{Configuration, Edge, Graph, Instance, Labeling, Matching, Schedule, Topology};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDoc {
    #[serde(rename = "type")]
    pub kind: String,
    /// Vertex count for lines, cycles and general graphs; column count for
    /// grids.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    /// Row count for grids; branch count for stars.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub branch_lengths: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edges: Option<Vec<[usize; 2]>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceDoc {
    pub graph: GraphDoc,
    pub tokens: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub colors: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<usize>,
}

/// A parsed instance plus the vertex numbering its document used.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Parsed {
    pub instance: Instance,
    pub base: usize,
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Invalid(msg.into())
}

fn need(field: Option<usize>, name: &str, kind: &str) -> Result<usize, CliError> {
    field.ok_or_else(|| invalid(format!("graph.{name}: required for a {kind} graph")))
}

fn infer_base(doc: &InstanceDoc) -> Result<usize, CliError> {
    match doc.base {
        Some(b @ (0 | 1)) => Ok(b),
        Some(b) => Err(invalid(format!("base: must be 0 or 1, got {b}"))),
        None => {
            let n = doc.tokens.len();
            let one_based = n > 0 && !doc.tokens.contains(&0) && doc.tokens.contains(&n);
            Ok(usize::from(one_based))
        }
    }
}

fn build_graph(g: &GraphDoc, base: usize) -> Result<Graph, CliError> {
    let model = |e: ptswap::ModelError| invalid(format!("graph: {e}"));
    match g.kind.as_str() {
        "line" => Graph::line(need(g.n, "n", "line")?).map_err(model),
        "cycle" => Graph::cycle(need(g.n, "n", "cycle")?).map_err(model),
        "star" => {
            let lengths = g
                .branch_lengths
                .as_ref()
                .ok_or_else(|| invalid("graph.branch_lengths: required for a star graph"))?;
            if let Some(h) = g.h {
                if h != lengths.len() {
                    return Err(invalid(format!(
                        "graph.h: {h} disagrees with {} branch lengths",
                        lengths.len()
                    )));
                }
            }
            let graph = Graph::star(lengths).map_err(model)?;
            if let Some(n) = g.n {
                if n != graph.vertex_count() {
                    return Err(invalid(format!(
                        "graph.n: {n} disagrees with the {} vertices of the star",
                        graph.vertex_count()
                    )));
                }
            }
            Ok(graph)
        }
        "grid" => Graph::grid(need(g.h, "h", "grid")?, need(g.n, "n", "grid")?).map_err(model),
        "general" => {
            let n = need(g.n, "n", "general")?;
            let raw = g
                .edges
                .as_ref()
                .ok_or_else(|| invalid("graph.edges: required for a general graph"))?;
            let mut edges: Vec<Edge> = Vec::with_capacity(raw.len());
            for (i, &[u, v]) in raw.iter().enumerate() {
                if u < base || v < base || u - base >= n || v - base >= n {
                    return Err(invalid(format!(
                        "graph.edges[{i}]: [{u}, {v}] is outside the vertex range {base}..{}",
                        n + base
                    )));
                }
                edges.push((u - base, v - base));
            }
            Graph::detect(n, &edges).map_err(model)
        }
        other => Err(invalid(format!(
            "graph.type: unknown graph type {other:?} (expected line, cycle, star, grid or general)"
        ))),
    }
}

fn build_tokens(tokens: &[usize], base: usize) -> Result<Configuration, CliError> {
    let n = tokens.len();
    let mut seen: Vec<Option<usize>> = vec![None; n];
    let mut out = Vec::with_capacity(n);
    for (i, &t) in tokens.iter().enumerate() {
        if t < base || t - base >= n {
            return Err(invalid(format!(
                "tokens[{i}]: token {t} is outside the range {base}..{}",
                n + base
            )));
        }
        let k = t - base;
        if let Some(j) = seen[k] {
            return Err(invalid(format!("tokens[{i}]: duplicate token {t} (also at tokens[{j}])")));
        }
        seen[k] = Some(i);
        out.push(k);
    }
    Configuration::from_tokens(out).map_err(|e| invalid(format!("tokens: {e}")))
}

/// Builds and validates an instance from its document.
pub fn instance_from_doc(doc: &InstanceDoc) -> Result<Parsed, CliError> {
    let base = infer_base(doc)?;
    let graph = build_graph(&doc.graph, base)?;
    if doc.tokens.len() != graph.vertex_count() {
        return Err(invalid(format!(
            "tokens: the graph has {} vertices but {} tokens are given",
            graph.vertex_count(),
            doc.tokens.len()
        )));
    }
    let config = build_tokens(&doc.tokens, base)?;
    let instance = match &doc.colors {
        None => Instance::new(graph, config),
        Some(colors) => {
            if colors.len() != doc.tokens.len() {
                return Err(invalid(format!(
                    "colors: expected {} entries, found {}",
                    doc.tokens.len(),
                    colors.len()
                )));
            }
            Instance::with_labeling(graph, config, Labeling::new(colors.clone()))
        }
    }
    .map_err(|e| invalid(format!("instance: {e}")))?;
    Ok(Parsed { instance, base })
}

/// Parses an instance document from JSON text.
pub fn parse_instance(text: &str) -> Result<Parsed, CliError> {
    let doc: InstanceDoc =
        serde_json::from_str(text).map_err(|e| invalid(format!("instance document: {e}")))?;
    instance_from_doc(&doc)
}

/// The document describing `instance`, numbered from `base`.
pub fn instance_to_doc(instance: &Instance, base: usize) -> InstanceDoc {
    let g = &instance.graph;
    let empty = GraphDoc {
        kind: String::new(),
        n: None,
        h: None,
        branch_lengths: None,
        edges: None,
    };
    let graph = match g.topology() {
        Topology::Line { n } => GraphDoc { kind: "line".into(), n: Some(*n), ..empty },
        Topology::Cycle { n } => GraphDoc { kind: "cycle".into(), n: Some(*n), ..empty },
        Topology::Star { branch_lengths } => GraphDoc {
            kind: "star".into(),
            branch_lengths: Some(branch_lengths.clone()),
            ..empty
        },
        Topology::Grid { rows, cols } => GraphDoc {
            kind: "grid".into(),
            h: Some(*rows),
            n: Some(*cols),
            ..empty
        },
        Topology::General => GraphDoc {
            kind: "general".into(),
            n: Some(g.vertex_count()),
            edges: Some(g.edges().map(|(u, v)| [u + base, v + base]).collect()),
            ..empty
        },
    };
    InstanceDoc {
        graph,
        tokens: instance.initial.tokens().iter().map(|&t| t + base).collect(),
        colors: instance.labeling.as_ref().map(|l| l.colors().to_vec()),
        base: (base != 0).then_some(base),
    }
}

/// Schedule as nested `[u, v]` pairs, numbered from `base`.
pub type ScheduleDoc = Vec<Vec<[usize; 2]>>;

pub fn schedule_to_doc(s: &Schedule, base: usize) -> ScheduleDoc {
    s.steps()
        .iter()
        .map(|m| m.swaps().iter().map(|&(u, v)| [u + base, v + base]).collect())
        .collect()
}

/// Reads a schedule document. Steps must be disjoint pairs of in-range
/// vertices; whether they are edges is left to verification.
pub fn schedule_from_doc(doc: &ScheduleDoc, base: usize, n: usize) -> Result<Schedule, CliError> {
    let mut steps = Vec::with_capacity(doc.len());
    for (i, step) in doc.iter().enumerate() {
        let mut pairs = Vec::with_capacity(step.len());
        for (j, &[u, v]) in step.iter().enumerate() {
            if u < base || v < base || u - base >= n || v - base >= n {
                return Err(invalid(format!(
                    "schedule[{i}][{j}]: [{u}, {v}] is outside the vertex range {base}..{}",
                    n + base
                )));
            }
            pairs.push((u - base, v - base));
        }
        steps.push(Matching::new(pairs).map_err(|e| invalid(format!("schedule[{i}]: {e}")))?);
    }
    Ok(Schedule::new(steps))
}

pub fn parse_schedule(text: &str, base: usize, n: usize) -> Result<Schedule, CliError> {
    let doc: ScheduleDoc =
        serde_json::from_str(text).map_err(|e| invalid(format!("schedule document: {e}")))?;
    schedule_from_doc(&doc, base, n)
}

#[derive(Debug, Clone, Serialize)]
pub struct PhaseDoc {
    pub name: String,
    pub length: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct SolveDoc {
    pub algorithm: String,
    pub length: usize,
    pub d_max: usize,
    pub extra_lower_bounds: BTreeMap<String, usize>,
    pub ratio_to_dmax: Option<String>,
    pub phases: Vec<PhaseDoc>,
    pub valid: bool,
    pub schedule: ScheduleDoc,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyDoc {
    pub valid: bool,
    pub length: usize,
    pub final_tokens: Vec<usize>,
    pub violations: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleDoc {
    pub opt: usize,
    pub d_max: usize,
    pub witness: ScheduleDoc,
}

#[derive(Debug, Clone, Serialize)]
pub struct LowerBoundDoc {
    pub d_max: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub winding: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d_star: Option<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ErrorBody {
    pub kind: &'static str,
    pub message: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ErrorDoc {
    pub error: ErrorBody,
}
