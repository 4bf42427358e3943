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

//! Topology-tagged undirected graphs.
//!
//! Vertices are `0..n`. Every tagged topology has a canonical numbering:
//!
//! * `Line(n)`: edges `(i, i + 1)`.
//! * `Cycle(n)`: the line edges plus `(n - 1, 0)`.
//! * `Star(lengths)`: vertex `0` is the center; branch `b` occupies a
//!   consecutive block of vertices listed from the center outward.
//! * `Grid { rows, cols }`: vertex `(a, b)` is `a * cols + b`.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::ModelError;

/// Undirected edge stored with the smaller endpoint first.
pub type Edge = (usize, usize);

/// Normalizes an unordered vertex pair.
#[inline]
pub fn edge(u: usize, v: usize) -> Edge {
    if u <= v {
        (u, v)
    } else {
        (v, u)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Topology {
    Line { n: usize },
    Cycle { n: usize },
    Star { branch_lengths: Vec<usize> },
    Grid { rows: usize, cols: usize },
    General,
}

impl fmt::Display for Topology {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        match self {
            Topology::Line { n } => write!(f, "line P{}", n),
            Topology::Cycle { n } => write!(f, "cycle C{}", n),
            Topology::Star { branch_lengths } => write!(f, "star {:?}", branch_lengths),
            Topology::Grid { rows, cols } => write!(f, "grid {}x{}", rows, cols),
            Topology::General => write!(f, "general graph"),
        }
    }
}

/// A connected simple graph together with the topology it was built from.
#[derive(Debug, Clone)]
pub struct Graph {
    vertex_count: usize,
    edges: BTreeSet<Edge>,
    adjacency: Vec<Vec<usize>>,
    topology: Topology,
    // all-pairs BFS distances, filled on first use
    distances: OnceLock<Vec<Vec<usize>>>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.vertex_count == other.vertex_count
            && self.edges == other.edges
            && self.topology == other.topology
    }
}

impl Eq for Graph {}

impl Graph {
    pub fn line(n: usize) -> Result<Self, ModelError> {
        if n == 0 {
            return Err(ModelError::InvalidParameters("a line needs at least one vertex".into()));
        }
        Self::build(n, canonical_edges(&Topology::Line { n }), Topology::Line { n })
    }

    pub fn cycle(n: usize) -> Result<Self, ModelError> {
        if n < 3 {
            return Err(ModelError::InvalidParameters(format!(
                "a cycle needs at least 3 vertices, got {}",
                n
            )));
        }
        Self::build(n, canonical_edges(&Topology::Cycle { n }), Topology::Cycle { n })
    }

    pub fn star(branch_lengths: &[usize]) -> Result<Self, ModelError> {
        if branch_lengths.is_empty() || branch_lengths.contains(&0) {
            return Err(ModelError::InvalidParameters(format!(
                "a star needs at least one branch and every branch needs a vertex, got {:?}",
                branch_lengths
            )));
        }
        let topology = Topology::Star {
            branch_lengths: branch_lengths.to_vec(),
        };
        let n = 1 + branch_lengths.iter().sum::<usize>();
        Self::build(n, canonical_edges(&topology), topology)
    }

    pub fn grid(rows: usize, cols: usize) -> Result<Self, ModelError> {
        if rows == 0 || cols == 0 {
            return Err(ModelError::InvalidParameters(format!(
                "grid dimensions must be positive, got {}x{}",
                rows, cols
            )));
        }
        let topology = Topology::Grid { rows, cols };
        Self::build(rows * cols, canonical_edges(&topology), topology)
    }

    /// Complete graph on `n` vertices, tagged `General`.
    pub fn complete(n: usize) -> Result<Self, ModelError> {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                edges.push((u, v));
            }
        }
        Self::general(n, &edges)
    }

    /// Graph from an explicit edge list. Connectivity and simplicity are
    /// checked; no topology detection happens here (see [`Graph::detect`]).
    pub fn general(n: usize, edges: &[Edge]) -> Result<Self, ModelError> {
        let mut set = BTreeSet::new();
        for &(u, v) in edges {
            if u == v {
                return Err(ModelError::InvalidGraph(format!("self-loop at vertex {}", u)));
            }
            if u >= n || v >= n {
                return Err(ModelError::InvalidGraph(format!(
                    "edge ({}, {}) references a vertex outside 0..{}",
                    u, v, n
                )));
            }
            if !set.insert(edge(u, v)) {
                return Err(ModelError::InvalidGraph(format!("parallel edge ({}, {})", u, v)));
            }
        }
        Self::build(n, set, Topology::General)
    }

    /// Like [`Graph::general`], but re-tags the graph when its edge set is
    /// exactly the canonical edge set of a line, cycle, star or grid.
    pub fn detect(n: usize, edges: &[Edge]) -> Result<Self, ModelError> {
        let g = Self::general(n, edges)?;
        for candidate in candidate_topologies(&g) {
            if canonical_edges(&candidate) == g.edges {
                return Self::build(n, g.edges, candidate);
            }
        }
        Ok(g)
    }

    fn build(n: usize, edges: BTreeSet<Edge>, topology: Topology) -> Result<Self, ModelError> {
        if n == 0 {
            return Err(ModelError::InvalidGraph("graph has no vertices".into()));
        }
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v) in &edges {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        let g = Graph {
            vertex_count: n,
            edges,
            adjacency,
            topology,
            distances: OnceLock::new(),
        };
        if g.bfs(0).contains(&usize::MAX) {
            return Err(ModelError::InvalidGraph("graph is not connected".into()));
        }
        Ok(g)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.edges.iter().copied()
    }

    pub fn topology(&self) -> &Topology {
        &self.topology
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&edge(u, v))
    }

    /// Geodesic distance between two vertices.
    pub fn distance(&self, u: usize, v: usize) -> usize {
        self.distances
            .get_or_init(|| (0..self.vertex_count).map(|s| self.bfs(s)).collect())[u][v]
    }

    fn bfs(&self, source: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.vertex_count];
        let mut queue = VecDeque::new();
        dist[source] = 0;
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            for &w in &self.adjacency[u] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }
}

/// The edge set a tagged topology must have.
pub fn canonical_edges(topology: &Topology) -> BTreeSet<Edge> {
    let mut edges = BTreeSet::new();
    match *topology {
        Topology::Line { n } => {
            for i in 0..n.saturating_sub(1) {
                edges.insert((i, i + 1));
            }
        }
        Topology::Cycle { n } => {
            for i in 0..n.saturating_sub(1) {
                edges.insert((i, i + 1));
            }
            if n >= 3 {
                edges.insert((0, n - 1));
            }
        }
        Topology::Star { ref branch_lengths } => {
            let mut next = 1;
            for &len in branch_lengths {
                let mut prev = 0;
                for _ in 0..len {
                    edges.insert(edge(prev, next));
                    prev = next;
                    next += 1;
                }
            }
        }
        Topology::Grid { rows, cols } => {
            for a in 0..rows {
                for b in 0..cols {
                    let v = a * cols + b;
                    if a + 1 < rows {
                        edges.insert((v, v + cols));
                    }
                    if b + 1 < cols {
                        edges.insert((v, v + 1));
                    }
                }
            }
        }
        Topology::General => {}
    }
    edges
}

fn candidate_topologies(g: &Graph) -> Vec<Topology> {
    let n = g.vertex_count;
    let mut out = vec![Topology::Line { n }];
    if n >= 3 {
        out.push(Topology::Cycle { n });
    }
    // Star: walk each branch outward from vertex 0.
    if n >= 2 {
        let mut lengths = Vec::new();
        let mut ok = true;
        for &first in g.neighbors(0) {
            let (mut prev, mut cur, mut len) = (0, first, 1);
            loop {
                let next: Vec<usize> = g.neighbors(cur).iter().copied().filter(|&w| w != prev).collect();
                match next.as_slice() {
                    [] => break,
                    [w] if *w == cur + 1 => {
                        prev = cur;
                        cur = *w;
                        len += 1;
                    }
                    _ => {
                        ok = false;
                        break;
                    }
                }
            }
            if !ok {
                break;
            }
            lengths.push(len);
        }
        if ok && !lengths.is_empty() {
            out.push(Topology::Star { branch_lengths: lengths });
        }
    }
    for rows in 2..n {
        if n.is_multiple_of(rows) && n / rows >= 2 {
            out.push(Topology::Grid { rows, cols: n / rows });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_sizes() {
        assert_eq!(Graph::line(5).unwrap().edge_count(), 4);
        assert_eq!(Graph::cycle(6).unwrap().edge_count(), 6);
        assert_eq!(Graph::star(&[2, 1, 3]).unwrap().edge_count(), 6);
        assert_eq!(Graph::grid(3, 4).unwrap().edge_count(), 3 * 3 + 2 * 4);
        assert_eq!(Graph::complete(8).unwrap().edge_count(), 28);
    }

    #[test]
    fn star_has_single_high_degree_vertex() {
        let g = Graph::star(&[2, 1, 3, 1]).unwrap();
        let high: Vec<usize> = (0..g.vertex_count()).filter(|&v| g.neighbors(v).len() > 2).collect();
        assert_eq!(high, vec![0]);
    }

    #[test]
    fn distances() {
        let c = Graph::cycle(8).unwrap();
        assert_eq!(c.distance(0, 4), 4);
        assert_eq!(c.distance(1, 7), 2);
        let g = Graph::grid(3, 4).unwrap();
        assert_eq!(g.distance(0, 11), 5);
        let s = Graph::star(&[2, 3]).unwrap();
        // tip of branch 0 is vertex 2, tip of branch 1 is vertex 5
        assert_eq!(s.distance(2, 5), 5);
    }

    #[test]
    fn rejects_bad_graphs() {
        assert!(Graph::general(3, &[(0, 1)]).is_err());
        assert!(Graph::general(2, &[(0, 0)]).is_err());
        assert!(Graph::general(2, &[(0, 1), (1, 0)]).is_err());
        assert!(Graph::general(2, &[(0, 2)]).is_err());
        assert!(Graph::cycle(2).is_err());
        assert!(Graph::star(&[1, 0]).is_err());
    }

    #[test]
    fn detection_regenerates_canonical_topologies() {
        for g in [
            Graph::line(6).unwrap(),
            Graph::cycle(7).unwrap(),
            Graph::star(&[3, 1, 2]).unwrap(),
            Graph::grid(2, 5).unwrap(),
            Graph::grid(4, 3).unwrap(),
        ] {
            let edges: Vec<Edge> = g.edges().collect();
            let d = Graph::detect(g.vertex_count(), &edges).unwrap();
            assert_eq!(d.topology(), g.topology());
        }
        let k4 = Graph::complete(4).unwrap();
        let edges: Vec<Edge> = k4.edges().collect();
        assert_eq!(Graph::detect(4, &edges).unwrap().topology(), &Topology::General);
    }
}
