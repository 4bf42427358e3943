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

//! Exact minimum-depth solver by breadth-first search.
//!
//! States are per-vertex strings packed four bits per vertex into a `u64`:
//! token ids for plain instances, dense color ids for labeled ones. Since
//! every matching is its own inverse, the move graph is undirected and the
//! search runs from both ends.

use std::collections::{BTreeMap, HashMap};

use crate::config::{Configuration, Labeling};
use crate::error::OracleError;
use crate::graph::{Edge, Graph};
use crate::instance::Instance;
use crate::schedule::{Matching, Schedule};

/// Size caps for the exact search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleLimits {
    pub max_vertices: usize,
    pub max_states: usize,
    pub max_edges: usize,
}

impl Default for OracleLimits {
    fn default() -> Self {
        OracleLimits {
            max_vertices: 9,
            max_states: 5_000_000,
            max_edges: 32,
        }
    }
}

/// Hard ceiling imposed by the packed state encoding.
const PACK_LIMIT: usize = 16;

/// Every nonempty matching of `g`, each exactly once, in lexicographic
/// order of their sorted edge lists.
pub fn enumerate_matchings(g: &Graph, limits: &OracleLimits) -> Result<Vec<Matching>, OracleError> {
    if g.edge_count() > limits.max_edges {
        return Err(OracleError::Capacity(format!(
            "graph has {} edges, cap is {}",
            g.edge_count(),
            limits.max_edges
        )));
    }
    let edges: Vec<Edge> = g.edges().collect();
    let mut out = Vec::new();
    let mut used = vec![false; g.vertex_count()];
    let mut current = Vec::new();
    extend_matchings(&edges, 0, &mut used, &mut current, &mut out);
    Ok(out)
}

fn extend_matchings(
    edges: &[Edge],
    from: usize,
    used: &mut [bool],
    current: &mut Vec<Edge>,
    out: &mut Vec<Matching>,
) {
    for i in from..edges.len() {
        let (u, v) = edges[i];
        if used[u] || used[v] {
            continue;
        }
        used[u] = true;
        used[v] = true;
        current.push((u, v));
        out.push(Matching::from_disjoint(current.clone()));
        extend_matchings(edges, i + 1, used, current, out);
        current.pop();
        used[u] = false;
        used[v] = false;
    }
}

#[inline]
fn pack(values: &[usize]) -> u64 {
    values
        .iter()
        .enumerate()
        .fold(0u64, |acc, (i, &x)| acc | ((x as u64) << (4 * i)))
}

#[inline]
fn unpack(state: u64, n: usize) -> Vec<usize> {
    (0..n).map(|i| ((state >> (4 * i)) & 0xF) as usize).collect()
}

#[inline]
fn apply_packed(state: u64, swaps: &[(u8, u8)]) -> u64 {
    let mut s = state;
    for &(u, v) in swaps {
        let (su, sv) = (4 * u as u32, 4 * v as u32);
        let a = (s >> su) & 0xF;
        let b = (s >> sv) & 0xF;
        s &= !((0xF << su) | (0xF << sv));
        s |= (b << su) | (a << sv);
    }
    s
}

/// Move set prepared for the packed search.
struct MoveSet {
    matchings: Vec<Matching>,
    packed: Vec<Vec<(u8, u8)>>,
}

impl MoveSet {
    fn new(g: &Graph, limits: &OracleLimits) -> Result<Self, OracleError> {
        let n = g.vertex_count();
        if n > limits.max_vertices || n > PACK_LIMIT {
            return Err(OracleError::Capacity(format!(
                "graph has {} vertices, cap is {}",
                n,
                limits.max_vertices.min(PACK_LIMIT)
            )));
        }
        let matchings = enumerate_matchings(g, limits)?;
        let packed = matchings
            .iter()
            .map(|m| m.swaps().iter().map(|&(u, v)| (u as u8, v as u8)).collect())
            .collect();
        Ok(MoveSet { matchings, packed })
    }
}

/// Maps colors onto `0..k` in order of first appearance by color id.
fn dense_colors(labeling: &Labeling) -> Result<Vec<usize>, OracleError> {
    let ids: BTreeMap<u32, usize> = labeling
        .multiplicities()
        .keys()
        .enumerate()
        .map(|(i, &c)| (c, i))
        .collect();
    if ids.len() > PACK_LIMIT {
        return Err(OracleError::Capacity(format!(
            "{} colors, cap is {}",
            ids.len(),
            PACK_LIMIT
        )));
    }
    Ok(labeling.colors().iter().map(|c| ids[c]).collect())
}

/// Start and goal strings for the search.
fn endpoints(instance: &Instance) -> Result<(Vec<usize>, Vec<usize>), OracleError> {
    let n = instance.vertex_count();
    match &instance.labeling {
        None => Ok((instance.initial.tokens().to_vec(), (0..n).collect())),
        Some(lab) => {
            lab.check_size(n)?;
            let dense = dense_colors(lab)?;
            let start = instance.initial.tokens().iter().map(|&t| dense[t]).collect();
            Ok((start, dense))
        }
    }
}

struct Side {
    /// state -> (depth, predecessor, matching index)
    seen: HashMap<u64, (u32, u64, u32)>,
    frontier: Vec<u64>,
    depth: u32,
}

impl Side {
    fn new(root: u64) -> Self {
        let mut seen = HashMap::new();
        seen.insert(root, (0, root, u32::MAX));
        Side {
            seen,
            frontier: vec![root],
            depth: 0,
        }
    }

    /// Matching indices from `state` back to this side's root.
    fn path_to_root(&self, mut state: u64) -> Vec<u32> {
        let mut out = Vec::new();
        loop {
            let &(d, prev, m) = &self.seen[&state];
            if d == 0 {
                return out;
            }
            out.push(m);
            state = prev;
        }
    }
}

/// Minimum number of steps routing `instance` to its goal, with a witness
/// schedule of that length. Labeled instances are solved for the colored
/// goal. Fails with a capacity error instead of guessing when the search
/// would exceed `limits`.
pub fn exact_opt(instance: &Instance, limits: &OracleLimits) -> Result<(usize, Schedule), OracleError> {
    let moves = MoveSet::new(&instance.graph, limits)?;
    let (start, goal) = endpoints(instance)?;
    let (start, goal) = (pack(&start), pack(&goal));
    if start == goal {
        return Ok((0, Schedule::empty()));
    }
    let mut fwd = Side::new(start);
    let mut bwd = Side::new(goal);
    loop {
        let grow_forward = fwd.frontier.len() <= bwd.frontier.len();
        let (this, other) = if grow_forward {
            (&mut fwd, &mut bwd)
        } else {
            (&mut bwd, &mut fwd)
        };
        if this.frontier.is_empty() {
            return Err(OracleError::Capacity("goal is unreachable".to_string()));
        }
        let depth = this.depth + 1;
        let mut next = Vec::new();
        let mut best: Option<(u32, u64)> = None;
        for &s in &this.frontier {
            for (mi, swaps) in moves.packed.iter().enumerate() {
                let t = apply_packed(s, swaps);
                if this.seen.contains_key(&t) {
                    continue;
                }
                this.seen.insert(t, (depth, s, mi as u32));
                if let Some(&(d, _, _)) = other.seen.get(&t) {
                    if best.is_none_or(|(b, _)| depth + d < b) {
                        best = Some((depth + d, t));
                    }
                }
                next.push(t);
            }
        }
        this.frontier = next;
        this.depth = depth;
        if let Some((total, meet)) = best {
            let mut order = fwd.path_to_root(meet);
            order.reverse();
            order.extend(bwd.path_to_root(meet));
            debug_assert_eq!(order.len(), total as usize);
            let steps = order
                .into_iter()
                .map(|i| moves.matchings[i as usize].clone())
                .collect();
            return Ok((total as usize, Schedule::new(steps)));
        }
        if fwd.seen.len() + bwd.seen.len() > limits.max_states {
            return Err(OracleError::Capacity(format!(
                "more than {} states explored",
                limits.max_states
            )));
        }
    }
}

/// Optimal depth of every string reachable from one goal, for exhaustive
/// sweeps over all starting placements of a small graph.
pub struct DistanceTable {
    n: usize,
    dense: Option<Vec<usize>>,
    dist: HashMap<u64, u8>,
    moves: MoveSet,
}

impl DistanceTable {
    /// Distances to the identity placement.
    pub fn build(g: &Graph, limits: &OracleLimits) -> Result<Self, OracleError> {
        let n = g.vertex_count();
        Self::from_goal(g, (0..n).collect(), None, limits)
    }

    /// Distances to color-correctness under `labeling`.
    pub fn build_colored(
        g: &Graph,
        labeling: &Labeling,
        limits: &OracleLimits,
    ) -> Result<Self, OracleError> {
        labeling.check_size(g.vertex_count())?;
        let dense = dense_colors(labeling)?;
        Self::from_goal(g, dense.clone(), Some(dense), limits)
    }

    fn from_goal(
        g: &Graph,
        goal: Vec<usize>,
        dense: Option<Vec<usize>>,
        limits: &OracleLimits,
    ) -> Result<Self, OracleError> {
        let moves = MoveSet::new(g, limits)?;
        let root = pack(&goal);
        let mut dist = HashMap::new();
        dist.insert(root, 0u8);
        let mut frontier = vec![root];
        let mut depth = 0u8;
        while !frontier.is_empty() {
            depth += 1;
            let mut next = Vec::new();
            for &s in &frontier {
                for swaps in &moves.packed {
                    let t = apply_packed(s, swaps);
                    if let std::collections::hash_map::Entry::Vacant(e) = dist.entry(t) {
                        e.insert(depth);
                        next.push(t);
                    }
                }
            }
            if dist.len() > limits.max_states {
                return Err(OracleError::Capacity(format!(
                    "more than {} states in the table",
                    limits.max_states
                )));
            }
            frontier = next;
        }
        Ok(DistanceTable {
            n: g.vertex_count(),
            dense,
            dist,
            moves,
        })
    }

    fn key(&self, config: &Configuration) -> u64 {
        match &self.dense {
            None => pack(config.tokens()),
            Some(d) => pack(&config.tokens().iter().map(|&t| d[t]).collect::<Vec<_>>()),
        }
    }

    /// Optimal depth from `config`, or `None` when it is unreachable or the
    /// size does not match.
    pub fn distance(&self, config: &Configuration) -> Option<usize> {
        if config.len() != self.n {
            return None;
        }
        self.dist.get(&self.key(config)).map(|&d| d as usize)
    }

    /// Number of distinct strings in the table.
    pub fn len(&self) -> usize {
        self.dist.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dist.is_empty()
    }

    /// Largest optimal depth over all entries.
    pub fn diameter(&self) -> usize {
        self.dist.values().copied().max().unwrap_or(0) as usize
    }

    /// All matchings of the graph, in enumeration order.
    pub fn matchings(&self) -> &[Matching] {
        &self.moves.matchings
    }

    /// Every entry, as per-vertex strings with their distance.
    pub fn entries(&self) -> impl Iterator<Item = (Vec<usize>, usize)> + '_ {
        self.dist.iter().map(|(&s, &d)| (unpack(s, self.n), d as usize))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::verify;

    #[test]
    fn small_matching_counts() {
        let lim = OracleLimits::default();
        let p3 = enumerate_matchings(&Graph::line(3).unwrap(), &lim).unwrap();
        assert_eq!(p3.len(), 2);
        assert_eq!(p3[0].swaps(), &[(0, 1)]);
        assert_eq!(enumerate_matchings(&Graph::line(2).unwrap(), &lim).unwrap().len(), 1);
        assert_eq!(enumerate_matchings(&Graph::cycle(4).unwrap(), &lim).unwrap().len(), 6);
    }

    #[test]
    fn edge_cap() {
        let lim = OracleLimits {
            max_edges: 3,
            ..OracleLimits::default()
        };
        assert!(matches!(
            enumerate_matchings(&Graph::cycle(4).unwrap(), &lim),
            Err(OracleError::Capacity(_))
        ));
    }

    #[test]
    fn reversal_and_rotation() {
        let lim = OracleLimits::default();
        let rev = Instance::from_tokens(Graph::line(4).unwrap(), vec![3, 2, 1, 0]).unwrap();
        // Three steps would force (0,1)+(2,3), (1,2), (0,1)+(2,3) for the
        // end tokens, which leaves the middle pair crossed.
        let (k, w) = exact_opt(&rev, &lim).unwrap();
        assert_eq!(k, 4);
        assert!(verify(&rev, &w).valid);
        let rot =
            Instance::from_tokens(Graph::cycle(6).unwrap(), (0..6).map(|i| (i + 5) % 6).collect())
                .unwrap();
        let (k, w) = exact_opt(&rot, &lim).unwrap();
        assert_eq!(k, 5);
        assert_eq!(w.len(), 5);
        assert!(verify(&rot, &w).valid);
    }

    #[test]
    fn identity_is_free() {
        let inst = Instance::new(Graph::grid(2, 2).unwrap(), Configuration::identity(4)).unwrap();
        assert_eq!(exact_opt(&inst, &OracleLimits::default()).unwrap(), (0, Schedule::empty()));
    }

    #[test]
    fn vertex_cap() {
        let inst = Instance::new(Graph::line(10).unwrap(), Configuration::identity(10)).unwrap();
        assert!(matches!(
            exact_opt(&inst, &OracleLimits::default()),
            Err(OracleError::Capacity(_))
        ));
    }

    #[test]
    fn table_agrees_with_search() {
        let g = Graph::cycle(5).unwrap();
        let lim = OracleLimits::default();
        let table = DistanceTable::build(&g, &lim).unwrap();
        assert_eq!(table.len(), 120);
        for (tokens, d) in table.entries().take(30) {
            let inst = Instance::from_tokens(g.clone(), tokens).unwrap();
            assert_eq!(exact_opt(&inst, &lim).unwrap().0, d);
        }
    }

    #[test]
    fn colored_goal() {
        let g = Graph::line(4).unwrap();
        let lab = Labeling::new(vec![0, 1, 0, 1]);
        let inst =
            Instance::with_labeling(g.clone(), Configuration::from_tokens(vec![0, 2, 1, 3]).unwrap(), lab.clone())
                .unwrap();
        let (k, w) = exact_opt(&inst, &OracleLimits::default()).unwrap();
        assert_eq!(k, 1);
        assert!(verify(&inst, &w).valid);
        let table = DistanceTable::build_colored(&g, &lab, &OracleLimits::default()).unwrap();
        assert_eq!(table.distance(&inst.initial), Some(1));
        assert_eq!(table.len(), 6);
    }
}
