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

//! Matchings, schedules and their action on configurations.

use std::collections::BTreeSet;

use crate::config::Configuration;
use crate::error::ModelError;
use crate::graph::{edge, Edge, Graph};

/// A set of vertex-disjoint pairs swapped in parallel. Pairs are stored
/// normalized (`u < v`) and sorted.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matching {
    swaps: Vec<Edge>,
}

impl Matching {
    pub fn empty() -> Self {
        Matching { swaps: Vec::new() }
    }

    /// Builds a matching, rejecting self-pairs, duplicates and shared
    /// endpoints. Membership in a particular graph is checked separately.
    pub fn new<I: IntoIterator<Item = Edge>>(pairs: I) -> Result<Self, ModelError> {
        let mut swaps: Vec<Edge> = pairs.into_iter().map(|(u, v)| edge(u, v)).collect();
        swaps.sort_unstable();
        let mut seen = BTreeSet::new();
        for &(u, v) in &swaps {
            if u == v {
                return Err(ModelError::InvalidMatching(format!("self-pair ({}, {})", u, v)));
            }
            for w in [u, v] {
                if !seen.insert(w) {
                    return Err(ModelError::InvalidMatching(format!(
                        "vertex {} is used by two swaps",
                        w
                    )));
                }
            }
        }
        Ok(Matching { swaps })
    }

    /// Internal constructor for pairs already known to be disjoint.
    pub(crate) fn from_disjoint(mut swaps: Vec<Edge>) -> Self {
        for s in swaps.iter_mut() {
            *s = edge(s.0, s.1);
        }
        swaps.sort_unstable();
        debug_assert!(Matching::new(swaps.clone()).is_ok());
        Matching { swaps }
    }

    pub fn swaps(&self) -> &[Edge] {
        &self.swaps
    }

    pub fn len(&self) -> usize {
        self.swaps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.swaps.is_empty()
    }

    pub fn contains(&self, e: Edge) -> bool {
        self.swaps.binary_search(&edge(e.0, e.1)).is_ok()
    }

    /// Checks that every pair is an edge of `graph`.
    pub fn validate(&self, graph: &Graph) -> Result<(), ModelError> {
        for &(u, v) in &self.swaps {
            if v >= graph.vertex_count() || !graph.has_edge(u, v) {
                return Err(ModelError::InvalidMatching(format!(
                    "({}, {}) is not an edge of the graph",
                    u, v
                )));
            }
        }
        Ok(())
    }

    /// Applies the swaps in place without validation.
    pub fn apply_in_place(&self, config: &mut Configuration) {
        for &(u, v) in &self.swaps {
            config.swap(u, v);
        }
    }
}

/// Ordered sequence of matchings. Empty steps are allowed and counted.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Schedule {
    steps: Vec<Matching>,
}

impl Schedule {
    pub fn new(steps: Vec<Matching>) -> Self {
        Schedule { steps }
    }

    pub fn empty() -> Self {
        Schedule { steps: Vec::new() }
    }

    /// Builds a schedule from raw pair lists, checking disjointness.
    pub fn from_pairs(steps: Vec<Vec<Edge>>) -> Result<Self, ModelError> {
        let steps = steps
            .into_iter()
            .map(Matching::new)
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Schedule { steps })
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn steps(&self) -> &[Matching] {
        &self.steps
    }

    pub fn into_steps(self) -> Vec<Matching> {
        self.steps
    }

    pub fn push(&mut self, m: Matching) {
        self.steps.push(m);
    }

    pub fn extend(&mut self, other: Schedule) {
        self.steps.extend(other.steps);
    }

    pub fn reversed(&self) -> Schedule {
        Schedule {
            steps: self.steps.iter().rev().cloned().collect(),
        }
    }

    /// Total number of swaps over all steps.
    pub fn swap_count(&self) -> usize {
        self.steps.iter().map(Matching::len).sum()
    }

    pub fn validate(&self, graph: &Graph) -> Result<(), ModelError> {
        for (i, m) in self.steps.iter().enumerate() {
            m.validate(graph).map_err(|e| match e {
                ModelError::InvalidMatching(msg) => {
                    ModelError::InvalidMatching(format!("step {}: {}", i, msg))
                }
                other => other,
            })?;
        }
        Ok(())
    }

    /// Rewrites every vertex through `map`. Used to lift schedules computed
    /// on a relabeled path back onto the original graph.
    pub fn relabeled(&self, map: &[usize]) -> Schedule {
        Schedule {
            steps: self
                .steps
                .iter()
                .map(|m| Matching::from_disjoint(m.swaps.iter().map(|&(u, v)| (map[u], map[v])).collect()))
                .collect(),
        }
    }

    /// Runs several schedules on disjoint vertex sets side by side.
    pub fn merge_parallel<I: IntoIterator<Item = Schedule>>(parts: I) -> Schedule {
        let mut steps: Vec<Vec<Edge>> = Vec::new();
        for part in parts {
            for (i, m) in part.steps.into_iter().enumerate() {
                if steps.len() <= i {
                    steps.push(Vec::new());
                }
                steps[i].extend(m.swaps);
            }
        }
        Schedule {
            steps: steps.into_iter().map(Matching::from_disjoint).collect(),
        }
    }
}

fn check_size(config: &Configuration, graph: &Graph) -> Result<(), ModelError> {
    if config.len() != graph.vertex_count() {
        return Err(ModelError::SizeMismatch {
            expected: graph.vertex_count(),
            found: config.len(),
        });
    }
    Ok(())
}

/// Returns `config` with the tokens across every pair of `m` exchanged.
pub fn apply_matching(
    graph: &Graph,
    config: &Configuration,
    m: &Matching,
) -> Result<Configuration, ModelError> {
    check_size(config, graph)?;
    m.validate(graph)?;
    let mut out = config.clone();
    m.apply_in_place(&mut out);
    Ok(out)
}

/// Applies the steps of `s` left to right.
pub fn apply_schedule(
    graph: &Graph,
    config: &Configuration,
    s: &Schedule,
) -> Result<Configuration, ModelError> {
    check_size(config, graph)?;
    s.validate(graph)?;
    let mut out = config.clone();
    for m in s.steps() {
        m.apply_in_place(&mut out);
    }
    Ok(out)
}

/// Cancels swaps repeated on consecutive steps and drops empty steps, until
/// nothing changes. The result acts on every configuration exactly like `s`
/// and is never longer.
pub fn normalize(s: &Schedule) -> Schedule {
    let mut steps: Vec<Vec<Edge>> = s.steps.iter().map(|m| m.swaps.clone()).collect();
    loop {
        let mut changed = false;
        for i in 0..steps.len().saturating_sub(1) {
            let shared: Vec<Edge> = steps[i]
                .iter()
                .filter(|e| steps[i + 1].binary_search(e).is_ok())
                .copied()
                .collect();
            if !shared.is_empty() {
                changed = true;
                steps[i].retain(|e| !shared.contains(e));
                steps[i + 1].retain(|e| !shared.contains(e));
            }
        }
        let before = steps.len();
        steps.retain(|m| !m.is_empty());
        if !changed && steps.len() == before {
            break;
        }
    }
    Schedule {
        steps: steps.into_iter().map(|swaps| Matching { swaps }).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_overlapping_pairs() {
        assert!(Matching::new(vec![(0, 1), (1, 2)]).is_err());
        assert!(Matching::new(vec![(3, 3)]).is_err());
        let m = Matching::new(vec![(2, 1), (0, 3)]).unwrap();
        assert_eq!(m.swaps(), &[(0, 3), (1, 2)]);
    }

    #[test]
    fn non_edges_are_rejected() {
        let g = Graph::line(4).unwrap();
        let c = Configuration::identity(4);
        let m = Matching::new(vec![(0, 2)]).unwrap();
        assert!(apply_matching(&g, &c, &m).is_err());
    }

    #[test]
    fn cycle_rotation_by_adjacent_swaps() {
        // Tokens shifted one step around C8, fixed by the swaps (i, i+1).
        let g = Graph::cycle(8).unwrap();
        let tokens: Vec<usize> = (0..8).map(|i| (i + 7) % 8).collect();
        let c = Configuration::from_tokens(tokens).unwrap();
        let s = Schedule::from_pairs((0..7).map(|i| vec![(i, i + 1)]).collect()).unwrap();
        assert!(apply_schedule(&g, &c, &s).unwrap().is_identity());
    }

    #[test]
    fn doubled_step_normalizes_away() {
        let s = Schedule::from_pairs(vec![vec![(0, 1)], vec![(0, 1)]]).unwrap();
        assert_eq!(normalize(&s).len(), 0);
        let t = Schedule::from_pairs(vec![vec![(0, 1)], vec![(2, 3)]]).unwrap();
        assert_eq!(normalize(&t), t);
    }

    #[test]
    fn cascading_cancellation() {
        // Removing the middle pair exposes a new adjacent duplicate.
        let s = Schedule::from_pairs(vec![vec![(0, 1)], vec![(2, 3)], vec![(2, 3)], vec![(0, 1)]])
            .unwrap();
        assert!(normalize(&s).is_empty());
    }

    #[test]
    fn parallel_merge_pads_short_parts() {
        let a = Schedule::from_pairs(vec![vec![(0, 1)], vec![(1, 2)]]).unwrap();
        let b = Schedule::from_pairs(vec![vec![(5, 6)]]).unwrap();
        let m = Schedule::merge_parallel([a, b]);
        assert_eq!(m.len(), 2);
        assert_eq!(m.steps()[0].swaps(), &[(0, 1), (5, 6)]);
    }
}
