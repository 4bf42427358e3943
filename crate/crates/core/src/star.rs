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

//! Routing on subdivided stars.
//!
//! Vertex 0 is the center. Branch `b` owns a run of consecutive vertex ids
//! ordered from the center outward. A token is *native* to the branch that
//! contains its home vertex; the center token is foreign everywhere.
//!
//! The solver works in three phases: sort each branch so foreign tokens
//! sit closest to the center, pass foreign tokens through the center one
//! at a time, then sort every branch by destination.

use crate::config::Configuration;
use crate::error::SolveError;
use crate::graph::{Edge, Graph, Topology};
use crate::instance::{Instance, PhasedSchedule};
use crate::line::{odd_even_sort, two_class_sort};
use crate::schedule::{Matching, Schedule};

pub const PHASE_SORT: &str = "phase-1";
pub const PHASE_ROUTE: &str = "phase-2";
pub const PHASE_SETTLE: &str = "phase-3";

/// Branch structure of a star graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StarLayout {
    /// Vertices of each branch, nearest the center first.
    pub branches: Vec<Vec<usize>>,
    /// Branch of each vertex; `None` for the center.
    pub branch_of: Vec<Option<usize>>,
    /// Index along its branch of each vertex (0 for the vertex next to the
    /// center); meaningless for the center.
    pub depth: Vec<usize>,
}

impl StarLayout {
    pub fn from_graph(graph: &Graph) -> Result<Self, SolveError> {
        match graph.topology() {
            Topology::Star { branch_lengths } => Ok(Self::new(branch_lengths)),
            other => Err(SolveError::WrongTopology {
                algorithm: "star",
                expected: "a subdivided star",
                found: other.clone(),
            }),
        }
    }

    pub fn new(branch_lengths: &[usize]) -> Self {
        let n = 1 + branch_lengths.iter().sum::<usize>();
        let mut branches = Vec::new();
        let mut branch_of = vec![None; n];
        let mut depth = vec![0; n];
        let mut next = 1;
        for (b, &len) in branch_lengths.iter().enumerate() {
            let vs: Vec<usize> = (next..next + len).collect();
            for (i, &v) in vs.iter().enumerate() {
                branch_of[v] = Some(b);
                depth[v] = i;
            }
            next += len;
            branches.push(vs);
        }
        StarLayout {
            branches,
            branch_of,
            depth,
        }
    }

    pub fn branch_count(&self) -> usize {
        self.branches.len()
    }

    /// Whether `token` (named by its destination) is native to branch `b`.
    #[inline]
    fn native(&self, token: usize, b: usize) -> bool {
        self.branch_of[token] == Some(b)
    }
}

/// True when on every branch all foreign tokens are closer to the center
/// than all native ones.
pub fn branch_sorted(graph: &Graph, config: &Configuration) -> Result<bool, SolveError> {
    let layout = StarLayout::from_graph(graph)?;
    Ok(is_branch_sorted(&layout, config))
}

fn is_branch_sorted(layout: &StarLayout, config: &Configuration) -> bool {
    layout.branches.iter().enumerate().all(|(b, vs)| {
        let flags: Vec<bool> = vs.iter().map(|&v| layout.native(config.token_at(v), b)).collect();
        flags.windows(2).all(|w| !(w[0] && !w[1]))
    })
}

/// Phase 1: greedy two-class sort of every branch, in parallel.
pub(crate) fn sort_phase(layout: &StarLayout, config: &mut Configuration) -> Schedule {
    let parts = layout.branches.iter().enumerate().map(|(b, vs)| {
        let high: Vec<bool> = vs.iter().map(|&v| layout.native(config.token_at(v), b)).collect();
        two_class_sort(&high).relabeled(vs)
    });
    let s = Schedule::merge_parallel(parts.collect::<Vec<_>>());
    for m in s.steps() {
        m.apply_in_place(config);
    }
    s
}

fn all_on_branch(layout: &StarLayout, config: &Configuration) -> bool {
    config.token_at(0) == 0
        && layout.branches.iter().enumerate().all(|(b, vs)| {
            vs.iter().all(|&v| layout.native(config.token_at(v), b))
        })
}

/// One step of phase 2, chosen greedily.
///
/// Candidates in priority order: the swap across the center, pushing the
/// center token outward past a foreign token, then every (native, foreign)
/// inversion inside a branch. A candidate joins the step when it shares no
/// vertex with those already taken.
fn route_step(layout: &StarLayout, config: &Configuration) -> Matching {
    let mut used = vec![false; config.len()];
    let mut swaps: Vec<Edge> = Vec::new();
    let mut take = |swaps: &mut Vec<Edge>, u: usize, v: usize| {
        if !used[u] && !used[v] {
            used[u] = true;
            used[v] = true;
            swaps.push((u, v));
        }
    };

    let at_center = config.token_at(0);
    if at_center == 0 {
        let open = layout
            .branches
            .iter()
            .enumerate()
            .find(|(b, vs)| !layout.native(config.token_at(vs[0]), *b));
        if let Some((_, vs)) = open {
            take(&mut swaps, 0, vs[0]);
        }
    } else {
        let b = layout.branch_of[at_center].expect("non-center token has a branch");
        let first = layout.branches[b][0];
        if !layout.native(config.token_at(first), b) {
            take(&mut swaps, 0, first);
        }
        let home = config.position_of(0);
        if let Some(c) = layout.branch_of[home] {
            let vs = &layout.branches[c];
            let i = layout.depth[home];
            if i + 1 < vs.len() && !layout.native(config.token_at(vs[i + 1]), c) {
                take(&mut swaps, vs[i], vs[i + 1]);
            }
        }
    }
    for (b, vs) in layout.branches.iter().enumerate() {
        for w in vs.windows(2) {
            if layout.native(config.token_at(w[0]), b) && !layout.native(config.token_at(w[1]), b)
            {
                take(&mut swaps, w[0], w[1]);
            }
        }
    }
    Matching::from_disjoint(swaps)
}

/// Phase 2: move every token onto its branch through the center.
pub(crate) fn route_phase(layout: &StarLayout, config: &mut Configuration) -> Schedule {
    let mut s = Schedule::empty();
    // Each productive step settles a token or parks the center token, so
    // this cap is never reached by a correct run.
    let cap = 4 * config.len() + 4;
    while !all_on_branch(layout, config) && s.len() < cap {
        let m = route_step(layout, config);
        debug_assert!(!m.is_empty(), "phase 2 stalled");
        if m.is_empty() {
            break;
        }
        m.apply_in_place(config);
        s.push(m);
    }
    s
}

/// Phase 3: odd-even sort every branch by `key(token)`, in parallel.
pub(crate) fn settle_phase<F: Fn(usize) -> usize>(
    layout: &StarLayout,
    config: &mut Configuration,
    key: F,
) -> Schedule {
    let parts: Vec<Schedule> = layout
        .branches
        .iter()
        .map(|vs| {
            let keys: Vec<usize> = vs.iter().map(|&v| key(config.token_at(v))).collect();
            odd_even_sort(&keys).relabeled(vs)
        })
        .collect();
    let s = Schedule::merge_parallel(parts);
    for m in s.steps() {
        m.apply_in_place(config);
    }
    s
}

pub(crate) fn join_phases(p1: Schedule, p2: Schedule, p3: Schedule) -> PhasedSchedule {
    let phases = vec![
        (PHASE_SORT.to_string(), p1.len()),
        (PHASE_ROUTE.to_string(), p2.len()),
        (PHASE_SETTLE.to_string(), p3.len()),
    ];
    let mut schedule = p1;
    schedule.extend(p2);
    schedule.extend(p3);
    PhasedSchedule { schedule, phases }
}

/// Three-phase star routing toward `target` (the identity when `None`).
pub fn star_solve(
    instance: &Instance,
    target: Option<&Configuration>,
) -> Result<PhasedSchedule, SolveError> {
    let layout = StarLayout::from_graph(&instance.graph)?;
    let mut config = match target {
        Some(t) => instance.initial.relative_to(t)?,
        None => instance.initial.clone(),
    };
    let p1 = sort_phase(&layout, &mut config);
    let p2 = route_phase(&layout, &mut config);
    let p3 = settle_phase(&layout, &mut config, |t| layout.depth[t]);
    Ok(join_phases(p1, p2, p3))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::verify;

    fn star(lengths: &[usize], tokens: Vec<usize>) -> Instance {
        Instance::from_tokens(Graph::star(lengths).unwrap(), tokens).unwrap()
    }

    #[test]
    fn identity_costs_nothing() {
        let inst = star(&[2, 1, 3], (0..7).collect());
        let out = star_solve(&inst, None).unwrap();
        assert_eq!(out.schedule.len(), 0);
        assert!(branch_sorted(&inst.graph, &inst.initial).unwrap());
    }

    #[test]
    fn sortedness_definition() {
        let g = Graph::star(&[2, 1]).unwrap();
        // Branch 0 is vertices 1, 2; token 3 lives on branch 1.
        let foreign_first = Configuration::from_tokens(vec![0, 3, 2, 1]).unwrap();
        assert!(branch_sorted(&g, &foreign_first).unwrap());
        let native_first = Configuration::from_tokens(vec![0, 2, 3, 1]).unwrap();
        assert!(!branch_sorted(&g, &native_first).unwrap());
    }

    #[test]
    fn leaf_rotation_needs_every_leaf_through_center() {
        let h = 5;
        let tokens: Vec<usize> = (0..=h).map(|v| if v == 0 { 0 } else { v % h + 1 }).collect();
        let inst = star(&vec![1; h], tokens);
        let out = star_solve(&inst, None).unwrap();
        assert!(verify(&inst, &out.schedule).valid);
        assert!(out.schedule.len() >= h);
    }

    #[test]
    fn explicit_target() {
        let inst = star(&[2, 2, 1], vec![0, 1, 2, 3, 4, 5]);
        let target = Configuration::from_tokens(vec![0, 3, 4, 1, 2, 5]).unwrap();
        let out = star_solve(&inst, Some(&target)).unwrap();
        let mut c = inst.initial.clone();
        for m in out.schedule.steps() {
            m.apply_in_place(&mut c);
        }
        assert_eq!(c, target);
    }
}
