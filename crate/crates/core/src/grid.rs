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

//! Routing on grids.
//!
//! Vertex `(a, b)` of a `rows x cols` grid has id `a * cols + b`. Two
//! strategies are provided: odd-even sorting along a snake-shaped
//! Hamiltonian path, and a three-phase scheme that sorts along short lines,
//! then long lines, then short lines again.

use std::collections::BTreeMap;

use crate::bipartite::regular_decomposition;
use crate::config::Configuration;
use crate::error::SolveError;
use crate::graph::{edge, Edge, Graph, Topology};
use crate::instance::{Instance, PhasedSchedule};
use crate::line::odd_even_sort;
use crate::schedule::{Matching, Schedule};

pub const PHASE_SPREAD: &str = "phase-1";
pub const PHASE_CROSS: &str = "phase-2";
pub const PHASE_FINISH: &str = "phase-3";

fn require_grid(graph: &Graph, algorithm: &'static str) -> Result<(usize, usize), SolveError> {
    match graph.topology() {
        Topology::Grid { rows, cols } => Ok((*rows, *cols)),
        other => Err(SolveError::WrongTopology {
            algorithm,
            expected: "a grid graph",
            found: other.clone(),
        }),
    }
}

fn target_relative(
    instance: &Instance,
    target: Option<&Configuration>,
) -> Result<Configuration, SolveError> {
    Ok(match target {
        Some(t) => instance.initial.relative_to(t)?,
        None => instance.initial.clone(),
    })
}

/// Snake through a `rows x cols` grid: down column 0, across the bottom
/// row, up column 1, across the top row, and so on. Returns the vertex
/// sequence and its edges.
pub fn boustrophedon_path(rows: usize, cols: usize) -> (Vec<usize>, Vec<Edge>) {
    let mut order = Vec::with_capacity(rows * cols);
    for b in 0..cols {
        if b % 2 == 0 {
            order.extend((0..rows).map(|a| a * cols + b));
        } else {
            order.extend((0..rows).rev().map(|a| a * cols + b));
        }
    }
    let edges = order.windows(2).map(|w| edge(w[0], w[1])).collect();
    (order, edges)
}

/// The snake used by the path solver: along columns when the grid is at
/// least as wide as it is tall, along rows otherwise, so its turns always
/// cross the short side.
fn solver_path(rows: usize, cols: usize) -> Vec<usize> {
    if rows <= cols {
        boustrophedon_path(rows, cols).0
    } else {
        // Snake of the transposed grid, mapped back to original ids.
        boustrophedon_path(cols, rows)
            .0
            .into_iter()
            .map(|v| {
                let (b, a) = (v / rows, v % rows);
                a * cols + b
            })
            .collect()
    }
}

/// Odd-even sorting along the snake path, toward `target` (the identity
/// when `None`).
pub fn grid_path_solve(
    instance: &Instance,
    target: Option<&Configuration>,
) -> Result<Schedule, SolveError> {
    let (rows, cols) = require_grid(&instance.graph, "grid path")?;
    let config = target_relative(instance, target)?;
    let path = solver_path(rows, cols);
    let mut rank = vec![0; path.len()];
    for (i, &v) in path.iter().enumerate() {
        rank[v] = i;
    }
    let keys: Vec<usize> = path.iter().map(|&v| rank[config.token_at(v)]).collect();
    Ok(odd_even_sort(&keys).relabeled(&path))
}

/// On a `2 x cols` ladder, replaces one step `m` of non-path edges by three
/// steps using only path edges: rungs, path row edges, rungs again.
///
/// The swaps of `m` are split into runs over consecutive column pairs;
/// each run is simulated by conjugating the row edges of its sub-ladder
/// with the rungs of that sub-ladder.
pub fn simulate_off_path_matching(m: &Matching, cols: usize) -> Result<[Matching; 3], SolveError> {
    let n = 2 * cols;
    // Column-pair index of each swap; off-path edges are top-row pairs at
    // even b and bottom-row pairs at odd b.
    let mut starts = Vec::new();
    for &(u, v) in m.swaps() {
        if v >= n || v != u + 1 || u % cols + 1 >= cols {
            return Err(SolveError::NotOffPath((u, v)));
        }
        let (a, b) = (u / cols, u % cols);
        if (a == 0) != (b % 2 == 0) {
            return Err(SolveError::NotOffPath((u, v)));
        }
        starts.push(b);
    }
    starts.sort_unstable();
    let mut rungs = Vec::new();
    let mut rails = Vec::new();
    let mut i = 0;
    while i < starts.len() {
        let mut j = i;
        while j + 1 < starts.len() && starts[j + 1] == starts[j] + 1 {
            j += 1;
        }
        let (c1, c2) = (starts[i], starts[j]);
        for b in c1..=c2 + 1 {
            rungs.push((b, cols + b));
        }
        for b in c1..=c2 {
            // The path row edge at column pair b is on the other row.
            let a = if b % 2 == 0 { 1 } else { 0 };
            rails.push((a * cols + b, a * cols + b + 1));
        }
        i = j + 1;
    }
    let a = Matching::from_disjoint(rungs);
    let b = Matching::from_disjoint(rails);
    Ok([a.clone(), b, a])
}

/// Orientation of the three-phase scheme. P-lines are the short lines
/// used in phases 1 and 3; position `q` along a P-line indexes the long
/// Q-lines used in phase 2.
#[derive(Debug, Clone, Copy)]
struct Frame {
    rows: usize,
    cols: usize,
    p_is_row: bool,
}

impl Frame {
    fn new(rows: usize, cols: usize) -> Self {
        Frame {
            rows,
            cols,
            p_is_row: cols <= rows,
        }
    }

    fn p_count(&self) -> usize {
        if self.p_is_row {
            self.rows
        } else {
            self.cols
        }
    }

    fn p_len(&self) -> usize {
        if self.p_is_row {
            self.cols
        } else {
            self.rows
        }
    }

    fn vertex(&self, p: usize, q: usize) -> usize {
        if self.p_is_row {
            p * self.cols + q
        } else {
            q * self.cols + p
        }
    }

    /// `(p, q)` of a vertex.
    fn coords(&self, v: usize) -> (usize, usize) {
        let (a, b) = (v / self.cols, v % self.cols);
        if self.p_is_row {
            (a, b)
        } else {
            (b, a)
        }
    }

    fn p_line(&self, p: usize) -> Vec<usize> {
        (0..self.p_len()).map(|q| self.vertex(p, q)).collect()
    }

    fn q_line(&self, q: usize) -> Vec<usize> {
        (0..self.p_count()).map(|p| self.vertex(p, q)).collect()
    }
}

/// For every token, the position along its current P-line that makes the
/// placement amicable: each Q-line then holds exactly one token bound for
/// each P-line.
fn amicable_slots(frame: &Frame, config: &Configuration) -> Vec<usize> {
    let np = frame.p_count();
    let mut counts = vec![vec![0; np]; np];
    for v in 0..config.len() {
        let (p, _) = frame.coords(v);
        let (pt, _) = frame.coords(config.token_at(v));
        counts[p][pt] += 1;
    }
    let matchings = regular_decomposition(counts);
    // slots[(p, pt)] lists the positions q whose matching pairs p with pt.
    let mut slots: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for (q, m) in matchings.iter().enumerate() {
        for (p, &pt) in m.iter().enumerate() {
            slots.entry((p, pt)).or_default().push(q);
        }
    }
    // Tokens of one (line, destination line) class keep their order.
    let mut slot_of = vec![0; config.len()];
    for p in 0..np {
        let mut taken: BTreeMap<usize, usize> = BTreeMap::new();
        for v in frame.p_line(p) {
            let t = config.token_at(v);
            let (pt, _) = frame.coords(t);
            let k = taken.entry(pt).or_insert(0);
            slot_of[t] = slots[&(p, pt)][*k];
            *k += 1;
        }
    }
    slot_of
}

/// Places every token at its amicable slot within its current P-line.
fn amicable_config(frame: &Frame, config: &Configuration) -> Configuration {
    let slot_of = amicable_slots(frame, config);
    let mut tokens = vec![0; config.len()];
    for v in 0..config.len() {
        let t = config.token_at(v);
        let (p, _) = frame.coords(v);
        tokens[frame.vertex(p, slot_of[t])] = t;
    }
    Configuration::from_tokens(tokens).expect("amicable slots form a permutation")
}

/// Amicable placement reachable by moving tokens within their rows: every
/// column ends up holding exactly one token whose home is in each row.
pub fn amicable_assignment(
    graph: &Graph,
    config: &Configuration,
) -> Result<Configuration, SolveError> {
    let (rows, cols) = require_grid(graph, "amicable assignment")?;
    let frame = Frame {
        rows,
        cols,
        p_is_row: true,
    };
    Ok(amicable_config(&frame, config))
}

/// Whether every column holds exactly one token whose home is in each row.
pub fn is_amicable(graph: &Graph, config: &Configuration) -> Result<bool, SolveError> {
    let (rows, cols) = require_grid(graph, "amicable check")?;
    Ok((0..cols).all(|b| {
        let mut seen = vec![false; rows];
        (0..rows).all(|a| {
            let home_row = config.token_at(a * cols + b) / cols;
            !std::mem::replace(&mut seen[home_row], true)
        })
    }))
}

/// Odd-even sorts each given line by `key(token)` in parallel.
fn sort_lines<F: Fn(usize) -> usize>(
    lines: &[Vec<usize>],
    config: &mut Configuration,
    key: F,
) -> Schedule {
    let parts: Vec<Schedule> = lines
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

/// Three-phase routing toward `target` (the identity when `None`).
///
/// Phase 1 sorts the short lines into an amicable placement, phase 2 sorts
/// the long lines so every token reaches its home short line, phase 3
/// sorts the short lines again.
pub fn grid_three_phase_solve(
    instance: &Instance,
    target: Option<&Configuration>,
) -> Result<PhasedSchedule, SolveError> {
    let (rows, cols) = require_grid(&instance.graph, "grid three-phase")?;
    let mut config = target_relative(instance, target)?;
    let frame = Frame::new(rows, cols);
    let p_lines: Vec<Vec<usize>> = (0..frame.p_count()).map(|p| frame.p_line(p)).collect();
    let q_lines: Vec<Vec<usize>> = (0..frame.p_len()).map(|q| frame.q_line(q)).collect();

    let slot_of = amicable_slots(&frame, &config);
    let p1 = sort_lines(&p_lines, &mut config, |t| slot_of[t]);
    let p2 = sort_lines(&q_lines, &mut config, |t| frame.coords(t).0);
    let p3 = sort_lines(&p_lines, &mut config, |t| frame.coords(t).1);

    let phases = vec![
        (PHASE_SPREAD.to_string(), p1.len()),
        (PHASE_CROSS.to_string(), p2.len()),
        (PHASE_FINISH.to_string(), p3.len()),
    ];
    let mut schedule = p1;
    schedule.extend(p2);
    schedule.extend(p3);
    Ok(PhasedSchedule { schedule, phases })
}

/// Runs both grid strategies and keeps the shorter schedule (the path
/// solver on ties).
pub fn grid_solve(
    instance: &Instance,
    target: Option<&Configuration>,
) -> Result<(String, PhasedSchedule), SolveError> {
    let path = grid_path_solve(instance, target)?;
    let phased = grid_three_phase_solve(instance, target)?;
    if path.len() <= phased.schedule.len() {
        Ok(("grid-path".to_string(), PhasedSchedule::single("path", path)))
    } else {
        Ok(("grid-3phase".to_string(), phased))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::verify;
    use crate::schedule::apply_schedule;

    #[test]
    fn snake_on_two_by_two() {
        let (order, edges) = boustrophedon_path(2, 2);
        assert_eq!(order, vec![0, 2, 3, 1]);
        assert_eq!(edges.len(), 3);
        assert_eq!(boustrophedon_path(1, 4).0, vec![0, 1, 2, 3]);
    }

    #[test]
    fn transposed_rail_pair() {
        let g = Graph::grid(2, 3).unwrap();
        let inst = Instance::from_tokens(g, vec![1, 0, 2, 3, 4, 5]).unwrap();
        let s = grid_path_solve(&inst, None).unwrap();
        assert_eq!(s.len(), 3);
        assert!(verify(&inst, &s).valid);
    }

    #[test]
    fn off_path_simulation_example() {
        // Top pair at columns 0-1, bottom pair at columns 3-4 of a 2x5 ladder.
        let m = Matching::new(vec![(0, 1), (8, 9)]).unwrap();
        let [a1, b, a2] = simulate_off_path_matching(&m, 5).unwrap();
        assert_eq!(a1, a2);
        assert_eq!(a1.swaps(), &[(0, 5), (1, 6), (3, 8), (4, 9)]);
        assert_eq!(b.swaps(), &[(3, 4), (5, 6)]);
        let g = Graph::grid(2, 5).unwrap();
        let c = Configuration::identity(10);
        let three = Schedule::new(vec![a1, b, a2]);
        assert_eq!(
            apply_schedule(&g, &c, &three).unwrap(),
            apply_schedule(&g, &c, &Schedule::new(vec![m])).unwrap()
        );
    }

    #[test]
    fn path_edges_are_not_simulated() {
        let m = Matching::new(vec![(1, 2)]).unwrap();
        assert!(simulate_off_path_matching(&m, 4).is_err());
        let rung = Matching::new(vec![(0, 4)]).unwrap();
        assert!(simulate_off_path_matching(&rung, 4).is_err());
        let [a, b, c] = simulate_off_path_matching(&Matching::empty(), 4).unwrap();
        assert!(a.is_empty() && b.is_empty() && c.is_empty());
    }

    #[test]
    fn amicable_identity() {
        let g = Graph::grid(3, 3).unwrap();
        let id = Configuration::identity(9);
        assert!(is_amicable(&g, &id).unwrap());
        assert_eq!(amicable_assignment(&g, &id).unwrap(), id);
    }

    #[test]
    fn three_phase_reverse() {
        let g = Graph::grid(3, 4).unwrap();
        let inst = Instance::from_tokens(g, (0..12).rev().collect()).unwrap();
        let out = grid_three_phase_solve(&inst, None).unwrap();
        assert!(verify(&inst, &out.schedule).valid);
    }
}
