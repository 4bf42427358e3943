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

//! Colored routing: any token of the right color may finish on a vertex.
//!
//! Each solver fixes a color-correct target placement and routes to it with
//! the uncolored machinery. Outputs are then cleaned: swaps between two
//! tokens of the same color never change the color string, so they are
//! dropped, along with steps left empty.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::bipartite::perfect_matching;
use crate::config::{Configuration, Labeling};
use crate::cycle::cycle_solve_toward;
use crate::error::SolveError;
use crate::graph::{Graph, Topology};
use crate::grid::grid_three_phase_solve;
use crate::instance::{verify, Instance, PhasedSchedule, VerificationReport};
use crate::line::odd_even_solve_toward;
use crate::schedule::{Matching, Schedule};
use crate::star::{join_phases, route_phase, settle_phase, sort_phase, StarLayout};

fn labeling_of(instance: &Instance) -> Result<&Labeling, SolveError> {
    let lab = instance.labeling.as_ref().ok_or(SolveError::MissingLabeling)?;
    lab.check_size(instance.vertex_count())?;
    Ok(lab)
}

/// Verification against the colored goal: every vertex must hold a token
/// of its own color. Unlabeled instances are checked against the identity.
pub fn colored_verify(instance: &Instance, s: &Schedule) -> VerificationReport {
    verify(instance, s)
}

/// Removes swaps between equally colored tokens and then empty steps. The
/// color string after every remaining step is unchanged.
pub fn drop_same_color_swaps(labeling: &Labeling, initial: &Configuration, s: &Schedule) -> Schedule {
    let mut config = initial.clone();
    let mut out = Schedule::empty();
    for m in s.steps() {
        let kept: Vec<_> = m
            .swaps()
            .iter()
            .copied()
            .filter(|&(u, v)| {
                labeling.color_of_token(config.token_at(u)) != labeling.color_of_token(config.token_at(v))
            })
            .collect();
        m.apply_in_place(&mut config);
        if !kept.is_empty() {
            out.push(Matching::from_disjoint(kept));
        }
    }
    out
}

/// Cleans each phase separately so phase boundaries stay meaningful.
fn clean_phased(labeling: &Labeling, initial: &Configuration, p: PhasedSchedule) -> PhasedSchedule {
    let mut config = initial.clone();
    let mut steps = p.schedule.into_steps().into_iter();
    let mut schedule = Schedule::empty();
    let mut phases = Vec::new();
    for (name, len) in p.phases {
        let part = Schedule::new(steps.by_ref().take(len).collect());
        let cleaned = drop_same_color_swaps(labeling, &config, &part);
        for m in part.steps() {
            m.apply_in_place(&mut config);
        }
        phases.push((name, cleaned.len()));
        schedule.extend(cleaned);
    }
    PhasedSchedule { schedule, phases }
}

/// The order-preserving color-correct target on a line: the `k`-th token of
/// each color from the left goes to the `k`-th vertex of that color.
fn order_preserving_target(labeling: &Labeling, vertices: &[usize], config: &Configuration) -> Vec<(usize, usize)> {
    let mut slots: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
    for &v in vertices {
        slots.entry(labeling.color_of_vertex(v)).or_default().push(v);
    }
    let mut used: BTreeMap<u32, usize> = BTreeMap::new();
    let mut out = Vec::with_capacity(vertices.len());
    for &v in vertices {
        let t = config.token_at(v);
        let c = labeling.color_of_token(t);
        let k = used.entry(c).or_insert(0);
        out.push((t, slots[&c][*k]));
        *k += 1;
    }
    out
}

fn target_from_pairs(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Configuration {
    let mut tokens = vec![usize::MAX; n];
    for (t, v) in pairs {
        tokens[v] = t;
    }
    Configuration::from_tokens(tokens).expect("target assignment is a bijection")
}

fn require(instance: &Instance, algorithm: &'static str, expected: &'static str, ok: bool) -> Result<(), SolveError> {
    if ok {
        Ok(())
    } else {
        Err(SolveError::WrongTopology {
            algorithm,
            expected,
            found: instance.graph.topology().clone(),
        })
    }
}

/// Colored routing on a line via its unique order-preserving target.
pub fn colored_line_solve(instance: &Instance) -> Result<Schedule, SolveError> {
    require(
        instance,
        "colored line",
        "a line graph",
        matches!(instance.graph.topology(), Topology::Line { .. }),
    )?;
    let lab = labeling_of(instance)?;
    let n = instance.vertex_count();
    let vertices: Vec<usize> = (0..n).collect();
    let target = target_from_pairs(n, order_preserving_target(lab, &vertices, &instance.initial));
    let s = odd_even_solve_toward(instance, &target)?;
    Ok(drop_same_color_swaps(lab, &instance.initial, &s))
}

/// Splits an incomplete labeling into its blank color (if any).
fn blank_color(lab: &Labeling) -> Result<Option<u32>, SolveError> {
    let repeated: Vec<u32> = lab
        .multiplicities()
        .into_iter()
        .filter(|&(_, k)| k > 1)
        .map(|(c, _)| c)
        .collect();
    match repeated.len() {
        0 => Ok(None),
        1 => Ok(Some(repeated[0])),
        _ => Err(SolveError::NotIncomplete(format!(
            "colors {:?} all appear more than once",
            repeated
        ))),
    }
}

/// Incomplete routing on a cycle: one blank color, every other color
/// unique.
///
/// Blank tokens never need to pass each other, so their targets are a
/// cyclic shift of their current order onto the blank vertices. Every
/// shift is tried and the shortest schedule wins (lowest shift on ties).
pub fn incomplete_cycle_solve(instance: &Instance) -> Result<Schedule, SolveError> {
    require(
        instance,
        "incomplete cycle",
        "a cycle graph",
        matches!(instance.graph.topology(), Topology::Cycle { .. }),
    )?;
    let lab = labeling_of(instance)?;
    let blank = blank_color(lab)?;
    if lab.is_color_correct(&instance.initial) {
        return Ok(Schedule::empty());
    }
    let n = instance.vertex_count();
    let Some(blank) = blank else {
        let s = cycle_solve_toward(instance, &Configuration::identity(n))?;
        return Ok(drop_same_color_swaps(lab, &instance.initial, &s));
    };
    let blank_tokens: Vec<usize> = (0..n)
        .map(|v| instance.initial.token_at(v))
        .filter(|&t| lab.color_of_token(t) == blank)
        .collect();
    let blank_vertices: Vec<usize> = (0..n).filter(|&v| lab.color_of_vertex(v) == blank).collect();
    let m = blank_tokens.len();
    let candidates: Vec<(usize, Schedule)> = (0..m)
        .into_par_iter()
        .map(|shift| {
            let pairs = (0..n)
                .filter(|&t| lab.color_of_token(t) != blank)
                .map(|t| (t, t))
                .chain(
                    blank_tokens
                        .iter()
                        .enumerate()
                        .map(|(i, &t)| (t, blank_vertices[(i + shift) % m])),
                );
            let target = target_from_pairs(n, pairs);
            let s = cycle_solve_toward(instance, &target).expect("topology checked above");
            (shift, drop_same_color_swaps(lab, &instance.initial, &s))
        })
        .collect();
    let best = candidates
        .into_iter()
        .min_by_key(|(shift, s)| (s.len(), *shift))
        .expect("at least one blank token");
    Ok(best.1)
}

/// Smallest `d` such that every token can be given a vertex of its color
/// within distance `d`, each vertex used once; returns `d` and such a
/// target placement.
pub fn bottleneck_d_star(instance: &Instance) -> Result<(usize, Configuration), SolveError> {
    let lab = labeling_of(instance)?;
    Ok(bottleneck(&instance.graph, lab, &instance.initial))
}

fn bottleneck(graph: &Graph, lab: &Labeling, config: &Configuration) -> (usize, Configuration) {
    let n = config.len();
    let mut groups: BTreeMap<u32, (Vec<usize>, Vec<usize>)> = BTreeMap::new();
    for v in 0..n {
        groups.entry(lab.color_of_token(config.token_at(v))).or_default().0.push(v);
        groups.entry(lab.color_of_vertex(v)).or_default().1.push(v);
    }
    for d in 0..n {
        let mut pairs = Vec::with_capacity(n);
        let mut feasible = true;
        for (sources, sinks) in groups.values() {
            match perfect_matching(sources.len(), |l, r| graph.distance(sources[l], sinks[r]) <= d) {
                Some(m) => {
                    pairs.extend(m.iter().enumerate().map(|(l, &r)| (config.token_at(sources[l]), sinks[r])))
                }
                None => {
                    feasible = false;
                    break;
                }
            }
        }
        if feasible {
            return (d, target_from_pairs(n, pairs));
        }
    }
    unreachable!("distance n-1 admits every assignment on a connected graph")
}

/// Colored routing on a grid: three-phase routing toward the bottleneck
/// target.
pub fn colored_grid_solve(instance: &Instance) -> Result<PhasedSchedule, SolveError> {
    require(
        instance,
        "colored grid",
        "a grid graph",
        matches!(instance.graph.topology(), Topology::Grid { .. }),
    )?;
    let lab = labeling_of(instance)?;
    let (_, target) = bottleneck(&instance.graph, lab, &instance.initial);
    let phased = grid_three_phase_solve(instance, Some(&target))?;
    Ok(clean_phased(lab, &instance.initial, phased))
}

/// The target used for the first two star phases.
///
/// Per color and branch, the outermost tokens of that color already on the
/// branch keep the outermost vertices of that color there. Remaining
/// tokens, taken in order of their current vertex, go to the nearest free
/// vertex of their color (lowest id on ties).
pub fn colored_star_target(instance: &Instance) -> Result<Configuration, SolveError> {
    let layout = StarLayout::from_graph(&instance.graph)?;
    let lab = labeling_of(instance)?;
    Ok(star_target(&layout, &instance.graph, lab, &instance.initial))
}

fn star_target(layout: &StarLayout, graph: &Graph, lab: &Labeling, config: &Configuration) -> Configuration {
    let n = config.len();
    let mut assigned = vec![false; n];
    let mut free = vec![true; n];
    let mut pairs = Vec::with_capacity(n);
    for vs in &layout.branches {
        let mut tokens_by_color: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
        let mut vertices_by_color: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
        for &v in vs.iter().rev() {
            tokens_by_color.entry(lab.color_of_token(config.token_at(v))).or_default().push(v);
            vertices_by_color.entry(lab.color_of_vertex(v)).or_default().push(v);
        }
        for (c, holders) in tokens_by_color {
            if let Some(sinks) = vertices_by_color.get(&c) {
                for (&h, &w) in holders.iter().zip(sinks) {
                    let t = config.token_at(h);
                    assigned[t] = true;
                    free[w] = false;
                    pairs.push((t, w));
                }
            }
        }
    }
    for v in 0..n {
        let t = config.token_at(v);
        if assigned[t] {
            continue;
        }
        let c = lab.color_of_token(t);
        let w = (0..n)
            .filter(|&w| free[w] && lab.color_of_vertex(w) == c)
            .min_by_key(|&w| (graph.distance(v, w), w))
            .expect("color counts balance");
        free[w] = false;
        pairs.push((t, w));
    }
    target_from_pairs(n, pairs)
}

/// Colored routing on a subdivided star.
///
/// Phases 1 and 2 route toward `colored_star_target`; phase 3 sorts each
/// branch to its order-preserving color-correct placement instead of that
/// target.
pub fn colored_star_solve(instance: &Instance) -> Result<PhasedSchedule, SolveError> {
    let layout = StarLayout::from_graph(&instance.graph)?;
    let lab = labeling_of(instance)?;
    let target = star_target(&layout, &instance.graph, lab, &instance.initial);
    let mut rel = instance.initial.relative_to(&target)?;
    let p1 = sort_phase(&layout, &mut rel);
    let p2 = route_phase(&layout, &mut rel);

    // Current placement in real token names, to read colors.
    let real = Configuration::from_tokens(rel.tokens().iter().map(|&t| target.token_at(t)).collect())
        .expect("relabeling is a bijection");
    let mut key = vec![0; rel.len()];
    for vs in &layout.branches {
        for (t, w) in order_preserving_target(lab, vs, &real) {
            key[target.position_of(t)] = layout.depth[w];
        }
    }
    let p3 = settle_phase(&layout, &mut rel, |t| key[t]);
    Ok(clean_phased(lab, &instance.initial, join_phases(p1, p2, p3)))
}

/// Picks the colored solver matching the topology.
pub fn colored_solve(instance: &Instance) -> Result<(String, PhasedSchedule), SolveError> {
    labeling_of(instance)?;
    match instance.graph.topology() {
        Topology::Line { .. } => Ok((
            "colored-line".to_string(),
            PhasedSchedule::single("line", colored_line_solve(instance)?),
        )),
        Topology::Cycle { .. } => Ok((
            "incomplete-cycle".to_string(),
            PhasedSchedule::single("cycle", incomplete_cycle_solve(instance)?),
        )),
        Topology::Star { .. } => Ok(("colored-star".to_string(), colored_star_solve(instance)?)),
        Topology::Grid { .. } => Ok(("colored-grid".to_string(), colored_grid_solve(instance)?)),
        other => Err(SolveError::WrongTopology {
            algorithm: "colored",
            expected: "a line, cycle, star or grid",
            found: other.clone(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labeled(graph: Graph, tokens: Vec<usize>, colors: Vec<u32>) -> Instance {
        Instance::with_labeling(graph, Configuration::from_tokens(tokens).unwrap(), Labeling::new(colors))
            .unwrap()
    }

    #[test]
    fn line_example_needs_one_swap() {
        // Vertices demand R, B, R, B and currently read R, R, B, B.
        let inst = labeled(Graph::line(4).unwrap(), vec![0, 2, 1, 3], vec![0, 1, 0, 1]);
        let s = colored_line_solve(&inst).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s.steps()[0].swaps(), &[(1, 2)]);
        assert!(colored_verify(&inst, &s).valid);
    }

    #[test]
    fn uniform_color_is_solved() {
        let inst = labeled(Graph::cycle(6).unwrap(), vec![3, 1, 4, 0, 5, 2], vec![7; 6]);
        assert!(incomplete_cycle_solve(&inst).unwrap().is_empty());
        assert_eq!(bottleneck_d_star(&inst).unwrap().0, 0);
    }

    #[test]
    fn lone_token_two_steps_away() {
        // Token 0 is unique and sits two vertices from home.
        let inst = labeled(Graph::cycle(6).unwrap(), vec![2, 1, 0, 3, 4, 5], vec![1, 0, 0, 0, 0, 0]);
        let s = incomplete_cycle_solve(&inst).unwrap();
        assert_eq!(s.len(), 2);
        assert!(colored_verify(&inst, &s).valid);
    }

    #[test]
    fn distinct_colors_match_d_max() {
        let inst = labeled(Graph::grid(2, 3).unwrap(), vec![5, 1, 2, 3, 4, 0], (0..6).collect());
        let (d, target) = bottleneck_d_star(&inst).unwrap();
        assert_eq!(d, 3);
        assert!(target.is_identity());
    }

    #[test]
    fn rejects_two_repeated_colors() {
        let inst = labeled(Graph::cycle(4).unwrap(), vec![1, 0, 2, 3], vec![0, 0, 1, 1]);
        assert!(matches!(incomplete_cycle_solve(&inst), Err(SolveError::NotIncomplete(_))));
    }

    #[test]
    fn star_and_grid_reach_color_goal() {
        let star = labeled(Graph::star(&[2, 2, 1]).unwrap(), vec![3, 4, 0, 5, 1, 2], vec![0, 1, 1, 2, 2, 0]);
        let s = colored_star_solve(&star).unwrap();
        assert!(colored_verify(&star, &s.schedule).valid);
        let grid = labeled(Graph::grid(3, 3).unwrap(), (0..9).rev().collect(), vec![0, 1, 2, 0, 1, 2, 0, 1, 2]);
        let g = colored_grid_solve(&grid).unwrap();
        assert!(colored_verify(&grid, &g.schedule).valid);
    }
}
