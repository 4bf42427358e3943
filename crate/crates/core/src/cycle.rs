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

//! Routing on cycles.
//!
//! Edge `i` of an `n`-cycle joins vertices `i` and `(i + 1) % n`. Each edge
//! has an opposite edge half-way around the cycle; deleting it leaves a
//! path, and the edge is *reasonable* when its two tokens are out of order
//! on that path. Solvers alternate reasonable swaps over fixed edge classes
//! and fall back to odd-even sorting on the path `0..n` when that stalls.

use crate::config::Configuration;
use crate::error::SolveError;
use crate::graph::{Edge, Topology};
use crate::instance::Instance;
use crate::line::odd_even_sort;
use crate::schedule::{Matching, Schedule};

fn require_cycle(instance: &Instance, algorithm: &'static str) -> Result<usize, SolveError> {
    match instance.graph.topology() {
        Topology::Cycle { n } => Ok(*n),
        other => Err(SolveError::WrongTopology {
            algorithm,
            expected: "a cycle graph",
            found: other.clone(),
        }),
    }
}

fn edge_index(e: Edge, n: usize) -> Result<usize, SolveError> {
    let (u, v) = e;
    if u >= n || v >= n {
        return Err(SolveError::NotAnEdge(e));
    }
    if (u + 1) % n == v {
        Ok(u)
    } else if (v + 1) % n == u {
        Ok(v)
    } else {
        Err(SolveError::NotAnEdge(e))
    }
}

fn opposite_index(i: usize, n: usize) -> usize {
    (i + n / 2) % n
}

/// The edge half-way around an `n`-cycle from `e`, returned as
/// `(a, (a + 1) % n)`.
///
/// On even cycles this pairs edges up; on odd cycles it is a rotation by
/// `(n - 1) / 2` edges, so it is not an involution there.
pub fn opposite_edge(e: Edge, n: usize) -> Result<Edge, SolveError> {
    if n < 3 {
        return Err(SolveError::NotAnEdge(e));
    }
    let o = opposite_index(edge_index(e, n)?, n);
    Ok((o, (o + 1) % n))
}

/// Whether edge index `i` is out of order on the path that starts just
/// after its opposite edge.
fn reasonable_at(config: &Configuration, i: usize) -> bool {
    let n = config.len();
    let o = opposite_index(i, n);
    let pos = |x: usize| (x + 2 * n - o - 1) % n;
    pos(config.token_at(i)) > pos(config.token_at((i + 1) % n))
}

/// Whether swapping across `e` moves both tokens toward their homes along
/// the path obtained by deleting the opposite edge.
pub fn is_reasonable(config: &Configuration, e: Edge) -> Result<bool, SolveError> {
    let n = config.len();
    if n < 3 {
        return Err(SolveError::NotAnEdge(e));
    }
    Ok(reasonable_at(config, edge_index(e, n)?))
}

/// Repeats `pattern` over `classes`, each step swapping every reasonable
/// edge of the current class. Gives up once a run of empty steps has
/// visited every class (nothing is reasonable) or after `n` steps.
fn reasonable_alternation(
    config: &Configuration,
    classes: &[Vec<usize>],
    pattern: &[usize],
) -> Option<Schedule> {
    let n = config.len();
    let mut c = config.clone();
    let mut steps = Vec::new();
    let mut idle_classes = vec![false; classes.len()];
    while !c.is_identity() && steps.len() < n {
        let class = pattern[steps.len() % pattern.len()];
        let swaps: Vec<Edge> = classes[class]
            .iter()
            .filter(|&&i| reasonable_at(&c, i))
            .map(|&i| (i, (i + 1) % n))
            .collect();
        if swaps.is_empty() {
            idle_classes[class] = true;
            if idle_classes.iter().all(|&b| b) {
                return None;
            }
        } else {
            idle_classes.iter_mut().for_each(|b| *b = false);
        }
        let m = Matching::from_disjoint(swaps);
        m.apply_in_place(&mut c);
        steps.push(m);
    }
    if c.is_identity() {
        Some(Schedule::new(steps))
    } else {
        None
    }
}

fn even_classes(n: usize) -> Vec<Vec<usize>> {
    vec![(0..n).step_by(2).collect(), (1..n).step_by(2).collect()]
}

/// `[E1, E2, E3]`: edges `0, 2, .., n-3`, edges `1, 3, .., n-2`, and the
/// closing edge `n-1`.
fn odd_classes(n: usize) -> Vec<Vec<usize>> {
    vec![
        (0..n - 1).step_by(2).collect(),
        (1..n - 1).step_by(2).collect(),
        vec![n - 1],
    ]
}

/// Alternates reasonable swaps on the two parity classes of an even cycle.
/// Returns `None` when two consecutive steps are empty or the identity is
/// not reached within `n` steps.
pub fn cycle_odd_even(instance: &Instance) -> Result<Option<Schedule>, SolveError> {
    let n = require_cycle(instance, "cycle odd-even")?;
    if n % 2 != 0 {
        return Err(SolveError::WrongTopology {
            algorithm: "cycle odd-even",
            expected: "an even cycle",
            found: instance.graph.topology().clone(),
        });
    }
    Ok(reasonable_alternation(&instance.initial, &even_classes(n), &[0, 1]))
}

/// Odd-cycle counterpart of `cycle_odd_even`, cycling through the classes
/// in the order E1, E3, E2, E3.
pub fn odd_cycle_reasonable(instance: &Instance) -> Result<Option<Schedule>, SolveError> {
    let n = require_cycle(instance, "odd-cycle alternation")?;
    if n % 2 == 0 {
        return Err(SolveError::WrongTopology {
            algorithm: "odd-cycle alternation",
            expected: "an odd cycle",
            found: instance.graph.topology().clone(),
        });
    }
    Ok(reasonable_alternation(&instance.initial, &odd_classes(n), &[0, 2, 1, 2]))
}

/// Odd-even sorting on the path left after removing edge `(n-1, 0)`.
pub fn path_fallback(config: &Configuration) -> Schedule {
    odd_even_sort(config.tokens())
}

fn shorter(alternating: Option<Schedule>, fallback: Schedule) -> Schedule {
    match alternating {
        Some(s) if s.len() <= fallback.len() => s,
        _ => fallback,
    }
}

fn solve_config(config: &Configuration) -> Schedule {
    let n = config.len();
    let alternating = if n.is_multiple_of(2) {
        reasonable_alternation(config, &even_classes(n), &[0, 1])
    } else {
        reasonable_alternation(config, &odd_classes(n), &[0, 2, 1, 2])
    };
    shorter(alternating, path_fallback(config))
}

/// Even-cycle solver: the reasonable alternation or the path fallback,
/// whichever is shorter.
pub fn even_cycle_solve(instance: &Instance) -> Result<Schedule, SolveError> {
    let alternating = cycle_odd_even(instance)?;
    Ok(shorter(alternating, path_fallback(&instance.initial)))
}

/// Odd-cycle solver: the period-four reasonable alternation or the path
/// fallback, whichever is shorter.
pub fn odd_cycle_solve(instance: &Instance) -> Result<Schedule, SolveError> {
    let alternating = odd_cycle_reasonable(instance)?;
    Ok(shorter(alternating, path_fallback(&instance.initial)))
}

/// Dispatches on the parity of the cycle.
pub fn cycle_solve(instance: &Instance) -> Result<Schedule, SolveError> {
    require_cycle(instance, "cycle")?;
    Ok(solve_config(&instance.initial))
}

/// Routes a cycle instance to an arbitrary `target` placement.
pub fn cycle_solve_toward(
    instance: &Instance,
    target: &Configuration,
) -> Result<Schedule, SolveError> {
    require_cycle(instance, "cycle")?;
    Ok(solve_config(&instance.initial.relative_to(target)?))
}

/// Clockwise distance each token still has to travel: `(t - p) mod n`.
fn clockwise_shifts(config: &Configuration) -> Vec<usize> {
    let n = config.len();
    (0..n).map(|t| (t + n - config.position_of(t)) % n).collect()
}

/// Lower bound from conservation of winding.
///
/// A swap moves one token a step clockwise and the other a step back, so
/// net displacements sum to zero. Token `t` ends with displacement
/// `s_t` or `s_t - n` (anything else has magnitude at least `n`), exactly
/// `sum(s_t) / n` tokens must take the negative option, and the best choice
/// gives it to the tokens with the largest `s_t`.
pub fn winding_lower_bound(instance: &Instance) -> Result<usize, SolveError> {
    let n = require_cycle(instance, "winding bound")?;
    let mut shifts = clockwise_shifts(&instance.initial);
    let backward = shifts.iter().sum::<usize>() / n;
    shifts.sort_unstable_by(|a, b| b.cmp(a));
    let back = shifts[..backward].iter().map(|&s| n - s).max().unwrap_or(0);
    let fwd = shifts[backward..].iter().copied().max().unwrap_or(0);
    Ok(back.max(fwd))
}
