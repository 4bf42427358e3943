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

//! Odd-even transposition sorting on paths and the token potential used to
//! bound it.

use crate::config::Configuration;
use crate::error::SolveError;
use crate::graph::Topology;
use crate::instance::Instance;
use crate::schedule::{Matching, Schedule};

fn require_line(instance: &Instance, algorithm: &'static str) -> Result<(), SolveError> {
    match instance.graph.topology() {
        Topology::Line { .. } => Ok(()),
        other => Err(SolveError::WrongTopology {
            algorithm,
            expected: "a line graph",
            found: other.clone(),
        }),
    }
}

/// Odd-even transposition sort of `keys` laid out on the path `0..len`.
///
/// Step `k` (counting from 1) compares the pairs `(0,1), (2,3), ...` when
/// `k` is odd and `(1,2), (3,4), ...` when even, swapping a pair whose left
/// key is larger. Equal keys never swap. Steps continue until the keys are
/// sorted, so an empty first step is possible.
pub fn odd_even_sort(keys: &[usize]) -> Schedule {
    let mut keys = keys.to_vec();
    let mut steps = Vec::new();
    let sorted = |k: &[usize]| k.windows(2).all(|w| w[0] <= w[1]);
    let mut parity = 0;
    while !sorted(&keys) {
        let mut swaps = Vec::new();
        let mut i = parity;
        while i + 1 < keys.len() {
            if keys[i] > keys[i + 1] {
                keys.swap(i, i + 1);
                swaps.push((i, i + 1));
            }
            i += 2;
        }
        steps.push(Matching::from_disjoint(swaps));
        parity ^= 1;
    }
    Schedule::new(steps)
}

/// Sorts a path holding two classes of tokens so that every `low` token
/// ends up left of every high one.
///
/// Each step swaps every adjacent (high, low) pair; such pairs never share
/// a vertex. This greedy sweep is optimal for two-class sorting, unlike
/// odd-even with a two-valued key, which can waste a step when an
/// inversion sits on the wrong parity.
pub fn two_class_sort(high: &[bool]) -> Schedule {
    let mut high = high.to_vec();
    let mut steps = Vec::new();
    loop {
        let swaps: Vec<(usize, usize)> = (0..high.len().saturating_sub(1))
            .filter(|&i| high[i] && !high[i + 1])
            .map(|i| (i, i + 1))
            .collect();
        if swaps.is_empty() {
            break;
        }
        for &(i, j) in &swaps {
            high.swap(i, j);
        }
        steps.push(Matching::from_disjoint(swaps));
    }
    Schedule::new(steps)
}

/// Routes a line instance to the identity with odd-even sorting.
pub fn odd_even_solve(instance: &Instance) -> Result<Schedule, SolveError> {
    odd_even_by_key(instance, |t| t)
}

/// Routes a line instance to `target`.
pub fn odd_even_solve_toward(
    instance: &Instance,
    target: &Configuration,
) -> Result<Schedule, SolveError> {
    if target.len() != instance.vertex_count() {
        return Err(crate::error::ModelError::SizeMismatch {
            expected: instance.vertex_count(),
            found: target.len(),
        }
        .into());
    }
    odd_even_by_key(instance, |t| target.position_of(t))
}

/// Odd-even sorting where each token is compared by `key(token)`.
pub fn odd_even_by_key<F: Fn(usize) -> usize>(
    instance: &Instance,
    key: F,
) -> Result<Schedule, SolveError> {
    require_line(instance, "odd-even")?;
    let keys: Vec<usize> = instance.initial.tokens().iter().map(|&t| key(t)).collect();
    Ok(odd_even_sort(&keys))
}

/// The two terms of a token's potential.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PotentialBreakdown {
    pub prefix_term: usize,
    pub suffix_term: usize,
    pub total: usize,
}

/// Scores of every admissible prefix end `j` for the token at `i`.
///
/// A prefix `0..=j` (with `j < i`) is admissible when it holds a token
/// larger than `t`; its score counts those larger tokens plus the smaller
/// tokens strictly between `j` and `i`.
fn prefix_scores(tokens: &[usize], i: usize) -> Vec<(usize, usize)> {
    let t = tokens[i];
    let mut out = Vec::new();
    let mut larger_in_prefix = 0;
    let smaller_before: usize = tokens[..i].iter().filter(|&&x| x < t).count();
    let mut smaller_in_prefix = 0;
    for (j, &x) in tokens[..i].iter().enumerate() {
        if x > t {
            larger_in_prefix += 1;
        } else {
            smaller_in_prefix += 1;
        }
        if larger_in_prefix > 0 {
            out.push((j, larger_in_prefix + smaller_before - smaller_in_prefix));
        }
    }
    out
}

/// Mirror image of `prefix_scores`: suffixes `j..n` with `j > i` holding a
/// smaller token.
fn suffix_scores(tokens: &[usize], i: usize) -> Vec<(usize, usize)> {
    let t = tokens[i];
    let n = tokens.len();
    let mut out = Vec::new();
    let mut smaller_in_suffix = 0;
    let larger_after: usize = tokens[i + 1..].iter().filter(|&&x| x > t).count();
    let mut larger_in_suffix = 0;
    for j in (i + 1..n).rev() {
        if tokens[j] < t {
            smaller_in_suffix += 1;
        } else {
            larger_in_suffix += 1;
        }
        if smaller_in_suffix > 0 {
            out.push((j, smaller_in_suffix + larger_after - larger_in_suffix));
        }
    }
    out.reverse();
    out
}

fn maximizers(scores: &[(usize, usize)]) -> Vec<usize> {
    let best = scores.iter().map(|&(_, s)| s).max();
    scores
        .iter()
        .filter(|&&(_, s)| Some(s) == best)
        .map(|&(j, _)| j)
        .collect()
}

fn locate(config: &Configuration, token: usize) -> Result<usize, SolveError> {
    if token >= config.len() {
        return Err(SolveError::UnknownToken(token));
    }
    Ok(config.position_of(token))
}

/// Potential of `token` in a line placement: an estimate of how many more
/// odd-even steps are needed before no token wants to cross it. Each term
/// is zero when it has no admissible prefix (suffix).
pub fn potential(config: &Configuration, token: usize) -> Result<PotentialBreakdown, SolveError> {
    let i = locate(config, token)?;
    let tokens = config.tokens();
    let best = |s: Vec<(usize, usize)>| s.into_iter().map(|(_, v)| v).max().unwrap_or(0);
    let prefix_term = best(prefix_scores(tokens, i));
    let suffix_term = best(suffix_scores(tokens, i));
    Ok(PotentialBreakdown {
        prefix_term,
        suffix_term,
        total: prefix_term + suffix_term,
    })
}

/// Every prefix end `j` (0-indexed, inclusive) attaining the prefix term.
pub fn prefix_maximizers(config: &Configuration, token: usize) -> Result<Vec<usize>, SolveError> {
    let i = locate(config, token)?;
    Ok(maximizers(&prefix_scores(config.tokens(), i)))
}

/// Every suffix start `j` (0-indexed) attaining the suffix term.
pub fn suffix_maximizers(config: &Configuration, token: usize) -> Result<Vec<usize>, SolveError> {
    let i = locate(config, token)?;
    Ok(maximizers(&suffix_scores(config.tokens(), i)))
}
