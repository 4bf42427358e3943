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

//! Augmenting-path bipartite matching on small dense graphs.

/// Perfect matching between `0..n` on both sides, where `adj(l, r)` says
/// whether left `l` may pair with right `r`. Returns `left -> right`.
pub(crate) fn perfect_matching<F: Fn(usize, usize) -> bool>(n: usize, adj: F) -> Option<Vec<usize>> {
    let mut right_owner: Vec<Option<usize>> = vec![None; n];
    for l in 0..n {
        let mut visited = vec![false; n];
        if !augment(l, n, &adj, &mut visited, &mut right_owner) {
            return None;
        }
    }
    let mut left = vec![0; n];
    for (r, owner) in right_owner.iter().enumerate() {
        left[owner.expect("perfect matching covers every right vertex")] = r;
    }
    Some(left)
}

fn augment<F: Fn(usize, usize) -> bool>(
    l: usize,
    n: usize,
    adj: &F,
    visited: &mut [bool],
    right_owner: &mut [Option<usize>],
) -> bool {
    for r in 0..n {
        if visited[r] || !adj(l, r) {
            continue;
        }
        visited[r] = true;
        let free = match right_owner[r] {
            None => true,
            Some(other) => augment(other, n, adj, visited, right_owner),
        };
        if free {
            right_owner[r] = Some(l);
            return true;
        }
    }
    false
}

/// Splits a `d`-regular bipartite multigraph, given as a square count
/// matrix, into `d` perfect matchings.
pub(crate) fn regular_decomposition(mut counts: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    let n = counts.len();
    let d: usize = counts.first().map(|row| row.iter().sum()).unwrap_or(0);
    let mut out = Vec::with_capacity(d);
    for _ in 0..d {
        let m = perfect_matching(n, |l, r| counts[l][r] > 0)
            .expect("regular bipartite multigraphs have perfect matchings");
        for (l, &r) in m.iter().enumerate() {
            counts[l][r] -= 1;
        }
        out.push(m);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_perfect_matching_when_hall_holds() {
        let m = perfect_matching(3, |l, r| l == r || (l + 1) % 3 == r).unwrap();
        let mut seen = m.clone();
        seen.sort();
        assert_eq!(seen, vec![0, 1, 2]);
        assert!(perfect_matching(2, |_, r| r == 0).is_none());
    }

    #[test]
    fn decomposes_regular_multigraph() {
        let counts = vec![vec![2, 1, 0], vec![0, 1, 2], vec![1, 1, 1]];
        let ms = regular_decomposition(counts.clone());
        assert_eq!(ms.len(), 3);
        let mut rebuilt = vec![vec![0; 3]; 3];
        for m in &ms {
            for (l, &r) in m.iter().enumerate() {
                rebuilt[l][r] += 1;
            }
        }
        assert_eq!(rebuilt, counts);
    }
}
