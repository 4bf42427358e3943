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

mod common;

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ptswap::bench::random_configuration;
use ptswap::oracle::{exact_opt, DistanceTable, OracleLimits};
use ptswap::{
    apply_matching, apply_schedule, d_max_lower_bound, normalize, verify, Configuration, Edge,
    Graph, Instance, Matching, Schedule,
};

fn shape(kind: u8, n: usize) -> Graph {
    match kind % 5 {
        0 => Graph::line(n).unwrap(),
        1 => Graph::cycle(n.max(3)).unwrap(),
        2 => Graph::star(&vec![1; n.max(3) - 1]).unwrap(),
        3 => Graph::grid(2, n.div_ceil(2).max(2)).unwrap(),
        _ => random_connected(n, n as u64),
    }
}

/// A random spanning tree plus a few extra edges.
fn random_connected(n: usize, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges: Vec<Edge> = (1..n).map(|v| (rng.gen_range(0..v), v)).collect();
    for _ in 0..n / 2 {
        let (u, v) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if u != v && !edges.contains(&(u.min(v), u.max(v))) {
            edges.push((u.min(v), u.max(v)));
        }
    }
    Graph::general(n, &edges).unwrap()
}

fn random_matching(g: &Graph, rng: &mut ChaCha8Rng) -> Matching {
    let mut edges: Vec<Edge> = g.edges().collect();
    edges.shuffle(rng);
    let mut used = vec![false; g.vertex_count()];
    let mut swaps = Vec::new();
    for (u, v) in edges {
        if !used[u] && !used[v] && rng.gen_bool(0.6) {
            used[u] = true;
            used[v] = true;
            swaps.push((u, v));
        }
    }
    Matching::new(swaps).unwrap()
}

fn random_schedule(g: &Graph, len: usize, seed: u64) -> Schedule {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut steps = Vec::new();
    for _ in 0..len {
        if rng.gen_bool(0.3) && !steps.is_empty() {
            // Repeat the previous step, so normalization has work to do.
            steps.push(steps.last().cloned().unwrap());
        } else {
            steps.push(random_matching(g, &mut rng));
        }
    }
    Schedule::new(steps)
}

proptest! {
    #[test]
    fn matchings_are_involutions(kind in 0u8..5, n in 3usize..12, seed in any::<u64>()) {
        let g = shape(kind, n);
        let c = random_configuration(g.vertex_count(), seed);
        let m = random_matching(&g, &mut ChaCha8Rng::seed_from_u64(seed));
        let once = apply_matching(&g, &c, &m).unwrap();
        prop_assert_eq!(apply_matching(&g, &once, &m).unwrap(), c);
    }

    #[test]
    fn verify_reports_the_applied_configuration(
        kind in 0u8..5, n in 3usize..12, len in 0usize..10, seed in any::<u64>()
    ) {
        let g = shape(kind, n);
        let c = random_configuration(g.vertex_count(), seed);
        let s = random_schedule(&g, len, seed);
        let inst = Instance::new(g.clone(), c.clone()).unwrap();
        let report = verify(&inst, &s);
        prop_assert_eq!(report.final_config, apply_schedule(&g, &c, &s).unwrap());
        prop_assert_eq!(report.valid, apply_schedule(&g, &c, &s).unwrap().is_identity());
    }

    #[test]
    fn normalize_keeps_the_outcome(
        kind in 0u8..5, n in 3usize..12, len in 0usize..12, seed in any::<u64>()
    ) {
        let g = shape(kind, n);
        let c = random_configuration(g.vertex_count(), seed);
        let s = random_schedule(&g, len, seed);
        let norm = normalize(&s);
        prop_assert!(norm.len() <= s.len());
        prop_assert!(norm.steps().iter().all(|m| !m.is_empty()));
        prop_assert_eq!(apply_schedule(&g, &c, &norm).unwrap(), apply_schedule(&g, &c, &s).unwrap());
        prop_assert_eq!(normalize(&norm), norm);
    }

    #[test]
    fn reversed_schedule_undoes(kind in 0u8..5, n in 3usize..10, len in 0usize..8, seed in any::<u64>()) {
        let g = shape(kind, n);
        let c = random_configuration(g.vertex_count(), seed);
        let s = random_schedule(&g, len, seed);
        let there = apply_schedule(&g, &c, &s).unwrap();
        prop_assert_eq!(apply_schedule(&g, &there, &s.reversed()).unwrap(), c);
    }

    #[test]
    fn oracle_on_random_general_graphs(n in 2usize..8, seed in any::<u64>()) {
        let g = random_connected(n, seed);
        let inst = Instance::new(g, random_configuration(n, seed ^ 7)).unwrap();
        let (opt, witness) = exact_opt(&inst, &OracleLimits::default()).unwrap();
        prop_assert_eq!(witness.len(), opt);
        prop_assert!(verify(&inst, &witness).valid);
        prop_assert!(d_max_lower_bound(&inst) <= opt);
        prop_assert!(opt <= 3 * n);
        let norm = normalize(&witness);
        prop_assert!(norm.len() <= witness.len());
        prop_assert!(verify(&inst, &norm).valid);
    }
}

fn desk_graphs() -> Vec<(String, Graph)> {
    let mut out = Vec::new();
    for n in 2..=8 {
        out.push((format!("P{n}"), Graph::line(n).unwrap()));
    }
    for n in 3..=8 {
        out.push((format!("C{n}"), Graph::cycle(n).unwrap()));
    }
    for h in 3..=4 {
        for total in h..=7 {
            for shape in common::compositions(h, total) {
                out.push((format!("star{shape:?}"), Graph::star(&shape).unwrap()));
            }
        }
    }
    for (r, c) in [(2, 2), (2, 3), (2, 4)] {
        out.push((format!("{r}x{c}"), Graph::grid(r, c).unwrap()));
    }
    out
}

#[test]
fn d_max_is_a_lower_bound_on_every_desk_instance() {
    use rayon::prelude::*;
    desk_graphs().par_iter().for_each(|(name, g)| {
        let table = DistanceTable::build(g, &OracleLimits::default()).unwrap();
        for (tokens, opt) in table.entries() {
            let inst = Instance::from_tokens(g.clone(), tokens.clone()).unwrap();
            let d = d_max_lower_bound(&inst);
            assert!(d <= opt, "{name} {tokens:?}: d_max {d} > OPT {opt}");
            assert!(opt <= 3 * g.vertex_count(), "{name}: OPT {opt} over 3n");
        }
    });
}

#[test]
fn one_matching_moves_the_depth_by_at_most_one() {
    for g in [Graph::line(6).unwrap(), Graph::cycle(6).unwrap(), Graph::grid(2, 3).unwrap()] {
        let table = DistanceTable::build(&g, &OracleLimits::default()).unwrap();
        for (tokens, d) in table.entries() {
            let c = Configuration::from_tokens(tokens).unwrap();
            for m in table.matchings() {
                let e = table.distance(&apply_matching(&g, &c, m).unwrap()).unwrap();
                assert!(e + 1 >= d && e <= d + 1);
            }
        }
    }
}

#[test]
fn table_and_search_agree() {
    let g = Graph::grid(2, 3).unwrap();
    let table = DistanceTable::build(&g, &OracleLimits::default()).unwrap();
    for seed in 0..50 {
        let inst = Instance::new(g.clone(), random_configuration(6, seed)).unwrap();
        let (opt, _) = exact_opt(&inst, &OracleLimits::default()).unwrap();
        assert_eq!(table.distance(&inst.initial), Some(opt));
    }
}
