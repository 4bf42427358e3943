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

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ptswap::bench::{
    complete_graph_rotation, complete_graph_rotation_schedule, generate, random_configuration,
    random_labeling, rows_to_csv, stretch_experiment, Family, FamilyKind, StretchSpec,
};
use ptswap::colored::{
    bottleneck_d_star, colored_grid_solve, colored_line_solve, colored_solve, colored_star_solve,
    incomplete_cycle_solve,
};
use ptswap::cycle::cycle_solve;
use ptswap::grid::grid_three_phase_solve;
use ptswap::line::odd_even_solve;
use ptswap::oracle::OracleLimits;
use ptswap::star::star_solve;
use ptswap::{
    apply_matching, normalize, solve, verify, Algorithm, Configuration, Graph, Instance, Labeling,
    Schedule, Topology,
};

fn graph_for(kind: u8, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match kind % 4 {
        0 => Graph::line(rng.gen_range(2..16)).unwrap(),
        1 => Graph::cycle(rng.gen_range(3..16)).unwrap(),
        2 => {
            let h = rng.gen_range(3..6);
            let lengths: Vec<usize> = (0..h).map(|_| rng.gen_range(1..5)).collect();
            Graph::star(&lengths).unwrap()
        }
        _ => Graph::grid(rng.gen_range(1..5), rng.gen_range(2..6)).unwrap(),
    }
}

/// Every swap of `s` exchanges tokens of different colors.
fn no_same_color_swaps(inst: &Instance, s: &Schedule) -> bool {
    let lab = inst.labeling.as_ref().unwrap();
    let mut c = inst.initial.clone();
    for m in s.steps() {
        if m.swaps().iter().any(|&(u, v)| {
            lab.color_of_token(c.token_at(u)) == lab.color_of_token(c.token_at(v))
        }) {
            return false;
        }
        c = apply_matching(&inst.graph, &c, m).unwrap();
    }
    true
}

/// A random labeling with at most `colors` classes; cycles get an
/// incomplete one (a blank class plus unique tokens) since only those have
/// a colored cycle solver.
fn labeling_for(g: &Graph, colors: u32, seed: u64) -> Labeling {
    let n = g.vertex_count();
    match g.topology() {
        Topology::Cycle { .. } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            Labeling::new((0..n).map(|t| if rng.gen_bool(0.4) { t as u32 + 1 } else { 0 }).collect())
        }
        _ => random_labeling(n, colors, seed),
    }
}

fn without_empty_steps(s: &Schedule) -> usize {
    s.steps().iter().filter(|m| !m.is_empty()).count()
}

/// Smallest bottleneck over every color-respecting assignment, by brute
/// force over permutations.
fn brute_d_star(g: &Graph, lab: &Labeling, c: &Configuration) -> usize {
    fn rec(
        g: &Graph,
        lab: &Labeling,
        c: &Configuration,
        v: usize,
        used: &mut Vec<bool>,
        worst: usize,
        best: &mut usize,
    ) {
        if worst >= *best {
            return;
        }
        let n = c.len();
        if v == n {
            *best = worst;
            return;
        }
        let color = lab.color_of_token(c.token_at(v));
        for w in 0..n {
            if !used[w] && lab.color_of_vertex(w) == color {
                used[w] = true;
                rec(g, lab, c, v + 1, used, worst.max(g.distance(v, w)), best);
                used[w] = false;
            }
        }
    }
    let mut best = usize::MAX;
    rec(g, lab, c, 0, &mut vec![false; c.len()], 0, &mut best);
    best
}

proptest! {
    #[test]
    fn colored_outputs_never_swap_equal_colors(kind in 0u8..4, colors in 1u32..4, seed in any::<u64>()) {
        let g = graph_for(kind, seed);
        let n = g.vertex_count();
        let inst = Instance::with_labeling(
            g.clone(),
            random_configuration(n, seed),
            labeling_for(&g, colors, seed ^ 3),
        ).unwrap();
        let (_, p) = colored_solve(&inst).unwrap();
        prop_assert!(verify(&inst, &p.schedule).valid);
        prop_assert!(no_same_color_swaps(&inst, &p.schedule));
        prop_assert_eq!(p.phases.iter().map(|(_, l)| l).sum::<usize>(), p.schedule.len());
        prop_assert!(normalize(&p.schedule).len() <= p.schedule.len());
    }

    #[test]
    fn distinct_colors_match_the_plain_solvers(kind in 0u8..4, seed in any::<u64>()) {
        let g = graph_for(kind, seed);
        let n = g.vertex_count();
        let plain = Instance::new(g.clone(), random_configuration(n, seed)).unwrap();
        let inst = Instance::with_labeling(g, plain.initial.clone(), Labeling::distinct(n)).unwrap();
        let (colored, uncolored) = match kind % 4 {
            0 => (colored_line_solve(&inst).unwrap(), odd_even_solve(&plain).unwrap()),
            1 => {
                // All-unique incomplete instance: no blanks, so the only
                // candidate is the plain cycle route.
                (incomplete_cycle_solve(&inst).unwrap(), cycle_solve(&plain).unwrap())
            }
            2 => (colored_star_solve(&inst).unwrap().schedule, star_solve(&plain, None).unwrap().schedule),
            _ => (colored_grid_solve(&inst).unwrap().schedule, grid_three_phase_solve(&plain, None).unwrap().schedule),
        };
        prop_assert_eq!(colored.len(), without_empty_steps(&uncolored));
    }

    #[test]
    fn bottleneck_matches_brute_force(kind in 0u8..4, colors in 1u32..4, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = match kind % 4 {
            0 => Graph::line(rng.gen_range(2..8)).unwrap(),
            1 => Graph::cycle(rng.gen_range(3..8)).unwrap(),
            2 => Graph::star(&[1, 2, rng.gen_range(1..4)]).unwrap(),
            _ => Graph::grid(2, rng.gen_range(2..4)).unwrap(),
        };
        let n = g.vertex_count();
        let lab = random_labeling(n, colors, seed);
        let inst = Instance::with_labeling(g.clone(), random_configuration(n, seed ^ 5), lab.clone()).unwrap();
        let (d, target) = bottleneck_d_star(&inst).unwrap();
        prop_assert_eq!(d, brute_d_star(&g, &lab, &inst.initial));
        for t in 0..n {
            prop_assert_eq!(lab.color_of_vertex(target.position_of(t)), lab.color_of_token(t));
            prop_assert!(g.distance(inst.initial.position_of(t), target.position_of(t)) <= d);
        }
    }

    #[test]
    fn refining_colors_never_lowers_the_bottleneck(kind in 0u8..4, seed in any::<u64>()) {
        let g = graph_for(kind, seed);
        let n = g.vertex_count();
        let c = random_configuration(n, seed);
        let coarse = random_labeling(n, 2, seed);
        // Split color 0 by token parity.
        let fine = Labeling::new(
            (0..n).map(|t| if coarse.color_of_token(t) == 0 { 2 * (t as u32 % 2) } else { 1 }).collect(),
        );
        let d = |lab: Labeling| bottleneck_d_star(&Instance::with_labeling(g.clone(), c.clone(), lab).unwrap()).unwrap().0;
        prop_assert!(d(coarse) <= d(fine));
    }

    #[test]
    fn solve_auto_always_verifies(kind in 0u8..4, labeled in any::<bool>(), seed in any::<u64>()) {
        let g = graph_for(kind, seed);
        let n = g.vertex_count();
        let c = random_configuration(n, seed);
        let inst = if labeled {
            let lab = labeling_for(&g, 3, seed);
            Instance::with_labeling(g, c, lab).unwrap()
        } else {
            Instance::new(g, c).unwrap()
        };
        let r = solve(&inst, Algorithm::Auto, &OracleLimits::default()).unwrap();
        prop_assert!(verify(&inst, &r.schedule).valid);
        prop_assert_eq!(r.length, r.schedule.len());
        prop_assert!(r.d_max <= r.length);
    }
}

#[test]
fn generators_are_pure() {
    for seed in 0..20 {
        assert_eq!(random_configuration(12, seed), random_configuration(12, seed));
        assert_eq!(random_labeling(12, 3, seed), random_labeling(12, 3, seed));
        let f = Family::GridRandom { rows: 3, cols: 4, seed };
        assert_eq!(generate(&f).unwrap().initial, generate(&f).unwrap().initial);
    }
    let spec = StretchSpec {
        family: FamilyKind::GridRandom { rows: 2 },
        sizes: vec![2, 3],
        seeds: vec![1, 2, 3],
        algorithm: Algorithm::Auto,
        oracle: true,
        limits: OracleLimits::default(),
    };
    let a = rows_to_csv(&stretch_experiment(&spec));
    assert_eq!(a, rows_to_csv(&stretch_experiment(&spec)));
    assert_eq!(a.lines().count(), 7);
}

#[test]
fn stretch_rows_are_ordered_by_bounds() {
    for family in [FamilyKind::CycleRotation, FamilyKind::LineShift, FamilyKind::StarCenter, FamilyKind::GridRandom { rows: 2 }] {
        let spec = StretchSpec {
            family,
            sizes: vec![2, 3, 4],
            seeds: vec![0, 1],
            algorithm: Algorithm::Auto,
            oracle: true,
            limits: OracleLimits::default(),
        };
        for row in stretch_experiment(&spec) {
            if row.error.is_some() {
                // Two-vertex cycles do not exist.
                assert_eq!((family, row.n), (FamilyKind::CycleRotation, 2));
                continue;
            }
            let (len, opt) = (row.length.unwrap(), row.opt.unwrap());
            assert!(len >= opt && opt >= row.d_max, "{row:?}");
        }
    }
}

#[test]
fn complete_graph_rotation_schedules_verify() {
    for r in 2..=6 {
        let inst = complete_graph_rotation(r).unwrap();
        let s = complete_graph_rotation_schedule(r).unwrap();
        assert_eq!(s.len(), 2);
        assert!(verify(&inst, &s).valid, "r = {r}");
    }
}
