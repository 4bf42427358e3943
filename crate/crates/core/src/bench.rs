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

//! Instance generators and the stretch-factor experiment.
//!
//! The named families are the ones where the optimum is far from the
//! largest token distance: a one-step rotation of a cycle, a half shift of
//! a path, and a star whose leaves all hold each other's tokens.

use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::config::{Configuration, Labeling};
use crate::error::{ModelError, OracleError};
use crate::graph::Graph;
use crate::instance::{d_max_lower_bound, Instance, Ratio};
use crate::oracle::{exact_opt, OracleLimits};
use crate::schedule::{Matching, Schedule};
use crate::solve::{solve, Algorithm, DispatchError};

/// A parametrized instance family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Family {
    /// Every token one step clockwise of home on an `n`-cycle.
    CycleRotation { n: usize },
    /// Path on `2n` vertices holding the two halves swapped.
    LineShift { n: usize },
    /// Star with `n` single-vertex branches; the center token is home and
    /// the leaf tokens are shifted cyclically.
    StarCenter { n: usize },
    /// Uniform random placement on a `rows x cols` grid.
    GridRandom { rows: usize, cols: usize, seed: u64 },
    /// Uniform random placement on a given graph.
    Random { graph: Graph, seed: u64 },
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::CycleRotation { .. } => "cycle_rotation",
            Family::LineShift { .. } => "line_shift",
            Family::StarCenter { .. } => "star_center",
            Family::GridRandom { .. } => "grid_random",
            Family::Random { .. } => "random",
        }
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Seeded uniform permutation of `0..n`.
pub fn random_configuration(n: usize, seed: u64) -> Configuration {
    let mut tokens: Vec<usize> = (0..n).collect();
    tokens.shuffle(&mut rng(seed));
    Configuration::from_tokens(tokens).expect("shuffle preserves the permutation")
}

/// Seeded labeling with `colors` classes of near-equal size.
pub fn random_labeling(n: usize, colors: u32, seed: u64) -> Labeling {
    let colors = colors.max(1);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng(seed));
    let mut out = vec![0; n];
    for (i, &t) in order.iter().enumerate() {
        out[t] = i as u32 % colors;
    }
    Labeling::new(out)
}

/// Tokens of the one-step rotation: vertex `i` holds `i - 1`, vertex 0
/// holds `n - 1`.
pub fn rotation_tokens(n: usize) -> Vec<usize> {
    (0..n).map(|i| (i + n - 1) % n).collect()
}

/// Builds the instance of a family.
pub fn generate(family: &Family) -> Result<Instance, ModelError> {
    match family {
        Family::CycleRotation { n } => Instance::from_tokens(Graph::cycle(*n)?, rotation_tokens(*n)),
        Family::LineShift { n } => {
            if *n == 0 {
                return Err(ModelError::InvalidParameters("line_shift needs n >= 1".into()));
            }
            let tokens = (*n..2 * n).chain(0..*n).collect();
            Instance::from_tokens(Graph::line(2 * n)?, tokens)
        }
        Family::StarCenter { n } => {
            if *n < 2 {
                return Err(ModelError::InvalidParameters("star_center needs n >= 2".into()));
            }
            let tokens = (0..=*n).map(|v| if v == 0 { 0 } else { v % n + 1 }).collect();
            Instance::from_tokens(Graph::star(&vec![1; *n])?, tokens)
        }
        Family::GridRandom { rows, cols, seed } => {
            let g = Graph::grid(*rows, *cols)?;
            Instance::new(g, random_configuration(rows * cols, *seed))
        }
        Family::Random { graph, seed } => {
            Instance::new(graph.clone(), random_configuration(graph.vertex_count(), *seed))
        }
    }
}

/// The rotation instance on the complete graph with `2r` vertices.
pub fn complete_graph_rotation(r: usize) -> Result<Instance, ModelError> {
    if r < 2 {
        return Err(ModelError::InvalidParameters("complete rotation needs r >= 2".into()));
    }
    Instance::from_tokens(Graph::complete(2 * r)?, rotation_tokens(2 * r))
}

/// Two matchings routing the rotation on the complete graph with `2r`
/// vertices: two reflections compose to a rotation.
pub fn complete_graph_rotation_schedule(r: usize) -> Result<Schedule, ModelError> {
    if r < 2 {
        return Err(ModelError::InvalidParameters("complete rotation needs r >= 2".into()));
    }
    let n = 2 * r;
    // In 1-indexed names: {(i, 2r-i)} then {(i, 2r-1-i)} plus (2r-1, 2r).
    let m1 = (1..r).map(|i| (i - 1, n - i - 1));
    let m2 = (1..r).map(|i| (i - 1, n - 2 - i)).chain([(n - 2, n - 1)]);
    Ok(Schedule::new(vec![Matching::new(m1)?, Matching::new(m2)?]))
}

/// Which family a stretch experiment sweeps; the size parameter is the
/// family's `n` (columns for grids).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyKind {
    CycleRotation,
    LineShift,
    StarCenter,
    GridRandom { rows: usize },
}

impl FamilyKind {
    fn family(&self, n: usize, seed: u64) -> Family {
        match *self {
            FamilyKind::CycleRotation => Family::CycleRotation { n },
            FamilyKind::LineShift => Family::LineShift { n },
            FamilyKind::StarCenter => Family::StarCenter { n },
            FamilyKind::GridRandom { rows } => Family::GridRandom { rows, cols: n, seed },
        }
    }

    fn seeded(&self) -> bool {
        matches!(self, FamilyKind::GridRandom { .. })
    }

    fn h(&self, n: usize) -> Option<usize> {
        match *self {
            FamilyKind::StarCenter => Some(n),
            FamilyKind::GridRandom { rows } => Some(rows),
            _ => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct StretchSpec {
    pub family: FamilyKind,
    pub sizes: Vec<usize>,
    /// Used only by random families.
    pub seeds: Vec<u64>,
    pub algorithm: Algorithm,
    pub oracle: bool,
    pub limits: OracleLimits,
}

fn ratio_cell<S: Serializer>(r: &Option<Ratio>, s: S) -> Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.serialize_str(&r.to_string()),
        None => s.serialize_none(),
    }
}

/// One instance of a stretch experiment.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StretchRow {
    pub family: String,
    pub n: usize,
    pub h: Option<usize>,
    pub seed: Option<u64>,
    pub algorithm: String,
    pub length: Option<usize>,
    pub opt: Option<usize>,
    pub d_max: usize,
    #[serde(serialize_with = "ratio_cell")]
    pub len_over_opt: Option<Ratio>,
    #[serde(serialize_with = "ratio_cell")]
    pub opt_over_dmax: Option<Ratio>,
    /// Solver or oracle failure for this row, if any.
    pub error: Option<String>,
    /// Whether the failure was an oracle budget being exceeded.
    #[serde(skip)]
    pub capacity_exceeded: bool,
}

fn run_row(spec: &StretchSpec, n: usize, seed: Option<u64>) -> StretchRow {
    let family = spec.family.family(n, seed.unwrap_or(0));
    let mut row = StretchRow {
        family: family.name().to_string(),
        n,
        h: spec.family.h(n),
        seed,
        algorithm: spec.algorithm.name().to_string(),
        length: None,
        opt: None,
        d_max: 0,
        len_over_opt: None,
        opt_over_dmax: None,
        error: None,
        capacity_exceeded: false,
    };
    let inst = match generate(&family) {
        Ok(i) => i,
        Err(e) => {
            row.error = Some(e.to_string());
            return row;
        }
    };
    row.d_max = d_max_lower_bound(&inst);
    match solve(&inst, spec.algorithm, &spec.limits) {
        Ok(r) => {
            row.algorithm = r.algorithm;
            row.length = Some(r.length);
        }
        Err(e) => {
            row.capacity_exceeded = matches!(e, DispatchError::Oracle(OracleError::Capacity(_)));
            row.error = Some(e.to_string());
        }
    }
    if spec.oracle {
        match exact_opt(&inst, &spec.limits) {
            Ok((k, _)) => {
                row.opt = Some(k);
                row.opt_over_dmax = Ratio::new(k as u64, row.d_max as u64);
                row.len_over_opt = row.length.and_then(|l| Ratio::new(l as u64, k as u64));
            }
            Err(e) => {
                row.capacity_exceeded |= matches!(e, OracleError::Capacity(_));
                row.error.get_or_insert_with(String::new).push_str(&e.to_string());
            }
        }
    }
    row
}

/// Runs the experiment, one row per (size, seed), ordered by size then
/// seed. Failures are recorded in the row rather than aborting the run.
pub fn stretch_experiment(spec: &StretchSpec) -> Vec<StretchRow> {
    let seeds: Vec<Option<u64>> = if spec.family.seeded() {
        spec.seeds.iter().map(|&s| Some(s)).collect()
    } else {
        vec![None]
    };
    let jobs: Vec<(usize, Option<u64>)> = spec
        .sizes
        .iter()
        .flat_map(|&n| seeds.iter().map(move |&s| (n, s)))
        .collect();
    jobs.par_iter().map(|&(n, s)| run_row(spec, n, s)).collect()
}

pub const CSV_HEADER: &str = "family,n,h,seed,algorithm,length,opt,d_max,len_over_opt,opt_over_dmax";

/// CSV rendering with empty cells for missing values.
pub fn rows_to_csv(rows: &[StretchRow]) -> String {
    fn cell<T: ToString>(v: &Option<T>) -> String {
        v.as_ref().map(|x| x.to_string()).unwrap_or_default()
    }
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            r.family,
            r.n,
            cell(&r.h),
            cell(&r.seed),
            r.algorithm,
            cell(&r.length),
            cell(&r.opt),
            r.d_max,
            cell(&r.len_over_opt),
            cell(&r.opt_over_dmax)
        );
    }
    out
}
