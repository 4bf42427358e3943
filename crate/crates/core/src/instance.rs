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

//! Instances, verification, lower bounds and solver reports.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::config::{Configuration, Labeling};
use crate::error::ModelError;
use crate::graph::Graph;
use crate::schedule::Schedule;

/// A graph, a starting placement and an optional color labeling.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub graph: Graph,
    pub initial: Configuration,
    pub labeling: Option<Labeling>,
}

impl Instance {
    pub fn new(graph: Graph, initial: Configuration) -> Result<Self, ModelError> {
        if initial.len() != graph.vertex_count() {
            return Err(ModelError::SizeMismatch {
                expected: graph.vertex_count(),
                found: initial.len(),
            });
        }
        Ok(Instance {
            graph,
            initial,
            labeling: None,
        })
    }

    pub fn with_labeling(
        graph: Graph,
        initial: Configuration,
        labeling: Labeling,
    ) -> Result<Self, ModelError> {
        let mut inst = Instance::new(graph, initial)?;
        labeling.check_size(inst.graph.vertex_count())?;
        inst.labeling = Some(labeling);
        Ok(inst)
    }

    /// Convenience constructor from a raw token vector.
    pub fn from_tokens(graph: Graph, tokens: Vec<usize>) -> Result<Self, ModelError> {
        Instance::new(graph, Configuration::from_tokens(tokens)?)
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    /// True when the initial placement already satisfies the goal.
    pub fn is_solved(&self) -> bool {
        is_goal(&self.initial, self.labeling.as_ref())
    }
}

pub(crate) fn is_goal(config: &Configuration, labeling: Option<&Labeling>) -> bool {
    match labeling {
        Some(lab) => lab.is_color_correct(config),
        None => config.is_identity(),
    }
}

/// Outcome of checking a schedule against an instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub valid: bool,
    /// Placement after applying every well-formed step.
    pub final_config: Configuration,
    pub violations: Vec<String>,
}

/// Checks that every step is a matching of the instance graph and that the
/// schedule reaches the goal: the identity, or a color-correct placement
/// when the instance is labeled. Malformed steps are reported and skipped.
pub fn verify(instance: &Instance, s: &Schedule) -> VerificationReport {
    let mut config = instance.initial.clone();
    let mut violations = Vec::new();
    for (i, m) in s.steps().iter().enumerate() {
        match m.validate(&instance.graph) {
            Ok(()) => m.apply_in_place(&mut config),
            Err(e) => violations.push(format!("step {}: {}", i, e)),
        }
    }
    if !is_goal(&config, instance.labeling.as_ref()) {
        violations.push(match instance.labeling {
            Some(_) => "final placement is not color-correct".to_string(),
            None => "final placement is not the identity".to_string(),
        });
    }
    VerificationReport {
        valid: violations.is_empty(),
        final_config: config,
        violations,
    }
}

/// Largest distance between a token and its home vertex.
pub fn d_max_lower_bound(instance: &Instance) -> usize {
    (0..instance.vertex_count())
        .map(|t| instance.graph.distance(instance.initial.position_of(t), t))
        .max()
        .unwrap_or(0)
}

/// Exact nonnegative rational, kept in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Ratio {
    num: u64,
    den: u64,
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

impl Ratio {
    /// `None` when `den` is zero.
    pub fn new(num: u64, den: u64) -> Option<Self> {
        if den == 0 {
            return None;
        }
        let g = gcd(num, den).max(1);
        Some(Ratio {
            num: num / g,
            den: den / g,
        })
    }

    pub fn numer(&self) -> u64 {
        self.num
    }

    pub fn denom(&self) -> u64 {
        self.den
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl Ord for Ratio {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num as u128 * other.den as u128).cmp(&(other.num as u128 * self.den as u128))
    }
}

impl PartialOrd for Ratio {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl std::str::FromStr for Ratio {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (a, b) = s.split_once('/').unwrap_or((s, "1"));
        let num = a.trim().parse::<u64>().map_err(|e| e.to_string())?;
        let den = b.trim().parse::<u64>().map_err(|e| e.to_string())?;
        Ratio::new(num, den).ok_or_else(|| "zero denominator".to_string())
    }
}

/// A schedule split into named consecutive phases.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhasedSchedule {
    pub schedule: Schedule,
    /// `(name, step count)` in execution order; counts sum to the length.
    pub phases: Vec<(String, usize)>,
}

impl PhasedSchedule {
    pub fn single(name: &str, schedule: Schedule) -> Self {
        let len = schedule.len();
        PhasedSchedule {
            schedule,
            phases: vec![(name.to_string(), len)],
        }
    }

    pub fn phase_length(&self, name: &str) -> Option<usize> {
        self.phases.iter().find(|(n, _)| n == name).map(|&(_, k)| k)
    }
}

/// A schedule together with the bounds it is judged against.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveReport {
    pub algorithm: String,
    pub schedule: Schedule,
    pub length: usize,
    pub d_max: usize,
    pub extra_lower_bounds: BTreeMap<String, usize>,
    /// `length / d_max`, absent when `d_max` is zero.
    pub ratio_to_dmax: Option<Ratio>,
    pub phases: Vec<(String, usize)>,
}

impl SolveReport {
    pub fn new(algorithm: &str, schedule: Schedule, d_max: usize) -> Self {
        let length = schedule.len();
        SolveReport {
            algorithm: algorithm.to_string(),
            ratio_to_dmax: Ratio::new(length as u64, d_max as u64),
            schedule,
            length,
            d_max,
            extra_lower_bounds: BTreeMap::new(),
            phases: Vec::new(),
        }
    }

    pub fn with_phases(mut self, phases: Vec<(String, usize)>) -> Self {
        self.phases = phases;
        self
    }

    pub fn with_bound(mut self, name: &str, value: usize) -> Self {
        self.extra_lower_bounds.insert(name.to_string(), value);
        self
    }
}
