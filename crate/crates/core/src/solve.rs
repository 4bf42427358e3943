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

//! Solver selection and report assembly.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::colored::{bottleneck_d_star, colored_solve};
use crate::cycle::{cycle_solve, winding_lower_bound};
use crate::error::{OracleError, SolveError};
use crate::graph::Topology;
use crate::grid::{grid_path_solve, grid_solve, grid_three_phase_solve};
use crate::instance::{d_max_lower_bound, Instance, PhasedSchedule, SolveReport};
use crate::line::odd_even_solve;
use crate::oracle::{exact_opt, OracleLimits};
use crate::star::star_solve;

/// Solver names accepted by `solve`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Auto,
    Line,
    Cycle,
    Star,
    GridPath,
    GridThreePhase,
    ColoredAuto,
    Oracle,
}

impl Algorithm {
    pub const ALL: [Algorithm; 8] = [
        Algorithm::Auto,
        Algorithm::Line,
        Algorithm::Cycle,
        Algorithm::Star,
        Algorithm::GridPath,
        Algorithm::GridThreePhase,
        Algorithm::ColoredAuto,
        Algorithm::Oracle,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::Auto => "auto",
            Algorithm::Line => "line",
            Algorithm::Cycle => "cycle",
            Algorithm::Star => "star",
            Algorithm::GridPath => "grid-path",
            Algorithm::GridThreePhase => "grid-3phase",
            Algorithm::ColoredAuto => "colored-auto",
            Algorithm::Oracle => "oracle",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Algorithm::ALL
            .iter()
            .copied()
            .find(|a| a.name() == s)
            .ok_or_else(|| format!("unknown algorithm {:?}", s))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DispatchError {
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

/// Runs `algorithm` on `instance` and assembles the report.
///
/// `auto` picks by topology: odd-even on lines, the cycle solver on
/// cycles, the star solver on stars, the shorter of both grid solvers on
/// grids, and the exact solver on other graphs. Labeled instances go to
/// the colored solvers. The reported lower bound is the largest token
/// distance, or the bottleneck distance for labeled instances.
pub fn solve(
    instance: &Instance,
    algorithm: Algorithm,
    limits: &OracleLimits,
) -> Result<SolveReport, DispatchError> {
    let labeled = instance.labeling.is_some();
    let (name, phased) = match algorithm {
        Algorithm::Oracle => oracle_run(instance, limits)?,
        Algorithm::ColoredAuto => colored_solve(instance)?,
        Algorithm::Auto if labeled => match instance.graph.topology() {
            Topology::General => oracle_run(instance, limits)?,
            _ => colored_solve(instance)?,
        },
        _ if labeled => {
            return Err(SolveError::WrongTopology {
                algorithm: algorithm.name(),
                expected: "an unlabeled instance (use colored-auto)",
                found: instance.graph.topology().clone(),
            }
            .into())
        }
        Algorithm::Line => ("line".to_string(), PhasedSchedule::single("line", odd_even_solve(instance)?)),
        Algorithm::Cycle => ("cycle".to_string(), PhasedSchedule::single("cycle", cycle_solve(instance)?)),
        Algorithm::Star => ("star".to_string(), star_solve(instance, None)?),
        Algorithm::GridPath => (
            "grid-path".to_string(),
            PhasedSchedule::single("path", grid_path_solve(instance, None)?),
        ),
        Algorithm::GridThreePhase => ("grid-3phase".to_string(), grid_three_phase_solve(instance, None)?),
        Algorithm::Auto => match instance.graph.topology() {
            Topology::Line { .. } => ("line".to_string(), PhasedSchedule::single("line", odd_even_solve(instance)?)),
            Topology::Cycle { .. } => ("cycle".to_string(), PhasedSchedule::single("cycle", cycle_solve(instance)?)),
            Topology::Star { .. } => ("star".to_string(), star_solve(instance, None)?),
            Topology::Grid { .. } => grid_solve(instance, None)?,
            Topology::General => oracle_run(instance, limits)?,
        },
    };
    let lower = match &instance.labeling {
        Some(_) => bottleneck_d_star(instance)?.0,
        None => d_max_lower_bound(instance),
    };
    let mut report = SolveReport::new(&name, phased.schedule, lower).with_phases(phased.phases);
    if !labeled {
        if let Topology::Cycle { .. } = instance.graph.topology() {
            report = report.with_bound("winding", winding_lower_bound(instance)?);
        }
    }
    Ok(report)
}

fn oracle_run(instance: &Instance, limits: &OracleLimits) -> Result<(String, PhasedSchedule), OracleError> {
    let (_, witness) = exact_opt(instance, limits)?;
    Ok(("oracle".to_string(), PhasedSchedule::single("search", witness)))
}
