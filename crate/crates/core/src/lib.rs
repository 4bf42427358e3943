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

//! Parallel token swapping.
//!
//! Every vertex of a connected graph holds one token and token `t` must end
//! on vertex `t`. A step swaps the tokens across a matching, all pairs at
//! once; the goal is a short sequence of steps. This crate provides
//! approximation algorithms for lines, cycles, subdivided stars and grids,
//! colored variants, an exact breadth-first solver for small graphs, and
//! generators for the instance families that separate the optimum from the
//! distance lower bound.

pub mod bench;
mod bipartite;
pub mod colored;
pub mod config;
pub mod cycle;
pub mod error;
pub mod graph;
pub mod grid;
pub mod instance;
pub mod line;
pub mod oracle;
pub mod schedule;
pub mod solve;
pub mod star;

pub use config::{Configuration, Labeling};
pub use error::{ModelError, OracleError, SolveError};
pub use graph::{Edge, Graph, Topology};
pub use instance::{
    d_max_lower_bound, verify, Instance, PhasedSchedule, Ratio, SolveReport, VerificationReport,
};
pub use schedule::{apply_matching, apply_schedule, normalize, Matching, Schedule};
pub use solve::{solve, Algorithm, DispatchError};
