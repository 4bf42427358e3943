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

use thiserror::Error;

use crate::graph::Topology;

/// Errors raised while building or manipulating the data model.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("placement is not a bijection: {0}")]
    NotABijection(String),
    #[error("configuration has {found} vertices but the graph has {expected}")]
    SizeMismatch { expected: usize, found: usize },
    #[error("invalid matching: {0}")]
    InvalidMatching(String),
    #[error("invalid labeling: {0}")]
    InvalidLabeling(String),
}

/// Errors raised by the routing algorithms.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("{algorithm} needs {expected}, got {found}")]
    WrongTopology {
        algorithm: &'static str,
        expected: &'static str,
        found: Topology,
    },
    #[error("instance has no color labeling")]
    MissingLabeling,
    #[error("labeling does not have the incomplete shape: {0}")]
    NotIncomplete(String),
    #[error("unknown token {0}")]
    UnknownToken(usize),
    #[error("no matching found for the edge {0:?}")]
    NotAnEdge((usize, usize)),
    #[error("edge {0:?} is not an off-path ladder edge")]
    NotOffPath((usize, usize)),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Errors raised by the exact solver.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("oracle capacity exceeded: {0}")]
    Capacity(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}
