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

//! Token placements and color labelings.
//!
//! Tokens are named after the vertex they must reach: token `t` belongs on
//! vertex `t`, so the identity placement is the routing goal.

use std::collections::BTreeMap;

use crate::error::ModelError;

/// A bijection vertex -> token, stored together with its inverse.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Configuration {
    tokens: Vec<usize>,
    positions: Vec<usize>,
}

impl Configuration {
    pub fn identity(n: usize) -> Self {
        Configuration {
            tokens: (0..n).collect(),
            positions: (0..n).collect(),
        }
    }

    /// `tokens[v]` is the token sitting on vertex `v`.
    pub fn from_tokens(tokens: Vec<usize>) -> Result<Self, ModelError> {
        let n = tokens.len();
        let mut positions = vec![usize::MAX; n];
        for (v, &t) in tokens.iter().enumerate() {
            if t >= n {
                return Err(ModelError::NotABijection(format!(
                    "token {} on vertex {} is outside 0..{}",
                    t, v, n
                )));
            }
            if positions[t] != usize::MAX {
                return Err(ModelError::NotABijection(format!(
                    "token {} appears on vertices {} and {}",
                    t, positions[t], v
                )));
            }
            positions[t] = v;
        }
        Ok(Configuration { tokens, positions })
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Token on vertex `v`.
    #[inline]
    pub fn token_at(&self, v: usize) -> usize {
        self.tokens[v]
    }

    /// Vertex holding token `t`.
    #[inline]
    pub fn position_of(&self, t: usize) -> usize {
        self.positions[t]
    }

    pub fn tokens(&self) -> &[usize] {
        &self.tokens
    }

    pub fn is_identity(&self) -> bool {
        self.tokens.iter().enumerate().all(|(v, &t)| v == t)
    }

    /// Exchanges the tokens on `u` and `v`.
    #[inline]
    pub fn swap(&mut self, u: usize, v: usize) {
        self.tokens.swap(u, v);
        self.positions[self.tokens[u]] = u;
        self.positions[self.tokens[v]] = v;
    }

    /// Rewrites every token as the vertex it occupies in `target`.
    ///
    /// Routing `self` to `target` is the same problem as routing the result
    /// to the identity, so every solver accepts an explicit target through
    /// this relabeling.
    pub fn relative_to(&self, target: &Configuration) -> Result<Configuration, ModelError> {
        if target.len() != self.len() {
            return Err(ModelError::SizeMismatch {
                expected: self.len(),
                found: target.len(),
            });
        }
        let tokens = self.tokens.iter().map(|&t| target.position_of(t)).collect();
        Configuration::from_tokens(tokens)
    }
}

/// Assigns a color to every token. Vertex `v` wants a token of the color of
/// token `v`, so the color multiset of tokens always matches that of
/// vertices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Labeling {
    colors: Vec<u32>,
}

impl Labeling {
    pub fn new(colors: Vec<u32>) -> Self {
        Labeling { colors }
    }

    /// One color per token.
    pub fn distinct(n: usize) -> Self {
        Labeling {
            colors: (0..n as u32).collect(),
        }
    }

    pub fn uniform(n: usize) -> Self {
        Labeling { colors: vec![0; n] }
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    #[inline]
    pub fn color_of_token(&self, t: usize) -> u32 {
        self.colors[t]
    }

    /// Color a vertex demands in a finished configuration.
    #[inline]
    pub fn color_of_vertex(&self, v: usize) -> u32 {
        self.colors[v]
    }

    pub fn colors(&self) -> &[u32] {
        &self.colors
    }

    /// Number of tokens per color, ordered by color id.
    pub fn multiplicities(&self) -> BTreeMap<u32, usize> {
        let mut out = BTreeMap::new();
        for &c in &self.colors {
            *out.entry(c).or_insert(0) += 1;
        }
        out
    }

    pub fn check_size(&self, n: usize) -> Result<(), ModelError> {
        if self.colors.len() != n {
            return Err(ModelError::InvalidLabeling(format!(
                "labeling has {} entries for {} tokens",
                self.colors.len(),
                n
            )));
        }
        Ok(())
    }

    /// True when every vertex holds a token of the color it demands.
    pub fn is_color_correct(&self, config: &Configuration) -> bool {
        (0..config.len()).all(|v| self.colors[config.token_at(v)] == self.colors[v])
    }

    /// Per-vertex colors of the tokens currently placed.
    pub fn color_string(&self, config: &Configuration) -> Vec<u32> {
        config.tokens().iter().map(|&t| self.colors[t]).collect()
    }
}
