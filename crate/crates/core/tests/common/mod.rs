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

//! Enumeration helpers shared by the integration tests.

#![allow(dead_code)]

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use ptswap::{normalize, verify, Configuration, Instance, Labeling, Schedule};

/// All ordered tuples of `parts` positive integers summing to `total`.
pub fn compositions(parts: usize, total: usize) -> Vec<Vec<usize>> {
    fn rec(parts: usize, total: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if parts == 0 {
            if total == 0 {
                out.push(prefix.clone());
            }
            return;
        }
        for first in 1..=total.saturating_sub(parts - 1) {
            prefix.push(first);
            rec(parts - 1, total - first, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(parts, total, &mut Vec::new(), &mut out);
    out
}

/// Color vectors of length `n` using colors `0..k` for some `k <= max`,
/// each color first appearing after all smaller ones (one vector per set
/// partition).
pub fn canonical_colorings(n: usize, max_colors: u32) -> Vec<Vec<u32>> {
    fn rec(n: usize, max: u32, cur: &mut Vec<u32>, used: u32, out: &mut Vec<Vec<u32>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for c in 0..=used.min(max - 1) {
            cur.push(c);
            rec(n, max, cur, used.max(c + 1), out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        rec(n, max_colors, &mut Vec::new(), 0, &mut out);
    }
    out
}

/// A placement whose per-vertex token colors read `string`: tokens of each
/// color are used in increasing order.
pub fn config_for_colors(labeling: &Labeling, string: &[usize]) -> Configuration {
    let n = string.len();
    let mut used = vec![false; n];
    let tokens = string
        .iter()
        .map(|&c| {
            let t = (0..n)
                .find(|&t| !used[t] && labeling.color_of_token(t) as usize == c)
                .expect("color counts match");
            used[t] = true;
            t
        })
        .collect();
    Configuration::from_tokens(tokens).unwrap()
}

/// Running tally of the universal checks: every schedule verifies, its
/// normal form is no longer and still verifies, and it uses at most `3n`
/// steps.
#[derive(Default)]
pub struct Universality {
    pub checked: AtomicUsize,
    pub failures: Mutex<Vec<String>>,
}

impl Universality {
    pub fn check(&self, label: &str, inst: &Instance, s: &Schedule) {
        self.checked.fetch_add(1, Ordering::Relaxed);
        let n = inst.vertex_count();
        let mut problems = Vec::new();
        let report = verify(inst, s);
        if !report.valid {
            problems.push(format!("does not verify: {:?}", report.violations));
        }
        let norm = normalize(s);
        if norm.len() > s.len() {
            problems.push("normal form is longer".to_string());
        }
        if !verify(inst, &norm).valid {
            problems.push("normal form does not verify".to_string());
        }
        if s.len() > 3 * n {
            problems.push(format!("length {} exceeds 3n = {}", s.len(), 3 * n));
        }
        if !problems.is_empty() {
            let mut f = self.failures.lock().unwrap();
            if f.len() < 20 {
                f.push(format!("{} on {:?}: {}", label, inst.initial.tokens(), problems.join("; ")));
            }
        }
    }

    pub fn count(&self) -> usize {
        self.checked.load(Ordering::Relaxed)
    }

    pub fn failure_list(&self) -> Vec<String> {
        self.failures.lock().unwrap().clone()
    }
}

/// Collects bound violations from parallel sweeps.
#[derive(Default)]
pub struct Violations {
    pub list: Mutex<Vec<String>>,
    pub total: AtomicUsize,
}

impl Violations {
    pub fn push(&self, msg: String) {
        self.total.fetch_add(1, Ordering::Relaxed);
        let mut l = self.list.lock().unwrap();
        if l.len() < 10 {
            l.push(msg);
        }
    }

    pub fn count(&self) -> usize {
        self.total.load(Ordering::Relaxed)
    }

    pub fn summary(&self) -> String {
        self.list.lock().unwrap().join(" | ")
    }
}
