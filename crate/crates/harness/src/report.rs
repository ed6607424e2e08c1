//! JSON reports. Rationals are written as lowest-terms `p/q` strings and
//! vertices are 1-indexed, as in the graph file format.

use std::collections::BTreeMap;

use bisect_core::io::write_graph;
use bisect_core::oracle::{verify_bisection, Verdict};
use bisect_core::rational::{parse_rational, to_pq};
use bisect_core::solution::Solution;
use bisect_core::{Bisection, WeightedMultigraph};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::HarnessError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolverReport {
    /// SHA-256 of the canonical text form of the input graph.
    pub input_digest: String,
    pub method: String,
    pub guaranteed_bound: String,
    pub achieved: String,
    pub side_x: Vec<usize>,
    pub flags: BTreeMap<String, String>,
    pub seed: u64,
    pub elapsed_ms: u64,
}

pub fn digest(g: &WeightedMultigraph) -> String {
    hex::encode(Sha256::digest(write_graph(g).as_bytes()))
}

impl SolverReport {
    pub fn new(g: &WeightedMultigraph, s: &Solution, seed: u64, elapsed_ms: u64) -> Self {
        SolverReport {
            input_digest: digest(g),
            method: s.method.tag().to_string(),
            guaranteed_bound: to_pq(&s.guaranteed_bound),
            achieved: to_pq(&s.bisection.cut_weight),
            side_x: s.bisection.side_x.iter().map(|v| v + 1).collect(),
            flags: s.flags.clone(),
            seed,
            elapsed_ms,
        }
    }

    /// Rebuilds the bisection from `side_x` and checks it against `g`, the
    /// stated weight and the stated bound.
    pub fn verify(&self, g: &WeightedMultigraph) -> Result<Verdict, HarnessError> {
        let mut in_x = vec![false; g.n()];
        for &v in &self.side_x {
            if v == 0 || v > g.n() {
                return Err(HarnessError::Usage(format!("report names vertex {v} outside the graph")));
            }
            in_x[v - 1] = true;
        }
        let mut b = Bisection::from_mask(g, &in_x);
        b.cut_weight = parse_rational(&self.achieved)?;
        let bound = parse_rational(&self.guaranteed_bound)?;
        let mut verdict = verify_bisection(g, &b, &bound);
        if self.input_digest != digest(g) {
            verdict.problems.push("input digest does not match the graph".into());
        }
        Ok(verdict)
    }
}
