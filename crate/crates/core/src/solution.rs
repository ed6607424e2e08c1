use std::collections::BTreeMap;
use std::fmt;

use crate::graph::Bisection;
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Method {
    Chromatic,
    Subcubic,
    TriangleFree,
}

impl Method {
    pub fn tag(self) -> &'static str {
        match self {
            Method::Chromatic => "chi",
            Method::Subcubic => "subcubic",
            Method::TriangleFree => "tf",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// A bisection together with the lower bound its method certifies.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub method: Method,
    pub bisection: Bisection,
    pub guaranteed_bound: Rational,
    /// Notes such as `weaker_bound_reason` when a weaker guarantee applies.
    pub flags: BTreeMap<String, String>,
}

impl Solution {
    pub fn new(method: Method, bisection: Bisection, guaranteed_bound: Rational) -> Self {
        Solution { method, bisection, guaranteed_bound, flags: BTreeMap::new() }
    }

    pub fn meets_bound(&self) -> bool {
        self.bisection.cut_weight >= self.guaranteed_bound
    }
}
