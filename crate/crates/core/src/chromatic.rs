//! Bisection from the heaviest colour class of a Δ+1 edge colouring.

use crate::coloring::{heaviest_color_class, vizing_color};
use crate::error::{Error, Result};
use crate::family::{round_to_bisection, BalancedBlock, BalancedFamily, RoundingMode};
use crate::graph::{Matching, WeightedMultigraph};
use crate::rational::{int, to_text, Rational};
use crate::solution::{Method, Solution};

/// `(k+2) / (2(k+1))`, the guarantee for maximum degree `k`.
pub fn degree_ratio(k: usize) -> Rational {
    Rational::new((k as i64 + 2).into(), (2 * (k as i64 + 1)).into())
}

pub fn matching_family(g: &WeightedMultigraph, m: &Matching) -> BalancedFamily {
    BalancedFamily::new(
        m.edges
            .iter()
            .map(|&id| {
                let e = g.edge(id);
                BalancedBlock::pair(e.u, e.v)
            })
            .collect(),
    )
}

/// Colours `g` with `c ≤ Δ+1` colours and rounds the heaviest class. The cut
/// is at least `(c+1)/(2c)·w(g)`; the reported guarantee is the degree form
/// `(Δ+2)/(2(Δ+1))·w(g)`.
pub fn bisect_via_chromatic_index(g: &WeightedMultigraph) -> Result<Solution> {
    let coloring = vizing_color(g)?;
    let m = heaviest_color_class(g, &coloring)?;
    let bisection = round_to_bisection(g, &matching_family(g, &m), RoundingMode::Derandomized)?;
    let w = g.total_weight();
    let c = coloring.count.max(1) as i64;
    let by_colors = Rational::new((c + 1).into(), (2 * c).into()) * &w;
    if bisection.cut_weight < by_colors {
        return Err(Error::AssertionFailed(format!(
            "chromatic cut {} below {} for {c} colours",
            to_text(&bisection.cut_weight),
            to_text(&by_colors)
        )));
    }
    let bound = degree_ratio(g.max_degree()) * w;
    debug_assert!(bisection.cut_weight >= bound && int(0) <= bound);
    Ok(Solution::new(Method::Chromatic, bisection, bound))
}
