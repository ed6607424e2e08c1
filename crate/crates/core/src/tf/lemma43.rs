//! Bisections from a perfect matching: contract it, colour the contracted
//! graph, and lift the heaviest colour class to 4-vertex blocks.

use std::collections::BTreeMap;

use crate::coloring::{heaviest_color_class, vizing_color};
use crate::error::{Error, Result};
use crate::family::{balanced_bipartition, round_to_bisection, BalancedBlock, BalancedFamily, RoundingMode};
use crate::graph::{Bisection, EdgeId, Matching, WeightedMultigraph};
use crate::rational::frac;
use crate::structure::contract_matching;

/// Bisection of weight at least `3/5 w(G) + 2/5 w(M)` for a simple
/// triangle-free graph `g` of maximum degree 3 with perfect matching `m`.
pub fn lemma43_bisection(g: &WeightedMultigraph, m: &Matching) -> Result<Bisection> {
    if !g.is_simple() || !g.is_triangle_free() || g.max_degree() > 3 {
        return Err(Error::PreconditionViolated("expected a simple triangle-free graph of maximum degree 3".into()));
    }
    if !m.is_perfect(g) {
        return Err(Error::PreconditionViolated("matching is not perfect".into()));
    }
    let contracted = contract_matching(g, m)?;
    let colouring = vizing_color(&contracted.graph)?;
    let class = heaviest_color_class(&contracted.graph, &colouring)?;
    let mut blocks = Vec::new();
    let mut used = vec![false; contracted.pairs.len()];
    for &id in &class.edges {
        let e = contracted.graph.edge(id);
        let (_, a, b) = contracted.pairs[e.u];
        let (_, c, d) = contracted.pairs[e.v];
        let block = balanced_bipartition(g, &[a, b, c, d])
            .ok_or_else(|| Error::PreconditionViolated(format!("no balanced split of {{{a},{b},{c},{d}}}")))?;
        blocks.push(block);
        used[e.u] = true;
        used[e.v] = true;
    }
    for (i, &(_, a, b)) in contracted.pairs.iter().enumerate() {
        if !used[i] {
            blocks.push(BalancedBlock::pair(a, b));
        }
    }
    let b = round_to_bisection(g, &BalancedFamily::new(blocks), RoundingMode::Derandomized)?;
    let bound = g.total_weight() * frac(3, 5) + m.weight(g) * frac(2, 5);
    if b.cut_weight < bound {
        return Err(Error::AssertionFailed(format!("matching-contraction bisection {} below {bound}", b.cut_weight)));
    }
    Ok(b)
}

/// Drops parallel copies, keeping the lowest id with the summed weight, and
/// maps matching edges onto the kept copies.
pub fn simplify_with_matching(h: &WeightedMultigraph, m: &Matching) -> (WeightedMultigraph, Matching) {
    let mut groups: BTreeMap<(usize, usize), Vec<EdgeId>> = BTreeMap::new();
    for e in h.edges() {
        groups.entry((e.u.min(e.v), e.u.max(e.v))).or_default().push(e.id);
    }
    let mut simple = WeightedMultigraph::new(h.n());
    let mut kept_for: BTreeMap<EdgeId, EdgeId> = BTreeMap::new();
    for ((u, v), ids) in groups {
        let keep = *ids.iter().min().expect("non-empty group");
        let weight = ids.iter().fold(crate::rational::zero(), |acc, &id| acc + h.weight(id));
        simple.add_edge_with_id(keep, u, v, weight).expect("fresh id");
        for id in ids {
            kept_for.insert(id, keep);
        }
    }
    let remapped = Matching::new(m.edges.iter().map(|id| kept_for[id]).collect());
    (simple, remapped)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matching::perfect_matching;
    use crate::rational::int;

    fn petersen() -> WeightedMultigraph {
        let mut pairs = Vec::new();
        for i in 0..5 {
            pairs.push((i, (i + 1) % 5));
            pairs.push((i, i + 5));
            pairs.push((5 + i, 5 + (i + 2) % 5));
        }
        WeightedMultigraph::unit(10, &pairs).unwrap()
    }

    #[test]
    fn petersen_reaches_eleven() {
        let g = petersen();
        let m = perfect_matching(&g).unwrap();
        assert!(lemma43_bisection(&g, &m).unwrap().cut_weight >= int(11));
    }

    #[test]
    fn small_cycles() {
        let c6 = WeightedMultigraph::unit(6, &(0..6).map(|i| (i, (i + 1) % 6)).collect::<Vec<_>>()).unwrap();
        let m = Matching::new(vec![0, 2, 4]);
        assert!(lemma43_bisection(&c6, &m).unwrap().cut_weight >= int(5));
        let c4 = WeightedMultigraph::unit(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        assert_eq!(lemma43_bisection(&c4, &Matching::new(vec![0, 2])).unwrap().cut_weight, int(4));
    }

    #[test]
    fn simplify_merges_parallel_copies() {
        let mut g = WeightedMultigraph::unit(2, &[(0, 1)]).unwrap();
        let copy = g.add_edge(0, 1, int(2)).unwrap();
        let (s, m) = simplify_with_matching(&g, &Matching::new(vec![copy]));
        assert_eq!(s.m(), 1);
        assert_eq!(s.total_weight(), int(3));
        assert_eq!(m.edges, vec![0]);
    }
}
