//! Connectivity, bridges, the cycle/path shape of `G - M`, and matching contraction.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::graph::{EdgeId, Matching, VertexId, WeightedMultigraph};
use crate::rational::Rational;

/// Connected components, each sorted, ordered by lowest vertex.
pub fn components(g: &WeightedMultigraph) -> Vec<Vec<VertexId>> {
    let mut seen = vec![false; g.n()];
    let mut out = Vec::new();
    for s in 0..g.n() {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut comp = vec![s];
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            for u in g.neighbors(v) {
                if !seen[u] {
                    seen[u] = true;
                    comp.push(u);
                    stack.push(u);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

pub fn is_connected(g: &WeightedMultigraph) -> bool {
    components(g).len() <= 1
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BridgeDecomposition {
    pub bridges: BTreeSet<EdgeId>,
    /// 2-edge-connected components, each sorted, ordered by lowest vertex.
    pub components: Vec<Vec<VertexId>>,
}

/// Bridges by low-link DFS (a parallel copy of an edge is never a bridge),
/// then components of the graph with the bridges removed.
pub fn bridges_and_2ecc(g: &WeightedMultigraph) -> BridgeDecomposition {
    let n = g.n();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut bridges = BTreeSet::new();
    let mut timer = 0;
    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        // frames: (vertex, parent edge, next incident index)
        let mut stack: Vec<(VertexId, Option<EdgeId>, usize)> = vec![(root, None, 0)];
        disc[root] = timer;
        low[root] = timer;
        timer += 1;
        while let Some(&(v, parent, idx)) = stack.last() {
            if idx < g.incident(v).len() {
                let e = g.incident(v)[idx];
                stack.last_mut().expect("non-empty").2 += 1;
                if Some(e) == parent {
                    continue;
                }
                let u = g.edge(e).other(v);
                if disc[u] == usize::MAX {
                    disc[u] = timer;
                    low[u] = timer;
                    timer += 1;
                    stack.push((u, Some(e), 0));
                } else {
                    low[v] = low[v].min(disc[u]);
                }
            } else {
                stack.pop();
                if let Some(&(p, _, _)) = stack.last() {
                    low[p] = low[p].min(low[v]);
                    if low[v] > disc[p] {
                        bridges.insert(parent.expect("non-root frame has a parent edge"));
                    }
                }
            }
        }
    }
    let components = components(&g.without_edges(&bridges));
    BridgeDecomposition { bridges, components }
}

pub fn is_bridgeless(g: &WeightedMultigraph) -> bool {
    bridges_and_2ecc(g).bridges.is_empty()
}

/// A closed or open walk: `edges[i]` joins `vertices[i]` and `vertices[i + 1]`
/// (indices modulo the length for cycles).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Walk {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<EdgeId>,
}

impl Walk {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

/// Components of `G - M`: cycles, at most one path, and isolated vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclePathStructure {
    pub cycles: Vec<Walk>,
    pub path: Option<Walk>,
    pub isolated: Vec<VertexId>,
}

pub fn cycle_path_decomposition(g: &WeightedMultigraph, m: &Matching) -> Result<CyclePathStructure> {
    if !m.is_valid(g) {
        return Err(Error::MalformedStructure("matching is not valid in the host".into()));
    }
    let n = g.n();
    let rest: Vec<Vec<EdgeId>> =
        (0..n).map(|v| g.incident(v).iter().copied().filter(|&e| !m.contains(e)).collect()).collect();
    if let Some(v) = (0..n).find(|&v| rest[v].len() > 2) {
        return Err(Error::MalformedStructure(format!("vertex {v} has degree {} outside the matching", rest[v].len())));
    }
    let mut seen = vec![false; n];
    let mut cycles = Vec::new();
    let mut paths = Vec::new();
    let mut isolated = Vec::new();
    let walk_from = |start: VertexId, first: EdgeId, seen: &mut Vec<bool>| -> Walk {
        let mut vertices = vec![start];
        let mut edges = Vec::new();
        seen[start] = true;
        let mut v = start;
        let mut via = first;
        loop {
            let u = g.edge(via).other(v);
            edges.push(via);
            if u == start {
                break;
            }
            vertices.push(u);
            seen[u] = true;
            match rest[u].iter().copied().find(|&e| e != via) {
                Some(next) => {
                    v = u;
                    via = next;
                }
                None => break,
            }
        }
        Walk { vertices, edges }
    };
    for s in 0..n {
        if seen[s] {
            continue;
        }
        match rest[s].len() {
            0 => {
                seen[s] = true;
                isolated.push(s);
            }
            1 => paths.push(walk_from(s, rest[s][0], &mut seen)),
            _ => {}
        }
    }
    for s in 0..n {
        if seen[s] {
            continue;
        }
        let first = *rest[s].iter().min().expect("degree two");
        let w = walk_from(s, first, &mut seen);
        if w.edges.len() != w.vertices.len() {
            return Err(Error::MalformedStructure(format!("walk from {s} did not close")));
        }
        cycles.push(w);
    }
    if paths.len() > 1 {
        return Err(Error::MalformedStructure(format!("{} paths, at most one allowed", paths.len())));
    }
    Ok(CyclePathStructure { cycles, path: paths.pop(), isolated })
}

/// `G / M`: one vertex per matched pair, simple, with each edge carrying the
/// summed weight of the cross edges between the two pairs.
#[derive(Clone, Debug)]
pub struct ContractedGraph {
    pub graph: WeightedMultigraph,
    /// `pairs[i]` is the matched edge id and its endpoints for contracted vertex `i`.
    pub pairs: Vec<(EdgeId, VertexId, VertexId)>,
    /// Host vertex to contracted vertex.
    pub vertex_of: Vec<VertexId>,
    /// Cross-edge ids aggregated by each contracted edge, keyed by contracted edge id.
    pub cross: Vec<Vec<EdgeId>>,
}

pub fn contract_matching(g: &WeightedMultigraph, m: &Matching) -> Result<ContractedGraph> {
    if !m.is_perfect(g) {
        return Err(Error::NotPerfect);
    }
    let mut vertex_of = vec![0; g.n()];
    let mut pairs = Vec::new();
    for (i, &id) in m.edges.iter().enumerate() {
        let e = g.edge(id);
        vertex_of[e.u] = i;
        vertex_of[e.v] = i;
        pairs.push((id, e.u, e.v));
    }
    let mut agg: BTreeMap<(usize, usize), (Rational, Vec<EdgeId>)> = BTreeMap::new();
    for e in g.edges() {
        let (a, b) = (vertex_of[e.u], vertex_of[e.v]);
        if a == b {
            continue;
        }
        let entry = agg.entry((a.min(b), a.max(b))).or_insert_with(|| (crate::rational::zero(), Vec::new()));
        entry.0 += &e.weight;
        entry.1.push(e.id);
    }
    let mut graph = WeightedMultigraph::new(pairs.len());
    let mut cross = Vec::new();
    for ((a, b), (w, ids)) in agg {
        graph.add_edge(a, b, w)?;
        cross.push(ids);
    }
    Ok(ContractedGraph { graph, pairs, vertex_of, cross })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn cycle(l: usize) -> WeightedMultigraph {
        let pairs: Vec<_> = (0..l).map(|i| (i, (i + 1) % l)).collect();
        WeightedMultigraph::unit(l, &pairs).unwrap()
    }

    /// Reference: an edge is a bridge iff deleting it raises the component count.
    fn naive_bridges(g: &WeightedMultigraph) -> BTreeSet<EdgeId> {
        let base = components(g).len();
        g.edge_ids().filter(|&e| components(&g.without_edges(&[e].into_iter().collect())).len() > base).collect()
    }

    #[test]
    fn bridge_examples() {
        let tree = WeightedMultigraph::unit(4, &[(0, 1), (1, 2), (1, 3)]).unwrap();
        assert_eq!(bridges_and_2ecc(&tree).bridges.len(), 3);
        let c6 = cycle(6);
        let d = bridges_and_2ecc(&c6);
        assert!(d.bridges.is_empty());
        assert_eq!(d.components.len(), 1);
        let mut pairs: Vec<_> = (0..4).map(|i| (i, (i + 1) % 4)).collect();
        pairs.extend((0..4).map(|i| (4 + i, 4 + (i + 1) % 4)));
        pairs.push((0, 4));
        let joined = WeightedMultigraph::unit(8, &pairs).unwrap();
        let d = bridges_and_2ecc(&joined);
        assert_eq!(d.bridges, [8].into_iter().collect());
        assert_eq!(d.components.len(), 2);
        let doubled = WeightedMultigraph::unit(2, &[(0, 1), (0, 1)]).unwrap();
        assert!(bridges_and_2ecc(&doubled).bridges.is_empty());
    }

    #[test]
    fn isolated_vertex_is_own_component() {
        let g = WeightedMultigraph::new(3);
        assert_eq!(bridges_and_2ecc(&g).components.len(), 3);
    }

    #[test]
    fn bridges_match_naive_reference_on_small_graphs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..300 {
            let n = rng.gen_range(1..=10);
            let mut g = WeightedMultigraph::new(n);
            for _ in 0..rng.gen_range(0..=2 * n) {
                let (u, v) = (rng.gen_range(0..n), rng.gen_range(0..n));
                if u != v {
                    g.add_edge(u, v, int(1)).unwrap();
                }
            }
            assert_eq!(bridges_and_2ecc(&g).bridges, naive_bridges(&g));
        }
    }

    #[test]
    fn c4_minus_one_edge_is_a_path() {
        let c4 = cycle(4);
        let s = cycle_path_decomposition(&c4, &Matching::new(vec![3])).unwrap();
        assert!(s.cycles.is_empty());
        assert_eq!(s.path.unwrap().vertices, vec![0, 1, 2, 3]);
    }

    #[test]
    fn two_paths_are_rejected() {
        let c4 = cycle(4);
        let err = cycle_path_decomposition(&c4, &Matching::new(vec![0, 2])).unwrap_err();
        assert!(matches!(err, Error::MalformedStructure(_)));
    }

    #[test]
    fn contraction_examples() {
        let c4 = cycle(4);
        let cg = contract_matching(&c4, &Matching::new(vec![0, 2])).unwrap();
        assert_eq!(cg.graph.m(), 1);
        assert_eq!(cg.graph.total_weight(), int(2));
        let c6 = cycle(6);
        let cg = contract_matching(&c6, &Matching::new(vec![0, 2, 4])).unwrap();
        assert_eq!(cg.graph.m(), 3);
        assert!(cg.graph.edges().iter().all(|e| e.weight == int(1)));
        assert_eq!(contract_matching(&c6, &Matching::new(vec![0])).unwrap_err(), Error::NotPerfect);
    }
}
