//! Reduction of a 2-edge-connected component to a multigraph `H` whose
//! degree-2 vertices number zero or two, and the perfect matching `M` of `H`
//! that splits it into cycles and at most one path.

use crate::error::{Error, Result};
use crate::graph::{EdgeId, Matching, VertexId, WeightedMultigraph};
use crate::matching::forced_perfect_matching;
use crate::rational::zero;
use crate::structure::{cycle_path_decomposition, CyclePathStructure};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PreprocessKind {
    /// A single vertex.
    Trivial,
    /// An even cycle: its colour classes already cut every edge.
    EvenCycle,
    /// Even order after padding; `H` has zero or two degree-2 vertices.
    Even,
    /// Odd order with a single degree-2 vertex `y`; `H` is `G` plus a
    /// pendant vertex `x` on `y`, and `matching` is fixed in advance.
    PendantVertex { y: VertexId, matching: Matching },
}

#[derive(Clone, Debug)]
pub struct PreprocessRecord {
    pub kind: PreprocessKind,
    /// The derived multigraph (vertices of the input keep their ids).
    pub h: WeightedMultigraph,
    pub original_n: usize,
    pub added_vertices: Vec<VertexId>,
    /// Weight-0 edges added to the input, in order of addition.
    pub added_edges: Vec<EdgeId>,
    /// Paths of the subgraph induced by degree-2 vertices, each from its
    /// lower-id end.
    pub degree_two_paths: Vec<Vec<VertexId>>,
    /// Alternate edges of each path, starting at its first edge; every one
    /// of them received a weight-0 parallel copy.
    pub path_matchings: Vec<Vec<EdgeId>>,
}

fn check_input(g: &WeightedMultigraph) -> Result<()> {
    if !g.is_simple() || !g.is_triangle_free() || g.max_degree() > 3 {
        return Err(Error::PreconditionViolated("expected a simple triangle-free graph of maximum degree 3".into()));
    }
    if !crate::structure::is_connected(g) || !crate::structure::is_bridgeless(g) {
        return Err(Error::PreconditionViolated("expected a connected bridgeless graph".into()));
    }
    Ok(())
}

/// Two-colouring of an even cycle, or `None` for anything else.
pub fn even_cycle_sides(g: &WeightedMultigraph) -> Option<Vec<bool>> {
    if g.n() < 2 || g.n() % 2 == 1 || (0..g.n()).any(|v| g.degree(v) != 2) || !crate::structure::is_connected(g) {
        return None;
    }
    let mut side = vec![None; g.n()];
    side[0] = Some(true);
    let mut stack = vec![0];
    while let Some(v) = stack.pop() {
        for u in g.neighbors(v) {
            if side[u].is_none() {
                side[u] = Some(!side[v].expect("set"));
                stack.push(u);
            }
        }
    }
    Some(side.into_iter().map(|s| s.expect("connected")).collect())
}

fn new_record(kind: PreprocessKind, h: WeightedMultigraph, original_n: usize) -> PreprocessRecord {
    PreprocessRecord {
        kind,
        h,
        original_n,
        added_vertices: Vec::new(),
        added_edges: Vec::new(),
        degree_two_paths: Vec::new(),
        path_matchings: Vec::new(),
    }
}

/// Builds `H` from a connected bridgeless triangle-free graph with maximum
/// degree 3.
pub fn preprocess(g: &WeightedMultigraph) -> Result<PreprocessRecord> {
    check_input(g)?;
    let n = g.n();
    if n == 1 {
        return Ok(new_record(PreprocessKind::Trivial, g.clone(), n));
    }
    if even_cycle_sides(g).is_some() {
        return Ok(new_record(PreprocessKind::EvenCycle, g.clone(), n));
    }
    let twos = g.vertices_of_degree(2);
    if n.is_multiple_of(2) {
        let mut rec = new_record(PreprocessKind::Even, g.clone(), n);
        pad_even(&mut rec)?;
        return Ok(rec);
    }
    if twos.len() >= 3 {
        let (a, b) = twos
            .iter()
            .enumerate()
            .flat_map(|(i, &a)| twos[i + 1..].iter().map(move |&b| (a, b)))
            .find(|&(a, b)| !g.adjacent(a, b))
            .ok_or_else(|| Error::StructureAssertionFailed("degree-2 vertices pairwise adjacent".into()))?;
        let mut rec = new_record(PreprocessKind::Even, g.clone(), n);
        let x = rec.h.add_vertex();
        rec.added_vertices.push(x);
        for t in [a, b] {
            let id = rec.h.add_edge(x, t, zero())?;
            rec.added_edges.push(id);
        }
        pad_even(&mut rec)?;
        return Ok(rec);
    }
    if twos.len() != 1 {
        return Err(Error::StructureAssertionFailed(format!("odd order with {} degree-2 vertices", twos.len())));
    }
    pendant_case(g, twos[0])
}

/// Odd order with one degree-2 vertex `y`: match `G - y + y1y2` avoiding the
/// new edge, then hang a pendant vertex on `y`.
fn pendant_case(g: &WeightedMultigraph, y: VertexId) -> Result<PreprocessRecord> {
    let n = g.n();
    let nb: Vec<VertexId> = g.neighbors(y).collect();
    let (y1, y2) = (nb[0].min(nb[1]), nb[0].max(nb[1]));
    let keep: Vec<VertexId> = (0..n).filter(|&v| v != y).collect();
    let (mut h1, map) = g.induced_subgraph(&keep);
    let (a, b) = (map[y1].expect("kept"), map[y2].expect("kept"));
    let link = h1.next_edge_id().max(g.next_edge_id());
    h1.add_edge_with_id(link, a, b, zero())?;
    let forced = h1
        .incident(a)
        .iter()
        .copied()
        .filter(|&e| e != link)
        .min()
        .ok_or_else(|| Error::StructureAssertionFailed("neighbour of y has no other edge".into()))?;
    let m1 = forced_perfect_matching(&h1, forced)?;
    if m1.contains(link) {
        return Err(Error::StructureAssertionFailed("matching of G - y used the added edge".into()));
    }
    let mut h = g.clone();
    let x = h.add_vertex();
    let xy = h.add_edge(x, y, zero())?;
    let mut edges = m1.edges.clone();
    edges.push(xy);
    let matching = Matching::new(edges);
    if !matching.is_perfect(&h) {
        return Err(Error::StructureAssertionFailed("lifted matching is not perfect".into()));
    }
    let mut rec = new_record(PreprocessKind::PendantVertex { y, matching }, h, n);
    rec.added_vertices.push(x);
    rec.added_edges.push(xy);
    Ok(rec)
}

/// Paths of the subgraph induced by the degree-2 vertices, each listed from
/// its lower-id end.
fn degree_two_paths(h: &WeightedMultigraph) -> Result<Vec<Vec<VertexId>>> {
    let twos = h.vertices_of_degree(2);
    let mut is_two = vec![false; h.n()];
    for &v in &twos {
        is_two[v] = true;
    }
    let inner = |v: VertexId| -> Vec<VertexId> { h.neighbors(v).filter(|&u| is_two[u]).collect() };
    let mut seen = vec![false; h.n()];
    let mut paths = Vec::new();
    for &s in &twos {
        if seen[s] || inner(s).len() == 2 {
            continue;
        }
        let mut path = vec![s];
        seen[s] = true;
        let mut prev = None;
        let mut v = s;
        while let Some(u) = inner(v).into_iter().find(|&u| Some(u) != prev && !seen[u]) {
            path.push(u);
            seen[u] = true;
            prev = Some(v);
            v = u;
        }
        paths.push(path);
    }
    if twos.iter().any(|&v| !seen[v]) {
        return Err(Error::StructureAssertionFailed("degree-2 vertices induce a cycle".into()));
    }
    Ok(paths)
}

fn pad_even(rec: &mut PreprocessRecord) -> Result<()> {
    let paths = degree_two_paths(&rec.h)?;
    for path in &paths {
        let mut chosen = Vec::new();
        for i in (0..path.len().saturating_sub(1)).step_by(2) {
            let id = *rec.h.edges_between(path[i], path[i + 1]).iter().min().expect("path edge");
            let copy = rec.h.add_edge(path[i], path[i + 1], zero())?;
            chosen.push(id);
            rec.added_edges.push(copy);
        }
        rec.path_matchings.push(chosen);
    }
    rec.degree_two_paths = paths;
    let twos = rec.h.vertices_of_degree(2);
    for (i, &u) in twos.iter().enumerate() {
        for &v in &twos[i + 1..] {
            let h = &rec.h;
            if h.degree(u) != 2 || h.degree(v) != 2 || h.adjacent(u, v) {
                continue;
            }
            let nu = h.distinct_neighbors(u);
            if h.neighbors(v).any(|t| nu.contains(&t)) {
                continue;
            }
            let id = rec.h.add_edge(u, v, zero())?;
            rec.added_edges.push(id);
        }
    }
    let left = rec.h.vertices_of_degree(2).len();
    if left != 0 && left != 2 {
        return Err(Error::StructureAssertionFailed(format!("{left} degree-2 vertices remain after padding")));
    }
    Ok(())
}

/// The perfect matching `M` of `H` and the cycles, path and isolated
/// vertices of `H - M`. With two degree-2 vertices `p1 < pn`, the path runs
/// from `p1` to `pn` and its second vertex `p2` is matched to `pn`.
pub fn structure_matching(rec: &PreprocessRecord) -> Result<(Matching, CyclePathStructure)> {
    let h = &rec.h;
    let m = match &rec.kind {
        PreprocessKind::Trivial | PreprocessKind::EvenCycle => {
            return Err(Error::PreconditionViolated("component needs no matching".into()))
        }
        PreprocessKind::PendantVertex { matching, .. } => matching.clone(),
        PreprocessKind::Even => {
            let twos = h.vertices_of_degree(2);
            if twos.is_empty() {
                let first = h.edge_ids().min().ok_or_else(|| Error::PreconditionViolated("no edges".into()))?;
                forced_perfect_matching(h, first)?
            } else {
                let (p1, pn) = (twos[0], twos[1]);
                let np1 = h.distinct_neighbors(p1);
                let p2 = h
                    .distinct_neighbors(pn)
                    .into_iter()
                    .find(|t| np1.contains(t))
                    .ok_or_else(|| Error::StructureAssertionFailed("remaining degree-2 vertices share no neighbour".into()))?;
                let mut closed = h.clone();
                closed.add_edge(p1, pn, zero())?;
                let forced = *h.edges_between(p2, pn).iter().min().expect("adjacent");
                let m = forced_perfect_matching(&closed, forced)?;
                if !m.is_perfect(h) {
                    return Err(Error::StructureAssertionFailed("matching used the closing edge".into()));
                }
                m
            }
        }
    };
    let structure = cycle_path_decomposition(h, &m)?;
    if let Some(path) = &structure.path {
        let twos = h.vertices_of_degree(2);
        let ok = path.len() >= 5
            && twos.len() == 2
            && path.vertices[0] == twos[0]
            && path.vertices[path.len() - 1] == twos[1]
            && h.edges_between(path.vertices[1], twos[1]).iter().any(|&e| m.contains(e));
        if !ok {
            return Err(Error::StructureAssertionFailed(format!("unexpected path {:?}", path.vertices)));
        }
    }
    Ok((m, structure))
}

#[cfg(test)]
mod tests {
    use super::*;

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
    fn petersen_is_unchanged_and_splits_into_five_cycles() {
        let g = petersen();
        let rec = preprocess(&g).unwrap();
        assert_eq!(rec.kind, PreprocessKind::Even);
        assert!(rec.added_edges.is_empty());
        let (m, s) = structure_matching(&rec).unwrap();
        assert!(m.is_perfect(&g));
        assert_eq!(s.cycles.iter().map(|c| c.len()).collect::<Vec<_>>(), vec![5, 5]);
    }

    #[test]
    fn k33_leaves_a_six_cycle() {
        let pairs: Vec<_> = (0..3).flat_map(|a| (3..6).map(move |b| (a, b))).collect();
        let g = WeightedMultigraph::unit(6, &pairs).unwrap();
        let (_, s) = structure_matching(&preprocess(&g).unwrap()).unwrap();
        assert_eq!(s.cycles.len(), 1);
        assert_eq!(s.cycles[0].len(), 6);
    }

    #[test]
    fn cycles_short_circuit_or_pad() {
        let c6 = WeightedMultigraph::unit(6, &(0..6).map(|i| (i, (i + 1) % 6)).collect::<Vec<_>>()).unwrap();
        assert_eq!(preprocess(&c6).unwrap().kind, PreprocessKind::EvenCycle);
        let c5 = WeightedMultigraph::unit(5, &(0..5).map(|i| (i, (i + 1) % 5)).collect::<Vec<_>>()).unwrap();
        let rec = preprocess(&c5).unwrap();
        assert_eq!(rec.h.n(), 6);
        assert_eq!(rec.h.total_weight(), c5.total_weight());
        assert!(matches!(rec.h.vertices_of_degree(2).len(), 0 | 2));
        let (m, s) = structure_matching(&rec).unwrap();
        assert!(m.is_perfect(&rec.h));
        let path = s.path.expect("two degree-2 vertices leave a path");
        assert!(path.len() >= 5);
    }

    #[test]
    fn single_degree_two_vertex_gets_a_pendant() {
        // Petersen with the edge 0-1 subdivided by vertex 10.
        let p = petersen();
        let mut g = WeightedMultigraph::new(11);
        for e in p.edges() {
            if e.joins(0, 1) {
                g.add_edge(0, 10, crate::rational::one()).unwrap();
                g.add_edge(10, 1, crate::rational::one()).unwrap();
            } else {
                g.add_edge(e.u, e.v, e.weight.clone()).unwrap();
            }
        }
        let rec = preprocess(&g).unwrap();
        assert!(matches!(rec.kind, PreprocessKind::PendantVertex { y: 10, .. }));
        assert_eq!(rec.h.n(), 12);
        let (m, s) = structure_matching(&rec).unwrap();
        assert!(m.is_perfect(&rec.h));
        assert_eq!(s.isolated, vec![11]);
        assert!(s.path.is_none());
    }
}
