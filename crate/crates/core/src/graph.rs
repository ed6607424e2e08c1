//! Edge-weighted undirected multigraphs with stable edge ids.

use std::collections::BTreeSet;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{to_text, Rational};

pub type VertexId = usize;
pub type EdgeId = usize;

const NO_EDGE: usize = usize::MAX;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub id: EdgeId,
    pub u: VertexId,
    pub v: VertexId,
    pub weight: Rational,
}

impl Edge {
    pub fn other(&self, x: VertexId) -> VertexId {
        if self.u == x {
            self.v
        } else {
            self.u
        }
    }

    pub fn joins(&self, a: VertexId, b: VertexId) -> bool {
        (self.u == a && self.v == b) || (self.u == b && self.v == a)
    }
}

/// An undirected multigraph on vertices `0..n`. Parallel edges are distinct
/// ids; self-loops are rejected. Edge ids never change once assigned, so a
/// derived graph can refer back to edges of the graph it was built from.
#[derive(Clone, Debug, Default)]
pub struct WeightedMultigraph {
    n: usize,
    edges: Vec<Edge>,
    slot: Vec<usize>,
    adj: Vec<Vec<EdgeId>>,
}

impl PartialEq for WeightedMultigraph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.edges == other.edges
    }
}

impl Eq for WeightedMultigraph {}

impl WeightedMultigraph {
    pub fn new(n: usize) -> Self {
        WeightedMultigraph { n, edges: Vec::new(), slot: Vec::new(), adj: vec![Vec::new(); n] }
    }

    /// Builds a graph from `(u, v, weight)` triples; edge ids are `0..m` in order.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (VertexId, VertexId, Rational)>) -> Result<Self> {
        let mut g = Self::new(n);
        for (u, v, w) in edges {
            g.add_edge(u, v, w)?;
        }
        Ok(g)
    }

    /// Unit-weight convenience constructor.
    pub fn unit(n: usize, pairs: &[(VertexId, VertexId)]) -> Result<Self> {
        Self::from_edges(n, pairs.iter().map(|&(u, v)| (u, v, crate::rational::one())))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn add_vertex(&mut self) -> VertexId {
        self.adj.push(Vec::new());
        self.n += 1;
        self.n - 1
    }

    pub fn next_edge_id(&self) -> EdgeId {
        self.slot.len()
    }

    pub fn add_edge(&mut self, u: VertexId, v: VertexId, weight: Rational) -> Result<EdgeId> {
        let id = self.next_edge_id();
        self.add_edge_with_id(id, u, v, weight)?;
        Ok(id)
    }

    pub fn add_edge_with_id(&mut self, id: EdgeId, u: VertexId, v: VertexId, weight: Rational) -> Result<()> {
        if u >= self.n || v >= self.n {
            return Err(Error::InvalidGraph(format!("edge ({u}, {v}) has an endpoint outside 0..{}", self.n)));
        }
        if u == v {
            return Err(Error::InvalidGraph(format!("self-loop at vertex {u}")));
        }
        if weight < Rational::zero() {
            return Err(Error::InvalidGraph(format!("negative weight {} on edge ({u}, {v})", to_text(&weight))));
        }
        if id < self.slot.len() && self.slot[id] != NO_EDGE {
            return Err(Error::InvalidGraph(format!("duplicate edge id {id}")));
        }
        if id >= self.slot.len() {
            self.slot.resize(id + 1, NO_EDGE);
        }
        self.slot[id] = self.edges.len();
        self.edges.push(Edge { id, u, v, weight });
        self.adj[u].push(id);
        self.adj[v].push(id);
        Ok(())
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.edges.iter().map(|e| e.id)
    }

    pub fn has_edge_id(&self, id: EdgeId) -> bool {
        id < self.slot.len() && self.slot[id] != NO_EDGE
    }

    pub fn edge(&self, id: EdgeId) -> &Edge {
        &self.edges[self.slot[id]]
    }

    pub fn weight(&self, id: EdgeId) -> &Rational {
        &self.edge(id).weight
    }

    /// Incident edge ids of `v` in insertion order.
    pub fn incident(&self, v: VertexId) -> &[EdgeId] {
        &self.adj[v]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adj[v].len()
    }

    /// Neighbours of `v`, with multiplicity.
    pub fn neighbors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.adj[v].iter().map(move |&e| self.edge(e).other(v))
    }

    pub fn distinct_neighbors(&self, v: VertexId) -> BTreeSet<VertexId> {
        self.neighbors(v).collect()
    }

    pub fn edges_between(&self, a: VertexId, b: VertexId) -> Vec<EdgeId> {
        self.adj[a].iter().copied().filter(|&e| self.edge(e).other(a) == b).collect()
    }

    pub fn adjacent(&self, a: VertexId, b: VertexId) -> bool {
        self.adj[a].iter().any(|&e| self.edge(e).other(a) == b)
    }

    pub fn weight_between(&self, a: VertexId, b: VertexId) -> Rational {
        self.adj[a].iter().filter(|&&e| self.edge(e).other(a) == b).map(|&e| self.weight(e).clone()).sum()
    }

    pub fn total_weight(&self) -> Rational {
        self.edges.iter().map(|e| e.weight.clone()).sum()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn is_simple(&self) -> bool {
        (0..self.n).all(|v| {
            let mut seen = BTreeSet::new();
            self.neighbors(v).all(|u| seen.insert(u))
        })
    }

    pub fn is_triangle_free(&self) -> bool {
        for e in &self.edges {
            let nu = self.distinct_neighbors(e.u);
            if self.neighbors(e.v).any(|x| x != e.u && nu.contains(&x)) {
                return false;
            }
        }
        true
    }

    /// Vertices of degree exactly `d`, ascending.
    pub fn vertices_of_degree(&self, d: usize) -> Vec<VertexId> {
        (0..self.n).filter(|&v| self.degree(v) == d).collect()
    }

    /// Ids of edges with both endpoints in `mask`.
    pub fn induced_edge_ids(&self, mask: &[bool]) -> Vec<EdgeId> {
        self.edges.iter().filter(|e| mask[e.u] && mask[e.v]).map(|e| e.id).collect()
    }

    /// Weight of edges with exactly one endpoint in `in_x`.
    pub fn cut_weight(&self, in_x: &[bool]) -> Rational {
        self.edges.iter().filter(|e| in_x[e.u] != in_x[e.v]).map(|e| e.weight.clone()).sum()
    }

    /// Number of edges with exactly one endpoint in `in_x`.
    pub fn cut_size(&self, in_x: &[bool]) -> usize {
        self.edges.iter().filter(|e| in_x[e.u] != in_x[e.v]).count()
    }

    /// Copy without the listed edges; remaining ids are kept.
    pub fn without_edges(&self, drop: &BTreeSet<EdgeId>) -> Self {
        let mut g = Self::new(self.n);
        for e in &self.edges {
            if !drop.contains(&e.id) {
                g.add_edge_with_id(e.id, e.u, e.v, e.weight.clone()).expect("edges of a valid graph");
            }
        }
        g
    }

    /// Subgraph induced by `keep` (in the given order), relabelled to `0..keep.len()`.
    /// Edge ids are preserved. Returns the graph and the old-to-new vertex map.
    pub fn induced_subgraph(&self, keep: &[VertexId]) -> (Self, Vec<Option<VertexId>>) {
        let mut map = vec![None; self.n];
        for (i, &v) in keep.iter().enumerate() {
            map[v] = Some(i);
        }
        let mut g = Self::new(keep.len());
        for e in &self.edges {
            if let (Some(a), Some(b)) = (map[e.u], map[e.v]) {
                g.add_edge_with_id(e.id, a, b, e.weight.clone()).expect("edges of a valid graph");
            }
        }
        (g, map)
    }

    /// Same graph with every weight multiplied by `factor`.
    pub fn scaled(&self, factor: &Rational) -> Self {
        let mut g = Self::new(self.n);
        for e in &self.edges {
            g.add_edge_with_id(e.id, e.u, e.v, &e.weight * factor).expect("non-negative factor");
        }
        g
    }

    /// Same graph with vertices renamed by `perm[v]`; edge ids are preserved.
    pub fn relabeled(&self, perm: &[VertexId]) -> Self {
        let mut g = Self::new(self.n);
        for e in &self.edges {
            g.add_edge_with_id(e.id, perm[e.u], perm[e.v], e.weight.clone()).expect("permutation");
        }
        g
    }
}

/// A set of pairwise vertex-disjoint edges, stored as sorted edge ids.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Matching {
    pub edges: Vec<EdgeId>,
}

impl Matching {
    pub fn new(mut edges: Vec<EdgeId>) -> Self {
        edges.sort_unstable();
        edges.dedup();
        Matching { edges }
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn contains(&self, id: EdgeId) -> bool {
        self.edges.binary_search(&id).is_ok()
    }

    pub fn weight(&self, g: &WeightedMultigraph) -> Rational {
        self.edges.iter().map(|&e| g.weight(e).clone()).sum()
    }

    /// Partner of each vertex, or `None` when unmatched.
    pub fn mate(&self, g: &WeightedMultigraph) -> Vec<Option<VertexId>> {
        let mut mate = vec![None; g.n()];
        for &id in &self.edges {
            let e = g.edge(id);
            mate[e.u] = Some(e.v);
            mate[e.v] = Some(e.u);
        }
        mate
    }

    pub fn is_valid(&self, g: &WeightedMultigraph) -> bool {
        let mut used = vec![false; g.n()];
        for &id in &self.edges {
            if !g.has_edge_id(id) {
                return false;
            }
            let e = g.edge(id);
            if used[e.u] || used[e.v] {
                return false;
            }
            used[e.u] = true;
            used[e.v] = true;
        }
        true
    }

    pub fn is_perfect(&self, g: &WeightedMultigraph) -> bool {
        self.is_valid(g) && 2 * self.edges.len() == g.n()
    }
}

/// A vertex partition with sizes differing by at most one, plus its cut weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bisection {
    pub side_x: Vec<VertexId>,
    pub side_y: Vec<VertexId>,
    pub cut_weight: Rational,
}

impl Bisection {
    pub fn from_mask(g: &WeightedMultigraph, in_x: &[bool]) -> Self {
        let side_x = (0..g.n()).filter(|&v| in_x[v]).collect();
        let side_y = (0..g.n()).filter(|&v| !in_x[v]).collect();
        Bisection { side_x, side_y, cut_weight: g.cut_weight(in_x) }
    }

    pub fn mask(&self, n: usize) -> Vec<bool> {
        let mut in_x = vec![false; n];
        for &v in &self.side_x {
            in_x[v] = true;
        }
        in_x
    }

    pub fn is_balanced(&self) -> bool {
        self.side_x.len().abs_diff(self.side_y.len()) <= 1
    }

    /// Keeps only vertices `< n` (added helper vertices always have larger ids)
    /// and recomputes the cut on `g`.
    pub fn restrict(&self, g: &WeightedMultigraph) -> Self {
        let n = g.n();
        let mut in_x = vec![false; n];
        for &v in self.side_x.iter().filter(|&&v| v < n) {
            in_x[v] = true;
        }
        Self::from_mask(g, &in_x)
    }

    pub fn swapped(&self) -> Self {
        Bisection { side_x: self.side_y.clone(), side_y: self.side_x.clone(), cut_weight: self.cut_weight.clone() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

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
    fn basic_measures() {
        assert_eq!(WeightedMultigraph::new(0).total_weight(), int(0));
        let claw = WeightedMultigraph::unit(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        assert_eq!(claw.total_weight(), int(3));
        let p = petersen();
        assert_eq!(p.total_weight(), int(15));
        assert_eq!(p.max_degree(), 3);
        assert!(p.is_triangle_free());
        let k4 = WeightedMultigraph::unit(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert!(!k4.is_triangle_free());
        let c5 = WeightedMultigraph::unit(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap();
        assert!(c5.is_triangle_free());
    }

    #[test]
    fn multiplicity_counts_in_degree() {
        let g = WeightedMultigraph::unit(2, &[(0, 1), (0, 1)]).unwrap();
        assert_eq!(g.max_degree(), 2);
        assert!(!g.is_simple());
        assert_eq!(WeightedMultigraph::unit(2, &[(0, 1)]).unwrap().max_degree(), 1);
    }

    #[test]
    fn rejects_bad_edges() {
        let mut g = WeightedMultigraph::new(3);
        assert!(g.add_edge(0, 0, int(1)).is_err());
        assert!(g.add_edge(0, 3, int(1)).is_err());
        assert!(g.add_edge(0, 1, frac(-1, 2)).is_err());
        let id = g.add_edge(0, 1, frac(1, 2)).unwrap();
        assert!(g.add_edge_with_id(id, 1, 2, int(1)).is_err());
    }

    #[test]
    fn ids_survive_derivation() {
        let g = WeightedMultigraph::unit(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let (h, map) = g.induced_subgraph(&[1, 2, 3]);
        assert_eq!(map[0], None);
        assert_eq!(h.m(), 2);
        assert!(h.has_edge_id(1) && h.has_edge_id(2) && !h.has_edge_id(0));
        let d = g.without_edges(&[1].into_iter().collect());
        assert_eq!(d.edge_ids().collect::<Vec<_>>(), vec![0, 2]);
    }
}
