//! Matchings: exact maximum weight, maximum cardinality (Edmonds), and perfect
//! matchings through a prescribed edge of a bridgeless cubic multigraph.

use std::collections::{BTreeMap, VecDeque};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::graph::{EdgeId, Matching, VertexId, WeightedMultigraph};
use crate::rational::{zero, Rational};
use crate::structure::{bridges_and_2ecc, is_connected};

const NONE: usize = usize::MAX;

/// Maximum cardinality matching of a simple graph given by adjacency lists,
/// via Edmonds' blossom algorithm. Returns each vertex's mate.
pub fn max_cardinality_matching(adj: &[Vec<usize>]) -> Vec<Option<usize>> {
    let n = adj.len();
    let mut mate = vec![NONE; n];
    // Greedy start keeps the augmenting searches short.
    for v in 0..n {
        if mate[v] == NONE {
            if let Some(&u) = adj[v].iter().find(|&&u| mate[u] == NONE && u != v) {
                mate[v] = u;
                mate[u] = v;
            }
        }
    }
    let mut parent = vec![NONE; n];
    let mut base: Vec<usize> = (0..n).collect();
    let mut used = vec![false; n];
    let mut blossom = vec![false; n];
    for root in 0..n {
        if mate[root] != NONE {
            continue;
        }
        parent.fill(NONE);
        used.fill(false);
        for (i, b) in base.iter_mut().enumerate() {
            *b = i;
        }
        used[root] = true;
        let mut queue = VecDeque::from([root]);
        let mut found = NONE;
        'search: while let Some(v) = queue.pop_front() {
            for &to in &adj[v] {
                if base[v] == base[to] || mate[v] == to {
                    continue;
                }
                if to == root || (mate[to] != NONE && parent[mate[to]] != NONE) {
                    let cur = lca(&mate, &base, &parent, v, to);
                    blossom.fill(false);
                    mark_path(&mate, &base, &mut parent, &mut blossom, v, cur, to);
                    mark_path(&mate, &base, &mut parent, &mut blossom, to, cur, v);
                    for i in 0..n {
                        if blossom[base[i]] {
                            base[i] = cur;
                            if !used[i] {
                                used[i] = true;
                                queue.push_back(i);
                            }
                        }
                    }
                } else if parent[to] == NONE {
                    parent[to] = v;
                    if mate[to] == NONE {
                        found = to;
                        break 'search;
                    }
                    used[mate[to]] = true;
                    queue.push_back(mate[to]);
                }
            }
        }
        let mut v = found;
        while v != NONE {
            let pv = parent[v];
            let next = mate[pv];
            mate[v] = pv;
            mate[pv] = v;
            v = next;
        }
    }
    mate.into_iter().map(|m| (m != NONE).then_some(m)).collect()
}

fn lca(mate: &[usize], base: &[usize], parent: &[usize], mut a: usize, mut b: usize) -> usize {
    let mut seen = vec![false; mate.len()];
    loop {
        a = base[a];
        seen[a] = true;
        if mate[a] == NONE {
            break;
        }
        a = parent[mate[a]];
    }
    loop {
        b = base[b];
        if seen[b] {
            return b;
        }
        b = parent[mate[b]];
    }
}

fn mark_path(
    mate: &[usize],
    base: &[usize],
    parent: &mut [usize],
    blossom: &mut [bool],
    mut v: usize,
    b: usize,
    mut child: usize,
) {
    while base[v] != b {
        blossom[base[v]] = true;
        blossom[base[mate[v]]] = true;
        parent[v] = child;
        child = mate[v];
        v = parent[mate[v]];
    }
}

fn simple_adjacency(g: &WeightedMultigraph) -> Vec<Vec<usize>> {
    (0..g.n())
        .map(|v| g.distinct_neighbors(v).into_iter().collect())
        .collect()
}

fn lowest_edge_between(g: &WeightedMultigraph, a: VertexId, b: VertexId) -> EdgeId {
    *g.edges_between(a, b).iter().min().expect("adjacent vertices")
}

/// A perfect matching if one exists. Between parallel edges the lowest id is used.
pub fn perfect_matching(g: &WeightedMultigraph) -> Option<Matching> {
    if g.n() % 2 == 1 {
        return None;
    }
    let mate = max_cardinality_matching(&simple_adjacency(g));
    let mut edges = Vec::new();
    for v in 0..g.n() {
        let u = mate[v]?;
        if v < u {
            edges.push(lowest_edge_between(g, v, u));
        }
    }
    Some(Matching::new(edges))
}

/// Exact maximum weight matching by branch and bound over vertices, pruning
/// with half the sum of each open vertex's heaviest open edge.
pub fn max_weight_matching(g: &WeightedMultigraph) -> Matching {
    let n = g.n();
    // Heaviest edge per vertex pair, lowest id among ties; zero edges never help.
    let mut best_pair: BTreeMap<(usize, usize), EdgeId> = BTreeMap::new();
    for e in g.edges() {
        if e.weight.is_zero() {
            continue;
        }
        let key = (e.u.min(e.v), e.u.max(e.v));
        match best_pair.get(&key) {
            Some(&old) if g.weight(old) >= &e.weight => {}
            _ => {
                best_pair.insert(key, e.id);
            }
        }
    }
    let mut options: Vec<Vec<(VertexId, EdgeId)>> = vec![Vec::new(); n];
    for (&(a, b), &id) in &best_pair {
        options[a].push((b, id));
        options[b].push((a, id));
    }
    for opts in options.iter_mut() {
        opts.sort_by(|x, y| g.weight(y.1).cmp(g.weight(x.1)).then(x.1.cmp(&y.1)));
    }
    struct Search<'a> {
        g: &'a WeightedMultigraph,
        options: Vec<Vec<(VertexId, EdgeId)>>,
        open: Vec<bool>,
        chosen: Vec<EdgeId>,
        best: Rational,
        best_set: Vec<EdgeId>,
    }
    impl Search<'_> {
        fn bound(&self, from: usize) -> Rational {
            let mut total = zero();
            for v in from..self.open.len() {
                if self.open[v] {
                    if let Some(&(_, id)) = self.options[v].iter().find(|&&(u, _)| self.open[u]) {
                        total += self.g.weight(id);
                    }
                }
            }
            total / Rational::from_integer(2.into())
        }

        fn run(&mut self, from: usize, current: Rational) {
            let Some(v) = (from..self.open.len()).find(|&v| self.open[v]) else {
                if current > self.best {
                    self.best = current;
                    self.best_set = self.chosen.clone();
                }
                return;
            };
            if &current + self.bound(v) <= self.best {
                return;
            }
            self.open[v] = false;
            for i in 0..self.options[v].len() {
                let (u, id) = self.options[v][i];
                if self.open[u] {
                    self.open[u] = false;
                    self.chosen.push(id);
                    let next = &current + self.g.weight(id);
                    self.run(v + 1, next);
                    self.chosen.pop();
                    self.open[u] = true;
                }
            }
            self.run(v + 1, current);
            self.open[v] = true;
        }
    }
    let mut search = Search { g, options, open: vec![true; n], chosen: Vec::new(), best: zero(), best_set: Vec::new() };
    search.run(0, zero());
    Matching::new(search.best_set)
}

fn check_cubic_bridgeless(g: &WeightedMultigraph) -> Result<()> {
    if (0..g.n()).any(|v| g.degree(v) != 3) {
        return Err(Error::PreconditionViolated("graph is not 3-regular".into()));
    }
    if !is_connected(g) {
        return Err(Error::PreconditionViolated("graph is not connected".into()));
    }
    if !bridges_and_2ecc(g).bridges.is_empty() {
        return Err(Error::PreconditionViolated("graph has a bridge".into()));
    }
    Ok(())
}

/// A perfect matching of a connected bridgeless cubic multigraph that contains
/// edge `e`. Each doubled pair `x, y` is replaced by two new vertices `v, w`
/// adjacent to each other and to both of `x` and `y`, giving a simple cubic
/// graph; `e` is forced by deleting its endpoints (for a doubled edge, `x` and
/// `v`) and matching the rest. A doubled pair is matched iff `x` and `y` were
/// matched across the gadget.
pub fn forced_perfect_matching(g: &WeightedMultigraph, e: EdgeId) -> Result<Matching> {
    if !g.has_edge_id(e) {
        return Err(Error::PreconditionViolated(format!("edge {e} is not in the graph")));
    }
    check_cubic_bridgeless(g)?;
    let forced = g.edge(e).clone();
    if g.n() == 2 {
        // three parallel edges: the component is just this pair
        return Ok(Matching::new(vec![e]));
    }
    let n = g.n();
    let mut multiplicity: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for ed in g.edges() {
        *multiplicity.entry((ed.u.min(ed.v), ed.u.max(ed.v))).or_default() += 1;
    }
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut gadgets: BTreeMap<(usize, usize), (usize, usize)> = BTreeMap::new();
    for (&(x, y), &k) in &multiplicity {
        match k {
            1 => {
                adj[x].push(y);
                adj[y].push(x);
            }
            2 => {
                let v = adj.len();
                let w = v + 1;
                adj.push(vec![x, y, w]);
                adj.push(vec![x, y, v]);
                adj[x].extend([v, w]);
                adj[y].extend([v, w]);
                gadgets.insert((x, y), (v, w));
            }
            _ => return Err(Error::PreconditionViolated("triple edge in a graph with more than two vertices".into())),
        }
    }
    let key = (forced.u.min(forced.v), forced.u.max(forced.v));
    let (fa, fb) = match gadgets.get(&key) {
        Some(&(v, _)) => (key.0, v),
        None => (forced.u, forced.v),
    };
    // Match everything except the forced pair.
    let total = adj.len();
    let keep: Vec<usize> = (0..total).filter(|&v| v != fa && v != fb).collect();
    let mut index = vec![NONE; total];
    for (i, &v) in keep.iter().enumerate() {
        index[v] = i;
    }
    let reduced: Vec<Vec<usize>> =
        keep.iter().map(|&v| adj[v].iter().filter(|&&u| index[u] != NONE).map(|&u| index[u]).collect()).collect();
    let sub = max_cardinality_matching(&reduced);
    if sub.iter().any(|m| m.is_none()) {
        return Err(Error::PreconditionViolated(format!("no perfect matching contains edge {e}")));
    }
    let mut mate = vec![NONE; total];
    mate[fa] = fb;
    mate[fb] = fa;
    for (i, m) in sub.iter().enumerate() {
        mate[keep[i]] = keep[m.expect("perfect")];
    }
    let mut edges = Vec::new();
    for (&(x, y), &k) in &multiplicity {
        let chosen = if k == 1 {
            mate[x] == y
        } else {
            let (v, w) = gadgets[&(x, y)];
            (mate[x] == v && mate[y] == w) || (mate[x] == w && mate[y] == v)
        };
        if chosen {
            let id = if key == (x, y) { e } else { lowest_edge_between(g, x, y) };
            edges.push(id);
        }
    }
    let m = Matching::new(edges);
    if !m.is_perfect(g) || !m.contains(e) {
        return Err(Error::PreconditionViolated(format!("gadget translation lost edge {e}")));
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;
    use rand::{Rng, SeedableRng};

    fn petersen() -> WeightedMultigraph {
        let mut pairs = Vec::new();
        for i in 0..5 {
            pairs.push((i, (i + 1) % 5));
            pairs.push((i, i + 5));
            pairs.push((5 + i, 5 + (i + 2) % 5));
        }
        WeightedMultigraph::unit(10, &pairs).unwrap()
    }

    /// Reference: every subset of edges that forms a matching.
    fn brute_force_max(g: &WeightedMultigraph) -> Rational {
        let m = g.m();
        let mut best = zero();
        for mask in 0u32..(1 << m) {
            let ids: Vec<EdgeId> = (0..m).filter(|i| mask >> i & 1 == 1).map(|i| g.edges()[i].id).collect();
            let cand = Matching::new(ids);
            if cand.is_valid(g) {
                best = best.max(cand.weight(g));
            }
        }
        best
    }

    #[test]
    fn weighted_examples() {
        let tri = WeightedMultigraph::from_edges(3, [(0, 1, int(1)), (1, 2, int(2)), (2, 0, int(3))]).unwrap();
        assert_eq!(max_weight_matching(&tri).weight(&tri), int(3));
        let p4 = WeightedMultigraph::from_edges(4, [(0, 1, int(1)), (1, 2, int(5)), (2, 3, int(1))]).unwrap();
        assert_eq!(max_weight_matching(&p4).weight(&p4), int(5));
    }

    #[test]
    fn weighted_matches_brute_force() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..150 {
            let n = rng.gen_range(1..=9);
            let mut g = WeightedMultigraph::new(n);
            for _ in 0..rng.gen_range(0..=12) {
                let (u, v) = (rng.gen_range(0..n), rng.gen_range(0..n));
                if u != v {
                    g.add_edge(u, v, crate::rational::frac(rng.gen_range(0..=40), 4)).unwrap();
                }
            }
            let m = max_weight_matching(&g);
            assert!(m.is_valid(&g));
            assert_eq!(m.weight(&g), brute_force_max(&g));
        }
    }

    #[test]
    fn perfect_matching_examples() {
        let p3 = WeightedMultigraph::unit(3, &[(0, 1), (1, 2)]).unwrap();
        assert!(perfect_matching(&p3).is_none());
        let c6 = WeightedMultigraph::unit(6, &(0..6).map(|i| (i, (i + 1) % 6)).collect::<Vec<_>>()).unwrap();
        let m = perfect_matching(&c6).unwrap();
        assert!(m.is_perfect(&c6));
        assert_eq!(m.len(), 3);
        let p = petersen();
        assert_eq!(perfect_matching(&p).unwrap().len(), 5);
    }

    #[test]
    fn blossom_cardinality_matches_brute_force() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let n = rng.gen_range(1..=10);
            let mut g = WeightedMultigraph::new(n);
            for _ in 0..rng.gen_range(0..=14) {
                let (u, v) = (rng.gen_range(0..n), rng.gen_range(0..n));
                if u != v && !g.adjacent(u, v) {
                    g.add_edge(u, v, int(1)).unwrap();
                }
            }
            let mate = max_cardinality_matching(&simple_adjacency(&g));
            let size = mate.iter().flatten().count() / 2;
            // unit weights: maximum weight equals maximum cardinality
            assert_eq!(int(size as i64), brute_force_max(&g));
        }
    }

    #[test]
    fn forced_examples() {
        let k4 = WeightedMultigraph::unit(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        for e in 0..6 {
            let m = forced_perfect_matching(&k4, e).unwrap();
            assert!(m.contains(e) && m.is_perfect(&k4));
        }
        let k33 = WeightedMultigraph::unit(6, &[(0, 3), (0, 4), (0, 5), (1, 3), (1, 4), (1, 5), (2, 3), (2, 4), (2, 5)])
            .unwrap();
        for e in 0..9 {
            assert!(forced_perfect_matching(&k33, e).unwrap().contains(e));
        }
        let p = petersen();
        for e in 0..15 {
            let m = forced_perfect_matching(&p, e).unwrap();
            assert!(m.contains(e) && m.is_perfect(&p));
        }
    }

    #[test]
    fn forced_through_doubled_edges() {
        // a 4-cycle with two opposite edges doubled is cubic and bridgeless
        let g = WeightedMultigraph::unit(4, &[(0, 1), (0, 1), (1, 2), (2, 3), (2, 3), (3, 0)]).unwrap();
        for e in 0..6 {
            let m = forced_perfect_matching(&g, e).unwrap();
            assert!(m.contains(e) && m.is_perfect(&g));
        }
        let triple = WeightedMultigraph::unit(2, &[(0, 1), (0, 1), (0, 1)]).unwrap();
        assert_eq!(forced_perfect_matching(&triple, 1).unwrap().edges, vec![1]);
    }

    #[test]
    fn forced_rejects_bridged_input() {
        // two K4s, each with one edge subdivided, joined at the subdivision vertices
        let mut pairs = Vec::new();
        for b in [0, 5] {
            pairs.extend([(b, b + 2), (b, b + 3), (b + 1, b + 2), (b + 1, b + 3), (b + 2, b + 3), (b, b + 4), (b + 1, b + 4)]);
        }
        pairs.push((4, 9));
        let g = WeightedMultigraph::unit(10, &pairs).unwrap();
        assert!(matches!(forced_perfect_matching(&g, 0), Err(Error::PreconditionViolated(_))));
        let c4 = WeightedMultigraph::unit(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        assert!(forced_perfect_matching(&c4, 0).is_err());
    }
}
