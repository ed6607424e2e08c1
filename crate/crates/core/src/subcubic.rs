//! The two-thirds guarantee for graphs of maximum degree three, built on
//! forest bisections of cubic multigraphs.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::family::{forest_to_family, round_to_bisection, BalancedBlock, BalancedFamily, RoundingMode};
use crate::graph::{Bisection, EdgeId, VertexId, WeightedMultigraph};
use crate::rational::{frac, to_text, zero, Rational};
use crate::solution::{Method, Solution};

const MOVES_PER_VERTEX: usize = 50;
const RESTARTS: usize = 200;
const EXHAUSTIVE_LIMIT: usize = 16;
const ATTEMPTS: u64 = 20;

/// Evidence that a forest bisection has the shape the rounding step needs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ForestCertificate {
    /// Largest degree inside side X.
    pub max_degree_x: usize,
    /// Number of edges inside side Y.
    pub edges_y: usize,
    /// Number of edges between the sides.
    pub cut_size: usize,
    pub restarts: usize,
}

fn side_degree(h: &WeightedMultigraph, in_x: &[bool], v: VertexId) -> usize {
    h.neighbors(v).filter(|&u| in_x[u] == in_x[v]).count()
}

fn side_max_degree(h: &WeightedMultigraph, in_x: &[bool], side: bool) -> usize {
    (0..h.n()).filter(|&v| in_x[v] == side).map(|v| side_degree(h, in_x, v)).max().unwrap_or(0)
}

fn side_edges(h: &WeightedMultigraph, in_x: &[bool], side: bool) -> Vec<EdgeId> {
    h.edges().iter().filter(|e| in_x[e.u] == side && in_x[e.v] == side).map(|e| e.id).collect()
}

/// True when the side induces a forest; a pair of parallel edges is a cycle.
fn side_is_forest(h: &WeightedMultigraph, in_x: &[bool], side: bool) -> bool {
    let mut parent: Vec<usize> = (0..h.n()).collect();
    fn root(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for e in h.edges() {
        if in_x[e.u] == side && in_x[e.v] == side {
            let (a, b) = (root(&mut parent, e.u), root(&mut parent, e.v));
            if a == b {
                return false;
            }
            parent[a] = b;
        }
    }
    true
}

fn both_forests(h: &WeightedMultigraph, in_x: &[bool]) -> bool {
    side_is_forest(h, in_x, true) && side_is_forest(h, in_x, false)
}

/// Vertices of the 2-core of a side: those lying on, or between, cycles.
fn side_core(h: &WeightedMultigraph, in_x: &[bool], side: bool) -> Vec<VertexId> {
    let mut deg: Vec<usize> = (0..h.n()).map(|v| if in_x[v] == side { side_degree(h, in_x, v) } else { 0 }).collect();
    let mut alive: Vec<bool> = (0..h.n()).map(|v| in_x[v] == side).collect();
    let mut stack: Vec<VertexId> = (0..h.n()).filter(|&v| alive[v] && deg[v] < 2).collect();
    while let Some(v) = stack.pop() {
        if !alive[v] {
            continue;
        }
        alive[v] = false;
        for u in h.neighbors(v) {
            if alive[u] {
                deg[u] -= 1;
                if deg[u] < 2 {
                    stack.push(u);
                }
            }
        }
    }
    (0..h.n()).filter(|&v| alive[v]).collect()
}

fn swap(in_x: &mut [bool], a: VertexId, b: VertexId) {
    in_x.swap(a, b);
}

/// Random balanced start repaired by swapping a cycle vertex of largest
/// in-side degree with a vertex of the other side that keeps that side acyclic.
fn initial_forest_bisection(h: &WeightedMultigraph, rng: &mut ChaCha8Rng) -> Result<(Vec<bool>, usize)> {
    let n = h.n();
    let mut order: Vec<VertexId> = (0..n).collect();
    for restart in 0..RESTARTS {
        order.shuffle(rng);
        let mut in_x = vec![false; n];
        for &v in &order[..n / 2] {
            in_x[v] = true;
        }
        for _ in 0..MOVES_PER_VERTEX * n.max(1) {
            let cyclic_side = if !side_is_forest(h, &in_x, true) {
                true
            } else if !side_is_forest(h, &in_x, false) {
                false
            } else {
                return Ok((in_x, restart));
            };
            let core = side_core(h, &in_x, cyclic_side);
            let v = *core
                .iter()
                .max_by_key(|&&v| (side_degree(h, &in_x, v), std::cmp::Reverse(v)))
                .expect("a cyclic side has a non-empty core");
            let others: Vec<VertexId> = (0..n).filter(|&u| in_x[u] != cyclic_side).collect();
            let keeps_forest: Vec<VertexId> = others
                .iter()
                .copied()
                .filter(|&u| {
                    swap(&mut in_x, v, u);
                    let ok = side_is_forest(h, &in_x, !cyclic_side);
                    swap(&mut in_x, v, u);
                    ok
                })
                .collect();
            let pool = if keeps_forest.is_empty() { &others } else { &keeps_forest };
            let u = pool[rng.gen_range(0..pool.len())];
            swap(&mut in_x, v, u);
        }
    }
    if n <= EXHAUSTIVE_LIMIT {
        for mask in 0u32..(1 << n) {
            if mask.count_ones() as usize != n / 2 || mask & 1 == 0 {
                continue;
            }
            let in_x: Vec<bool> = (0..n).map(|v| mask >> v & 1 == 1).collect();
            if both_forests(h, &in_x) {
                return Ok((in_x, RESTARTS));
            }
        }
    }
    Err(Error::InitializationExhausted)
}

/// Applies cut-increasing single-pair swaps that keep both sides acyclic
/// until none is left.
fn improve(h: &WeightedMultigraph, in_x: &mut [bool]) {
    let n = h.n();
    loop {
        let mut improved = false;
        'scan: for v in 0..n {
            if !in_x[v] {
                continue;
            }
            for u in 0..n {
                if in_x[u] {
                    continue;
                }
                let dxv = side_degree(h, in_x, v) as i64;
                let dyu = side_degree(h, in_x, u) as i64;
                let mult = h.edges_between(u, v).len() as i64;
                let gain = (2 * dxv - 3) + (2 * dyu - 3) + 2 * mult;
                if gain <= 0 {
                    continue;
                }
                swap(in_x, u, v);
                if both_forests(h, in_x) {
                    improved = true;
                    break 'scan;
                }
                swap(in_x, u, v);
            }
        }
        if !improved {
            return;
        }
    }
}

fn certify(h: &WeightedMultigraph, in_x: &[bool], restarts: usize) -> Option<ForestCertificate> {
    let cert = ForestCertificate {
        max_degree_x: side_max_degree(h, in_x, true),
        edges_y: side_edges(h, in_x, false).len(),
        cut_size: h.cut_size(in_x),
        restarts,
    };
    let y_size = in_x.iter().filter(|&&b| !b).count();
    let ok = both_forests(h, in_x) && cert.max_degree_x <= 1 && 2 * cert.edges_y <= y_size;
    ok.then_some(cert)
}

/// A bisection of a cubic multigraph whose sides both induce forests, closed
/// under improving forest-preserving swaps, and labelled so that side X has
/// maximum degree at most one and side Y spans at most `|Y|/2` edges.
pub fn forest_bisection(h: &WeightedMultigraph, seed: u64) -> Result<(Bisection, ForestCertificate)> {
    if h.n() % 2 == 1 || (0..h.n()).any(|v| h.degree(v) != 3) {
        return Err(Error::PreconditionViolated("forest bisection needs a cubic multigraph of even order".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut restarts = 0;
    for _ in 0..ATTEMPTS {
        let (mut in_x, used) = initial_forest_bisection(h, &mut rng)?;
        restarts += used;
        improve(h, &mut in_x);
        if side_max_degree(h, &in_x, true) > side_max_degree(h, &in_x, false) {
            for b in in_x.iter_mut() {
                *b = !*b;
            }
        }
        if let Some(cert) = certify(h, &in_x, restarts) {
            return Ok((Bisection::from_mask(h, &in_x), cert));
        }
    }
    Err(Error::InitializationExhausted)
}

fn two_thirds(w: &Rational) -> Rational {
    frac(2, 3) * w
}

fn pair_blocks(h: &WeightedMultigraph, ids: &[EdgeId]) -> Vec<BalancedBlock> {
    ids.iter()
        .map(|&id| {
            let e = h.edge(id);
            BalancedBlock::pair(e.u, e.v)
        })
        .collect()
}

/// Cubic case: keep the forest bisection if it is heavy enough, otherwise round
/// the family made of side Y's forest and side X's matching.
fn cubic_case(h: &WeightedMultigraph, seed: u64) -> Result<Bisection> {
    let (b, _) = forest_bisection(h, seed)?;
    let w = h.total_weight();
    if b.cut_weight >= two_thirds(&w) {
        return Ok(b);
    }
    let in_x = b.mask(h.n());
    let mut fam = forest_to_family(h, &b.side_y, &side_edges(h, &in_x, false))?;
    fam.blocks.extend(pair_blocks(h, &side_edges(h, &in_x, true)));
    round_to_bisection(h, &fam, RoundingMode::Derandomized)
}

/// Family on `h` from a forest bisection of `h + {x, y}`: side X minus its
/// helper is a matching, side Y minus its helper a small forest.
fn rounded_without_helpers(h: &WeightedMultigraph, big: &WeightedMultigraph, in_x: &[bool]) -> Result<Bisection> {
    let n = h.n();
    let keep_x: Vec<bool> = (0..big.n()).map(|v| v < n && in_x[v]).collect();
    let keep_y: Vec<bool> = (0..big.n()).map(|v| v < n && !in_x[v]).collect();
    let y_vertices: Vec<VertexId> = (0..n).filter(|&v| keep_y[v]).collect();
    let mut fam = forest_to_family(h, &y_vertices, &big.induced_edge_ids(&keep_y))?;
    fam.blocks.extend(pair_blocks(h, &big.induced_edge_ids(&keep_x)));
    round_to_bisection(h, &fam, RoundingMode::Derandomized)
}

enum Attempt {
    Done(Bisection),
    Retry(String),
}

/// One vertex `z` of degree one: attach helpers `x, y` with a double edge
/// `xy` and edges `xz, yz`, all of weight zero, and repair as needed.
fn degree_one_case(h: &WeightedMultigraph, z: VertexId, seed: u64) -> Result<Bisection> {
    let mut big = h.clone();
    let x = big.add_vertex();
    let y = big.add_vertex();
    for (a, b) in [(x, y), (x, y), (x, z), (y, z)] {
        big.add_edge(a, b, zero())?;
    }
    let w = h.total_weight();
    let mut last = String::new();
    for attempt in 0..ATTEMPTS {
        match degree_one_attempt(h, &big, z, [x, y], &w, seed.wrapping_add(attempt.wrapping_mul(0x9E37_79B9)))? {
            Attempt::Done(b) => return Ok(b),
            Attempt::Retry(why) => last = why,
        }
    }
    Err(Error::AssertionFailed(format!("degree-one repair kept failing: {last}")))
}

fn degree_one_attempt(
    h: &WeightedMultigraph,
    big: &WeightedMultigraph,
    z: VertexId,
    helpers: [VertexId; 2],
    w: &Rational,
    seed: u64,
) -> Result<Attempt> {
    let (b, _) = forest_bisection(big, seed)?;
    let mut in_x = b.mask(big.n());
    // The helpers are symmetric; name `x` the one on the low-degree side X.
    let (x, y) = if in_x[helpers[0]] { (helpers[0], helpers[1]) } else { (helpers[1], helpers[0]) };
    if in_x[x] == in_x[y] {
        return Ok(Attempt::Retry("helpers on one side".into()));
    }
    if b.cut_weight >= two_thirds(w) {
        return Ok(Attempt::Done(b));
    }
    if !in_x[z] {
        return rounded_without_helpers(h, big, &in_x).map(Attempt::Done);
    }
    // z lies in X with x
    let y_degree = side_max_degree(big, &in_x, false);
    if y_degree <= 1 {
        let mut ids = big.induced_edge_ids(&(0..big.n()).map(|v| v != x && v != y).collect::<Vec<_>>());
        ids.retain(|&id| {
            let e = big.edge(id);
            in_x[e.u] == in_x[e.v]
        });
        let fam = BalancedFamily::new(pair_blocks(h, &ids));
        return round_to_bisection(h, &fam, RoundingMode::Derandomized).map(Attempt::Done);
    }
    if y_degree == 3 {
        return Ok(Attempt::Retry("side Y has a vertex of degree 3".into()));
    }
    let wv = (0..big.n()).find(|&v| !in_x[v] && side_degree(big, &in_x, v) == 2).expect("degree two exists");
    let w_out = big.neighbors(wv).find(|&u| in_x[u]).expect("one neighbour across");
    if side_degree(big, &in_x, w_out) != 0 {
        return Ok(Attempt::Retry(format!("neighbour {w_out} of {wv} has a neighbour on its side")));
    }
    let before = big.cut_size(&in_x);
    swap(&mut in_x, wv, z);
    if big.cut_size(&in_x) < before {
        return Ok(Attempt::Retry("swap lowered the cut".into()));
    }
    if certify(big, &in_x, 0).is_none() || in_x[z] || !in_x[x] {
        return Ok(Attempt::Retry("swap broke the forest conditions".into()));
    }
    let swapped = Bisection::from_mask(big, &in_x);
    if swapped.cut_weight >= two_thirds(w) {
        return Ok(Attempt::Done(swapped));
    }
    rounded_without_helpers(h, big, &in_x).map(Attempt::Done)
}

/// Bisection of a graph with maximum degree three and weight at least
/// `2/3·w(g)`. Weight-zero edges first join deficient vertices (lowest ids
/// first) until at most one vertex has degree below three.
pub fn solve_subcubic(g: &WeightedMultigraph, seed: u64) -> Result<Solution> {
    if g.max_degree() > 3 {
        return Err(Error::PreconditionViolated(format!("maximum degree {} exceeds 3", g.max_degree())));
    }
    let bisection = subcubic_bisection(g, seed)?;
    let bound = two_thirds(&g.total_weight());
    if !bisection.is_balanced() || bisection.cut_weight < bound {
        return Err(Error::AssertionFailed(format!(
            "subcubic cut {} below {}",
            to_text(&bisection.cut_weight),
            to_text(&bound)
        )));
    }
    Ok(Solution::new(Method::Subcubic, bisection, bound))
}

fn subcubic_bisection(g: &WeightedMultigraph, seed: u64) -> Result<Bisection> {
    let mut h = g.clone();
    loop {
        let deficient: Vec<VertexId> = (0..h.n()).filter(|&v| h.degree(v) < 3).collect();
        if deficient.len() < 2 {
            break;
        }
        h.add_edge(deficient[0], deficient[1], zero())?;
    }
    let deficient: Vec<VertexId> = (0..h.n()).filter(|&v| h.degree(v) < 3).collect();
    let b = match deficient.as_slice() {
        [] => cubic_case(&h, seed)?,
        &[z] => match h.degree(z) {
            0 => {
                let keep: Vec<VertexId> = (0..h.n()).filter(|&v| v != z).collect();
                let (rest, _) = h.induced_subgraph(&keep);
                let inner = cubic_case(&rest, seed)?;
                let mut in_x = vec![false; h.n()];
                for &v in &inner.side_x {
                    in_x[keep[v]] = true;
                }
                in_x[z] = inner.side_x.len() <= inner.side_y.len();
                Bisection::from_mask(&h, &in_x)
            }
            1 => degree_one_case(&h, z, seed)?,
            _ => {
                let mut bigger = h.clone();
                let zp = bigger.add_vertex();
                bigger.add_edge(z, zp, zero())?;
                degree_one_case(&bigger, zp, seed)?
            }
        },
        _ => unreachable!("padding leaves at most one deficient vertex"),
    };
    Ok(b.restrict(g))
}

#[cfg(test)]
mod tests {
    use super::*;
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

    fn k4() -> WeightedMultigraph {
        WeightedMultigraph::unit(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap()
    }

    fn check_certificate(h: &WeightedMultigraph, b: &Bisection) {
        let in_x = b.mask(h.n());
        assert!(both_forests(h, &in_x));
        assert!(side_max_degree(h, &in_x, true) <= 1);
        assert!(2 * side_edges(h, &in_x, false).len() <= b.side_y.len());
        assert!(b.is_balanced());
    }

    #[test]
    fn forest_examples() {
        let (b, cert) = forest_bisection(&k4(), 1).unwrap();
        assert_eq!(cert.cut_size, 4);
        check_certificate(&k4(), &b);
        let k33 = WeightedMultigraph::unit(6, &[(0, 3), (0, 4), (0, 5), (1, 3), (1, 4), (1, 5), (2, 3), (2, 4), (2, 5)])
            .unwrap();
        let (b, cert) = forest_bisection(&k33, 1).unwrap();
        assert_eq!(cert.cut_size, 9);
        check_certificate(&k33, &b);
        let p = petersen();
        for seed in 0..10 {
            let (b, cert) = forest_bisection(&p, seed).unwrap();
            check_certificate(&p, &b);
            assert!(cert.cut_size >= 10);
        }
    }

    #[test]
    fn forest_bisection_handles_parallel_edges() {
        let g = WeightedMultigraph::unit(4, &[(0, 1), (0, 1), (1, 2), (2, 3), (2, 3), (3, 0)]).unwrap();
        let (b, _) = forest_bisection(&g, 3).unwrap();
        check_certificate(&g, &b);
        assert!(forest_bisection(&WeightedMultigraph::unit(2, &[(0, 1)]).unwrap(), 0).is_err());
    }

    #[test]
    fn subcubic_examples() {
        assert!(solve_subcubic(&k4(), 0).unwrap().bisection.cut_weight >= int(4));
        let claw = WeightedMultigraph::unit(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        assert_eq!(solve_subcubic(&claw, 0).unwrap().bisection.cut_weight, int(2));
        assert!(solve_subcubic(&petersen(), 0).unwrap().bisection.cut_weight >= int(10));
    }

    #[test]
    fn tiny_and_degenerate_inputs() {
        for n in 0..6 {
            let s = solve_subcubic(&WeightedMultigraph::new(n), 0).unwrap();
            assert!(s.bisection.is_balanced());
            assert_eq!(s.bisection.side_x.len() + s.bisection.side_y.len(), n);
        }
        let edge = WeightedMultigraph::unit(2, &[(0, 1)]).unwrap();
        assert_eq!(solve_subcubic(&edge, 0).unwrap().bisection.cut_weight, int(1));
        let p3 = WeightedMultigraph::unit(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(solve_subcubic(&p3, 0).unwrap().bisection.cut_weight, int(2));
        let k14 = WeightedMultigraph::unit(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap();
        assert!(solve_subcubic(&k14, 0).is_err());
    }

    #[test]
    fn random_weighted_subcubic_graphs() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..150 {
            let n = rng.gen_range(1..=16);
            let mut g = WeightedMultigraph::new(n);
            for _ in 0..rng.gen_range(0..=2 * n) {
                let (u, v) = (rng.gen_range(0..n), rng.gen_range(0..n));
                if u != v && !g.adjacent(u, v) && g.degree(u) < 3 && g.degree(v) < 3 {
                    g.add_edge(u, v, frac(rng.gen_range(0..=1000), 100)).unwrap();
                }
            }
            let s = solve_subcubic(&g, rng.gen()).unwrap();
            assert!(s.meets_bound());
            assert!(s.bisection.is_balanced());
            assert_eq!(s.bisection.cut_weight, g.cut_weight(&s.bisection.mask(n)));
        }
    }
}
