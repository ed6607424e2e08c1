//! Balanced families: vertex-disjoint blocks whose two sides are independent
//! and of equal size. Any such family rounds to a bisection cutting at least
//! half the remaining weight plus everything inside the blocks.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Bisection, EdgeId, VertexId, WeightedMultigraph};
use crate::rational::{zero, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BalancedBlock {
    pub side_a: Vec<VertexId>,
    pub side_b: Vec<VertexId>,
}

impl BalancedBlock {
    pub fn new(mut side_a: Vec<VertexId>, mut side_b: Vec<VertexId>) -> Self {
        side_a.sort_unstable();
        side_b.sort_unstable();
        BalancedBlock { side_a, side_b }
    }

    pub fn pair(a: VertexId, b: VertexId) -> Self {
        BalancedBlock { side_a: vec![a], side_b: vec![b] }
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.side_a.iter().chain(self.side_b.iter()).copied()
    }

    pub fn lowest_vertex(&self) -> VertexId {
        self.vertices().min().unwrap_or(usize::MAX)
    }

    pub fn size(&self) -> usize {
        self.side_a.len() + self.side_b.len()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BalancedFamily {
    pub blocks: Vec<BalancedBlock>,
}

impl BalancedFamily {
    pub fn new(blocks: Vec<BalancedBlock>) -> Self {
        BalancedFamily { blocks }
    }

    pub fn covered(&self, n: usize) -> Vec<bool> {
        let mut mask = vec![false; n];
        for v in self.blocks.iter().flat_map(|b| b.vertices()) {
            mask[v] = true;
        }
        mask
    }

    pub fn extend(&mut self, other: BalancedFamily) {
        self.blocks.extend(other.blocks);
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyDiagnostics {
    pub problems: Vec<String>,
}

impl FamilyDiagnostics {
    pub fn is_valid(&self) -> bool {
        self.problems.is_empty()
    }
}

pub fn validate_family(g: &WeightedMultigraph, fam: &BalancedFamily) -> FamilyDiagnostics {
    let mut problems = Vec::new();
    let mut owner: Vec<Option<usize>> = vec![None; g.n()];
    let mut side = vec![0u8; g.n()];
    for (i, block) in fam.blocks.iter().enumerate() {
        if block.side_a.len() != block.side_b.len() {
            problems.push(format!("block {i}: sides have sizes {} and {}", block.side_a.len(), block.side_b.len()));
        }
        for (tag, part) in [(1u8, &block.side_a), (2u8, &block.side_b)] {
            for &v in part {
                if v >= g.n() {
                    problems.push(format!("block {i}: vertex {v} is not in the graph"));
                    continue;
                }
                match owner[v] {
                    Some(j) if j == i => problems.push(format!("block {i}: vertex {v} appears twice")),
                    Some(j) => problems.push(format!("blocks {j} and {i} share vertex {v}")),
                    None => {
                        owner[v] = Some(i);
                        side[v] = tag;
                    }
                }
            }
        }
    }
    for e in g.edges() {
        if let (Some(a), Some(b)) = (owner[e.u], owner[e.v]) {
            if a == b && side[e.u] == side[e.v] {
                problems.push(format!("block {a}: edge {} joins {} and {} on the same side", e.id, e.u, e.v));
            }
        }
    }
    FamilyDiagnostics { problems }
}

fn ensure_valid(g: &WeightedMultigraph, fam: &BalancedFamily) -> Result<()> {
    let diag = validate_family(g, fam);
    if diag.is_valid() {
        Ok(())
    } else {
        Err(Error::InvalidFamily(diag.problems.join("; ")))
    }
}

/// Weight of host edges inside blocks, without validation. Every edge inside
/// a valid block crosses it.
pub fn family_weight_unchecked(g: &WeightedMultigraph, fam: &BalancedFamily) -> Rational {
    let mut owner: Vec<Option<(usize, bool)>> = vec![None; g.n()];
    for (i, block) in fam.blocks.iter().enumerate() {
        for &v in &block.side_a {
            owner[v] = Some((i, true));
        }
        for &v in &block.side_b {
            owner[v] = Some((i, false));
        }
    }
    g.edges()
        .iter()
        .filter(|e| matches!((owner[e.u], owner[e.v]), (Some((a, sa)), Some((b, sb))) if a == b && sa != sb))
        .map(|e| e.weight.clone())
        .sum()
}

pub fn family_weight(g: &WeightedMultigraph, fam: &BalancedFamily) -> Result<Rational> {
    ensure_valid(g, fam)?;
    Ok(family_weight_unchecked(g, fam))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RoundingMode {
    Derandomized,
    SeededRandom(u64),
}

/// Turns a balanced family into a bisection. Uncovered vertices are first
/// paired in ascending order; an odd one out goes to side X. Blocks are then
/// oriented in ascending order of their lowest vertex, either by a fair coin
/// or by the orientation with the larger conditional expectation (ties put
/// `side_a` in X). Derandomized output cuts at least `(w(G) + w(B)) / 2`.
pub fn round_to_bisection(g: &WeightedMultigraph, fam: &BalancedFamily, mode: RoundingMode) -> Result<Bisection> {
    ensure_valid(g, fam)?;
    let n = g.n();
    let covered = fam.covered(n);
    let loose: Vec<VertexId> = (0..n).filter(|&v| !covered[v]).collect();
    let mut blocks: Vec<BalancedBlock> = fam.blocks.clone();
    for pair in loose.chunks(2) {
        if let [a, b] = *pair {
            blocks.push(BalancedBlock::pair(a, b));
        }
    }
    blocks.sort_by_key(|b| b.lowest_vertex());
    let mut in_x: Vec<Option<bool>> = vec![None; n];
    if loose.len() % 2 == 1 {
        in_x[*loose.last().expect("odd count")] = Some(true);
    }
    let mut rng = match mode {
        RoundingMode::SeededRandom(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        RoundingMode::Derandomized => None,
    };
    for block in &blocks {
        let a_in_x = match rng.as_mut() {
            Some(r) => r.gen_bool(0.5),
            None => {
                // Gain of each orientation against already placed vertices;
                // edges to unplaced vertices count one half either way.
                let mut gain_ax = zero();
                let mut gain_bx = zero();
                for (&v, a_side) in block.side_a.iter().map(|v| (v, true)).chain(block.side_b.iter().map(|v| (v, false))) {
                    for &e in g.incident(v) {
                        let u = g.edge(e).other(v);
                        if let Some(ux) = in_x[u] {
                            // v lands in X under "a in X" iff v is on side a
                            if ux != a_side {
                                gain_ax += g.weight(e);
                            } else {
                                gain_bx += g.weight(e);
                            }
                        }
                    }
                }
                gain_ax >= gain_bx
            }
        };
        for &v in &block.side_a {
            in_x[v] = Some(a_in_x);
        }
        for &v in &block.side_b {
            in_x[v] = Some(!a_in_x);
        }
    }
    let mask: Vec<bool> = in_x.into_iter().map(|s| s.expect("every vertex placed")).collect();
    Ok(Bisection::from_mask(g, &mask))
}

/// Lower bound certified by rounding: `(w(G) + w(B)) / 2`.
pub fn rounding_bound(g: &WeightedMultigraph, fam: &BalancedFamily) -> Result<Rational> {
    Ok((g.total_weight() + family_weight(g, fam)?) / Rational::from_integer(2.into()))
}

/// Splits `set` into two equal independent sides of `g[set]`, if possible.
/// Each component of `g[set]` is 2-coloured; component orientations are then
/// chosen to balance the sides, preferring the colouring as found.
pub fn balanced_bipartition(g: &WeightedMultigraph, set: &[VertexId]) -> Option<BalancedBlock> {
    if set.len() % 2 == 1 {
        return None;
    }
    let mut inset = BTreeMap::new();
    for (i, &v) in set.iter().enumerate() {
        inset.insert(v, i);
    }
    let mut colour: Vec<Option<bool>> = vec![None; set.len()];
    let mut comps: Vec<(Vec<VertexId>, Vec<VertexId>)> = Vec::new();
    for s in 0..set.len() {
        if colour[s].is_some() {
            continue;
        }
        colour[s] = Some(true);
        let mut parts = (vec![set[s]], Vec::new());
        let mut stack = vec![s];
        while let Some(i) = stack.pop() {
            let c = colour[i].expect("coloured");
            for u in g.neighbors(set[i]) {
                let Some(&j) = inset.get(&u) else { continue };
                match colour[j] {
                    Some(cj) if cj == c => return None,
                    Some(_) => {}
                    None => {
                        colour[j] = Some(!c);
                        if c {
                            parts.1.push(u);
                        } else {
                            parts.0.push(u);
                        }
                        stack.push(j);
                    }
                }
            }
        }
        comps.push(parts);
    }
    // reachable[i] maps a running difference |A|-|B| after i components to the
    // orientation that first reached it.
    let mut reachable: Vec<BTreeMap<i64, bool>> = vec![BTreeMap::new(); comps.len() + 1];
    reachable[0].insert(0, false);
    for (i, (a, b)) in comps.iter().enumerate() {
        let d = a.len() as i64 - b.len() as i64;
        let prev: Vec<i64> = reachable[i].keys().copied().collect();
        for diff in prev {
            reachable[i + 1].entry(diff + d).or_insert(false);
            reachable[i + 1].entry(diff - d).or_insert(true);
        }
    }
    if !reachable[comps.len()].contains_key(&0) {
        return None;
    }
    let mut flips = vec![false; comps.len()];
    let mut target = 0i64;
    for i in (0..comps.len()).rev() {
        let (a, b) = &comps[i];
        let d = a.len() as i64 - b.len() as i64;
        // Prefer the unflipped orientation when both reach the target.
        if reachable[i].contains_key(&(target - d)) {
            target -= d;
        } else {
            flips[i] = true;
            target += d;
        }
    }
    let mut side_a = Vec::new();
    let mut side_b = Vec::new();
    for ((a, b), flip) in comps.into_iter().zip(flips) {
        if flip {
            side_a.extend(b);
            side_b.extend(a);
        } else {
            side_a.extend(a);
            side_b.extend(b);
        }
    }
    Some(BalancedBlock::new(side_a, side_b))
}

/// Builds a family covering every edge of the forest `forest` on vertex set
/// `vertices`: one block per tree, its smaller colour class padded with
/// vertices that carry no forest edge.
pub fn forest_to_family(g: &WeightedMultigraph, vertices: &[VertexId], forest: &[EdgeId]) -> Result<BalancedFamily> {
    if 2 * forest.len() > vertices.len() {
        return Err(Error::TooManyEdges { edges: forest.len(), vertices: vertices.len() });
    }
    let mut local = BTreeMap::new();
    for (i, &v) in vertices.iter().enumerate() {
        local.insert(v, i);
    }
    let k = vertices.len();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); k];
    let mut parent: Vec<usize> = (0..k).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let next = p[y];
            p[y] = r;
            y = next;
        }
        r
    }
    for &id in forest {
        if !g.has_edge_id(id) {
            return Err(Error::PreconditionViolated(format!("edge {id} is not in the graph")));
        }
        let e = g.edge(id);
        let (Some(&a), Some(&b)) = (local.get(&e.u), local.get(&e.v)) else {
            return Err(Error::PreconditionViolated(format!("edge {id} leaves the forest's vertex set")));
        };
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra == rb {
            return Err(Error::PreconditionViolated(format!("edge {id} closes a cycle")));
        }
        parent[ra] = rb;
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut pads: Vec<VertexId> = (0..k).filter(|&i| adj[i].is_empty()).map(|i| vertices[i]).collect();
    pads.sort_unstable();
    pads.reverse();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by_key(|&i| vertices[i]);
    let mut colour: Vec<Option<bool>> = vec![None; k];
    let mut blocks = Vec::new();
    for &s in &order {
        if colour[s].is_some() || adj[s].is_empty() {
            continue;
        }
        colour[s] = Some(true);
        let (mut one, mut two) = (vec![vertices[s]], Vec::new());
        let mut stack = vec![s];
        while let Some(i) = stack.pop() {
            for &j in &adj[i] {
                if colour[j].is_none() {
                    let c = !colour[i].expect("coloured");
                    colour[j] = Some(c);
                    if c {
                        one.push(vertices[j]);
                    } else {
                        two.push(vertices[j]);
                    }
                    stack.push(j);
                }
            }
        }
        let (mut large, mut small) = if one.len() >= two.len() { (one, two) } else { (two, one) };
        while small.len() < large.len() {
            let pad = pads.pop().ok_or(Error::TooManyEdges { edges: forest.len(), vertices: vertices.len() })?;
            small.push(pad);
        }
        large.sort_unstable();
        blocks.push(BalancedBlock::new(large, small));
    }
    let fam = BalancedFamily::new(blocks);
    ensure_valid(g, &fam)?;
    Ok(fam)
}
