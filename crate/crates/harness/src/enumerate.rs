//! Exhaustive enumeration of small simple graphs up to isomorphism.
//!
//! Graphs are adjacency bitmasks on at most 16 vertices. Isomorphism classes
//! are told apart by a canonical form: colour refinement followed by
//! individualisation of each vertex in the first non-trivial cell, keeping
//! the lexicographically smallest relabelled adjacency matrix.

use std::collections::BTreeSet;

use bisect_core::rational::one;
use bisect_core::WeightedMultigraph;

pub type Adjacency = Vec<u16>;

fn refine(adj: &[u16], mut colour: Vec<usize>) -> Vec<usize> {
    let n = adj.len();
    loop {
        let sig: Vec<(usize, Vec<usize>)> = (0..n)
            .map(|v| {
                let mut nb: Vec<usize> = (0..n).filter(|&u| adj[v] >> u & 1 == 1).map(|u| colour[u]).collect();
                nb.sort_unstable();
                (colour[v], nb)
            })
            .collect();
        let mut distinct: Vec<&(usize, Vec<usize>)> = sig.iter().collect();
        distinct.sort();
        distinct.dedup();
        let next: Vec<usize> = sig.iter().map(|s| distinct.binary_search(&s).expect("present")).collect();
        let cells = |c: &[usize]| c.iter().collect::<BTreeSet<_>>().len();
        if cells(&next) == cells(&colour) {
            return next;
        }
        colour = next;
    }
}

fn relabel(adj: &[u16], colour: &[usize]) -> Adjacency {
    let n = adj.len();
    let mut out = vec![0u16; n];
    for v in 0..n {
        for u in 0..n {
            if adj[v] >> u & 1 == 1 {
                out[colour[v]] |= 1 << colour[u];
            }
        }
    }
    out
}

fn search(adj: &[u16], colour: Vec<usize>, best: &mut Option<Adjacency>) {
    let n = adj.len();
    let colour = refine(adj, colour);
    let mut sizes = vec![0usize; n];
    for &c in &colour {
        sizes[c] += 1;
    }
    let Some(target) = (0..n).find(|&c| sizes[c] > 1) else {
        let form = relabel(adj, &colour);
        if best.as_ref().is_none_or(|b| form < *b) {
            *best = Some(form);
        }
        return;
    };
    for v in (0..n).filter(|&v| colour[v] == target) {
        // Individualise v: it keeps its colour, the rest of its cell moves up.
        let split: Vec<usize> = (0..n).map(|u| 2 * colour[u] + usize::from(colour[u] == target && u != v)).collect();
        search(adj, split, best);
    }
}

pub fn canonical_form(adj: &[u16]) -> Adjacency {
    let mut best = None;
    search(adj, vec![0; adj.len()], &mut best);
    best.unwrap_or_default()
}

pub fn is_connected(adj: &[u16]) -> bool {
    if adj.is_empty() {
        return true;
    }
    let mut seen: u16 = 1;
    let mut stack = vec![0usize];
    while let Some(v) = stack.pop() {
        let fresh = adj[v] & !seen;
        seen |= fresh;
        for u in 0..adj.len() {
            if fresh >> u & 1 == 1 {
                stack.push(u);
            }
        }
    }
    seen.count_ones() as usize == adj.len()
}

/// All graphs on `n` vertices with maximum degree at most `max_degree`, one
/// per isomorphism class, optionally triangle-free. Built by adding one edge
/// at a time to every class of the previous level.
pub fn all_bounded_degree(n: usize, max_degree: u32, triangle_free: bool) -> Vec<Adjacency> {
    assert!(n <= 16, "bitmask graphs hold at most 16 vertices");
    let mut level: BTreeSet<Adjacency> = BTreeSet::new();
    level.insert(vec![0; n]);
    let mut all: Vec<Adjacency> = level.iter().cloned().collect();
    while !level.is_empty() {
        let mut next = BTreeSet::new();
        for g in &level {
            for u in 0..n {
                if g[u].count_ones() >= max_degree {
                    continue;
                }
                for v in u + 1..n {
                    if g[u] >> v & 1 == 1 || g[v].count_ones() >= max_degree {
                        continue;
                    }
                    if triangle_free && g[u] & g[v] != 0 {
                        continue;
                    }
                    let mut h = g.clone();
                    h[u] |= 1 << v;
                    h[v] |= 1 << u;
                    next.insert(canonical_form(&h));
                }
            }
        }
        all.extend(next.iter().cloned());
        level = next;
    }
    all
}

/// Connected cubic graphs on `n` vertices up to isomorphism.
pub fn connected_cubic(n: usize) -> Vec<Adjacency> {
    if n % 2 == 1 || n < 4 {
        return Vec::new();
    }
    cubic_completions(n)
}

/// Cubic graphs grown by always saturating the lowest-index vertex of the
/// canonical form that still has spare degree; isomorphic partial graphs are
/// merged at every step.
fn cubic_completions(n: usize) -> Vec<Adjacency> {
    let mut level: BTreeSet<Adjacency> = BTreeSet::new();
    level.insert(vec![0; n]);
    for _ in 0..3 * n / 2 {
        let mut next = BTreeSet::new();
        for g in &level {
            let Some(u) = (0..n).find(|&u| g[u].count_ones() < 3) else { continue };
            for v in 0..n {
                if v == u || g[u] >> v & 1 == 1 || g[v].count_ones() >= 3 {
                    continue;
                }
                let mut h = g.clone();
                h[u] |= 1 << v;
                h[v] |= 1 << u;
                next.insert(canonical_form(&h));
            }
        }
        level = next;
    }
    level.into_iter().filter(|g| g.iter().all(|r| r.count_ones() == 3) && is_connected(g)).collect()
}

/// Connected triangle-free graphs of maximum degree 3 on `n` vertices.
pub fn connected_triangle_free_subcubic(n: usize) -> Vec<Adjacency> {
    all_bounded_degree(n, 3, true).into_iter().filter(|g| is_connected(g)).collect()
}

pub fn to_graph(adj: &[u16]) -> WeightedMultigraph {
    let n = adj.len();
    let mut g = WeightedMultigraph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if adj[u] >> v & 1 == 1 {
                g.add_edge(u, v, one()).expect("valid endpoints");
            }
        }
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form_ignores_labels() {
        // C4 written two ways, and a path that is not isomorphic to it.
        let a = vec![0b1010, 0b0101, 0b1010, 0b0101];
        let b = vec![0b0110, 0b1001, 0b1001, 0b0110];
        assert_eq!(canonical_form(&a), canonical_form(&b));
        let p = vec![0b0010, 0b0101, 0b1010, 0b0100];
        assert_ne!(canonical_form(&a), canonical_form(&p));
    }

    #[test]
    fn small_class_counts() {
        // Graphs on 4 vertices: 11 in total, 6 of them connected.
        let all4 = all_bounded_degree(4, 3, false);
        assert_eq!(all4.len(), 11);
        assert_eq!(all4.iter().filter(|g| is_connected(g)).count(), 6);
    }

    #[test]
    fn connected_counts() {
        let cubic: Vec<usize> = [4, 6, 8].iter().map(|&n| connected_cubic(n).len()).collect();
        assert_eq!(cubic, vec![1, 2, 5]);
        // Reference counts from the networkx graph atlas.
        let tf: Vec<usize> = (1..=7).map(|n| connected_triangle_free_subcubic(n).len()).collect();
        assert_eq!(tf, vec![1, 1, 1, 3, 5, 14, 29]);
    }
}
