//! Random balanced families on a single cycle or path of `H - M`.
//!
//! Each distribution is a finite list of outcomes with exact probabilities.
//! An outcome lists vertex sets; each set becomes one block through a
//! balanced bipartition of the subgraph it induces in the host.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::family::{balanced_bipartition, BalancedBlock, BalancedFamily};
use crate::graph::{VertexId, WeightedMultigraph};
use crate::rational::{frac, one, zero, Rational};
use crate::structure::Walk;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum GadgetKind {
    /// Cycles of any length other than 5, 7 and 11 (including 2-cycles of a
    /// doubled edge).
    General,
    FiveCycle,
    SevenCycle { chords: usize },
    /// `five_chord` is set when some chord closes a 5-cycle.
    ElevenCycle { five_chord: bool },
    /// `closing_chord` is set when `p_1 p_{n-1}` is an edge of the host.
    Path { closing_chord: bool },
    /// Every vertex always uncovered (isolated vertices, and non-5-cycles in
    /// the all-matching branch).
    Null,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GadgetOutcome {
    pub probability: Rational,
    pub family: BalancedFamily,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GadgetDistribution {
    pub kind: GadgetKind,
    /// Host vertices in cycle or path order.
    pub vertices: Vec<VertexId>,
    pub outcomes: Vec<GadgetOutcome>,
}

impl GadgetDistribution {
    pub fn null(vertices: Vec<VertexId>) -> Self {
        GadgetDistribution {
            kind: GadgetKind::Null,
            vertices,
            outcomes: vec![GadgetOutcome { probability: one(), family: BalancedFamily::default() }],
        }
    }

    pub fn total_probability(&self) -> Rational {
        self.outcomes.iter().fold(zero(), |acc, o| acc + &o.probability)
    }

    /// Probability that `v` lies in no block.
    pub fn exclusion(&self, v: VertexId) -> Rational {
        self.outcomes
            .iter()
            .filter(|o| !o.family.blocks.iter().any(|b| b.vertices().any(|u| u == v)))
            .fold(zero(), |acc, o| acc + &o.probability)
    }

    /// Probability that `u` and `v` sit on opposite sides of one block.
    pub fn crossing(&self, u: VertexId, v: VertexId) -> Rational {
        self.outcomes.iter().filter(|o| crosses(&o.family, u, v)).fold(zero(), |acc, o| acc + &o.probability)
    }
}

pub fn crosses(fam: &BalancedFamily, u: VertexId, v: VertexId) -> bool {
    fam.blocks.iter().any(|b| {
        (b.side_a.contains(&u) && b.side_b.contains(&v)) || (b.side_b.contains(&u) && b.side_a.contains(&v))
    })
}

/// Collects outcomes, merging those that use the same vertex sets.
struct Builder<'a> {
    h: &'a WeightedMultigraph,
    index: BTreeMap<Vec<Vec<VertexId>>, usize>,
    outcomes: Vec<GadgetOutcome>,
}

impl<'a> Builder<'a> {
    fn new(h: &'a WeightedMultigraph) -> Self {
        Builder { h, index: BTreeMap::new(), outcomes: Vec::new() }
    }

    fn add(&mut self, sets: Vec<Vec<VertexId>>, probability: Rational) -> Result<()> {
        if probability == zero() {
            return Ok(());
        }
        let mut key: Vec<Vec<VertexId>> = sets
            .into_iter()
            .map(|mut s| {
                s.sort_unstable();
                s
            })
            .collect();
        key.sort();
        if let Some(&i) = self.index.get(&key) {
            self.outcomes[i].probability += probability;
            return Ok(());
        }
        let mut blocks = Vec::with_capacity(key.len());
        for set in &key {
            blocks.push(block_on(self.h, set)?);
        }
        self.index.insert(key, self.outcomes.len());
        self.outcomes.push(GadgetOutcome { probability, family: BalancedFamily::new(blocks) });
        Ok(())
    }

    fn finish(self, kind: GadgetKind, vertices: Vec<VertexId>) -> GadgetDistribution {
        GadgetDistribution { kind, vertices, outcomes: self.outcomes }
    }
}

fn block_on(h: &WeightedMultigraph, set: &[VertexId]) -> Result<BalancedBlock> {
    balanced_bipartition(h, set)
        .ok_or_else(|| Error::UnhandledChordPattern(format!("vertex set {set:?} has no balanced bipartition")))
}

/// Chords of the cycle as unordered position pairs. A chord between
/// positions at cyclic distance two would close a triangle.
fn cycle_chords(h: &WeightedMultigraph, cycle: &[VertexId]) -> Result<BTreeSet<(usize, usize)>> {
    let l = cycle.len();
    let mut pos = BTreeMap::new();
    for (i, &v) in cycle.iter().enumerate() {
        pos.insert(v, i);
    }
    let mut chords = BTreeSet::new();
    for &v in cycle {
        for u in h.neighbors(v) {
            if let (Some(&a), Some(&b)) = (pos.get(&v), pos.get(&u)) {
                let d = (a + l - b) % l;
                let d = d.min(l - d);
                if d == 2 {
                    return Err(Error::UnhandledChordPattern(format!("chord {v}-{u} closes a triangle")));
                }
                if d > 2 {
                    chords.insert((a.min(b), a.max(b)));
                }
            }
        }
    }
    Ok(chords)
}

/// The 2l rotations and reflections of a cycle of length `l`, as maps from
/// canonical index to cycle position.
fn dihedral(l: usize) -> Vec<Vec<usize>> {
    let mut maps = Vec::with_capacity(2 * l);
    for s in 0..l {
        maps.push((0..l).map(|j| (s + j) % l).collect());
        maps.push((0..l).map(|j| (s + l - j) % l).collect());
    }
    maps
}

fn has_chord(chords: &BTreeSet<(usize, usize)>, a: usize, b: usize) -> bool {
    chords.contains(&(a.min(b), a.max(b)))
}

fn map_sets(cycle: &[VertexId], sigma: &[usize], sets: &[&[usize]]) -> Vec<Vec<VertexId>> {
    sets.iter().map(|s| s.iter().map(|&j| cycle[sigma[j]]).collect()).collect()
}

// Tables for 7-cycles, indexed from 0 along the cycle; every row has
// probability 1/8.
const C7_ONE_CHORD: [(usize, usize); 1] = [(0, 3)];
const C7_ONE_TABLE: [&[&[usize]]; 8] = [
    &[&[0, 1, 2, 3, 4, 5]],
    &[&[0, 1, 2, 3, 4, 6]],
    &[&[0, 1, 2, 3, 5, 6]],
    &[&[0, 1, 2, 4, 5, 6]],
    &[&[2, 3, 4, 5], &[6, 0]],
    &[&[1, 2], &[3, 4, 5, 6]],
    &[&[0, 1], &[3, 4, 5, 6]],
    &[&[2, 3], &[4, 5, 6, 0]],
];
const C7_CROSSED_CHORDS: [(usize, usize); 2] = [(0, 3), (2, 6)];
const C7_CROSSED_TABLE: [&[&[usize]]; 8] = C7_ONE_TABLE;
const C7_SPLIT_CHORDS: [(usize, usize); 2] = [(0, 3), (1, 5)];
const C7_SPLIT_TABLE: [&[&[usize]]; 8] = [
    &[&[0, 1, 2, 3, 4, 6]],
    &[&[0, 1, 2, 3, 5, 6]],
    &[&[0, 1, 2, 4, 5, 6]],
    &[&[0, 1], &[3, 4, 5, 6]],
    &[&[0, 1], &[2, 3, 4, 5]],
    &[&[1, 2, 3, 4], &[6, 0]],
    &[&[2, 3], &[4, 5, 6, 0]],
    &[&[1, 2], &[3, 4, 5, 6]],
];
const C7_THREE_CHORDS: [(usize, usize); 3] = [(1, 4), (3, 6), (2, 5)];
const C7_THREE_TABLE: [&[&[usize]]; 8] = [
    &[&[1, 2, 3, 4, 5, 6]],
    &[&[1, 2, 3, 4, 5, 6]],
    &[&[0, 1, 2, 3, 4, 5]],
    &[&[2, 3, 4, 5, 6, 0]],
    &[&[2, 3], &[5, 6, 0, 1]],
    &[&[6, 0, 1, 2], &[4, 5]],
    &[&[6, 0, 1, 2], &[3, 4]],
    &[&[5, 6, 0, 1], &[3, 4]],
];

// 11-cycles: with the chord c0c4 present and c5c9, c4c8 absent; and with no
// chord closing a 5-cycle.
const C11_FIVE_TABLE: [&[&[usize]]; 8] = [
    &[&[10, 0, 1, 2], &[4, 5, 6, 7, 8, 9]],
    &[&[1, 2, 3, 4], &[6, 7], &[8, 9, 10, 0]],
    &[&[0, 1, 2, 3], &[4, 5], &[6, 7, 8, 9]],
    &[&[0, 1], &[3, 4, 5, 6], &[7, 8, 9, 10]],
    &[&[1, 2, 3, 4], &[5, 6], &[8, 9, 10, 0]],
    &[&[9, 10, 0, 1], &[2, 3, 4, 5], &[7, 8]],
    &[&[10, 0, 1, 2], &[3, 4], &[5, 6, 7, 8]],
    &[&[2, 3], &[4, 5, 6, 7], &[9, 10]],
];
const C11_PLAIN_TABLE: [&[&[usize]]; 8] = [
    &[&[10, 0, 1, 2], &[4, 5, 6, 7, 8, 9]],
    &[&[1, 2, 3, 4], &[6, 7], &[8, 9, 10, 0]],
    &[&[0, 1, 2, 3], &[4, 5], &[6, 7, 8, 9]],
    &[&[0, 1], &[3, 4, 5, 6], &[7, 8, 9, 10]],
    &[&[1, 2, 3, 4], &[5, 6], &[8, 9, 10, 0]],
    &[&[9, 10, 0, 1], &[2, 3, 4, 5]],
    &[&[10, 0, 1, 2], &[3, 4, 5, 6, 7, 8]],
    &[&[2, 3], &[5, 6, 7, 8], &[9, 10]],
];

fn table_outcomes(
    h: &WeightedMultigraph,
    cycle: &[VertexId],
    sigma: &[usize],
    table: &[&[&[usize]]],
    kind: GadgetKind,
) -> Result<GadgetDistribution> {
    let mut b = Builder::new(h);
    for row in table {
        b.add(map_sets(cycle, sigma, row), frac(1, 8))?;
    }
    Ok(b.finish(kind, cycle.to_vec()))
}

/// First dihedral relabelling accepted by `pick` whose table rows all induce
/// balanced bipartitions.
fn first_fitting(
    h: &WeightedMultigraph,
    cycle: &[VertexId],
    table: &[&[&[usize]]],
    kind: GadgetKind,
    pick: impl Fn(&[usize]) -> bool,
) -> Option<GadgetDistribution> {
    dihedral(cycle.len())
        .into_iter()
        .filter(|s| pick(s))
        .find_map(|s| table_outcomes(h, cycle, &s, table, kind).ok())
}

fn window(cycle: &[VertexId], start: usize, len: usize) -> Vec<VertexId> {
    (0..len).map(|j| cycle[(start + j) % cycle.len()]).collect()
}

fn general_cycle(h: &WeightedMultigraph, cycle: &[VertexId]) -> Result<GadgetDistribution> {
    let l = cycle.len();
    let mut b = Builder::new(h);
    if l == 2 || l == 6 {
        b.add(vec![cycle.to_vec()], frac(7, 8))?;
        b.add(Vec::new(), frac(1, 8))?;
        return Ok(b.finish(GadgetKind::General, cycle.to_vec()));
    }
    let (k, r) = (l / 4, l % 4);
    if k == 0 {
        return Err(Error::UnhandledChordPattern(format!("cycle of length {l}")));
    }
    let quads = |i: usize| -> Vec<Vec<VertexId>> { (0..k).map(|t| window(cycle, i + 4 * t, 4)).collect() };
    let l_r = Rational::from_integer((l as i64).into());
    if 7 * r <= 4 * k {
        let x = frac(7 * l as i64, 32 * k as i64);
        for i in 0..l {
            b.add(quads(i), &x / &l_r)?;
        }
        b.add(Vec::new(), one() - x)?;
    } else {
        let y = frac(7 * r as i64 - 4 * k as i64, 16);
        for i in 0..l {
            let mut longer = quads(i);
            longer.push(window(cycle, i + 4 * k, 2));
            b.add(longer, &y / &l_r)?;
            b.add(quads(i), (one() - &y) / &l_r)?;
        }
    }
    Ok(b.finish(GadgetKind::General, cycle.to_vec()))
}

/// The distribution for a cycle of `H - M`, chosen by its length and chords.
pub fn gadget_for_cycle(h: &WeightedMultigraph, cycle: &Walk) -> Result<GadgetDistribution> {
    let c = &cycle.vertices;
    let chords = cycle_chords(h, c)?;
    match c.len() {
        5 => {
            let mut b = Builder::new(h);
            for i in 0..5 {
                b.add(vec![window(c, i + 1, 4)], frac(1, 5))?;
            }
            Ok(b.finish(GadgetKind::FiveCycle, c.clone()))
        }
        7 => {
            let kind = GadgetKind::SevenCycle { chords: chords.len() };
            if chords.is_empty() {
                let mut b = Builder::new(h);
                for i in 0..7 {
                    b.add(vec![window(c, i + 1, 6)], frac(1, 7))?;
                }
                return Ok(b.finish(kind, c.clone()));
            }
            let candidates: [(&[(usize, usize)], &[&[&[usize]]]); 4] = [
                (&C7_ONE_CHORD, &C7_ONE_TABLE),
                (&C7_CROSSED_CHORDS, &C7_CROSSED_TABLE),
                (&C7_SPLIT_CHORDS, &C7_SPLIT_TABLE),
                (&C7_THREE_CHORDS, &C7_THREE_TABLE),
            ];
            candidates
                .iter()
                .filter(|(pattern, _)| pattern.len() == chords.len())
                .find_map(|(pattern, table)| {
                    first_fitting(h, c, table, kind, |s| pattern.iter().all(|&(a, b)| has_chord(&chords, s[a], s[b])))
                })
                .ok_or_else(|| Error::UnhandledChordPattern(format!("7-cycle chords {chords:?}")))
        }
        11 => {
            let five_chord = chords.iter().any(|&(a, b)| {
                let d = b - a;
                d == 4 || d == 7
            });
            let kind = GadgetKind::ElevenCycle { five_chord };
            let found = if five_chord {
                first_fitting(h, c, &C11_FIVE_TABLE, kind, |s| {
                    has_chord(&chords, s[0], s[4]) && !has_chord(&chords, s[5], s[9]) && !has_chord(&chords, s[4], s[8])
                })
            } else {
                first_fitting(h, c, &C11_PLAIN_TABLE, kind, |_| true)
            };
            found.ok_or_else(|| Error::UnhandledChordPattern(format!("11-cycle chords {chords:?}")))
        }
        _ => general_cycle(h, c),
    }
}

/// Consecutive 4-sets covering `p_a ..= p_b` (1-indexed, possibly empty).
fn quads(a: usize, b: usize) -> Vec<Vec<usize>> {
    debug_assert!((b + 1 - a).is_multiple_of(4));
    (a..=b).step_by(4).map(|s| (s..s + 4).collect()).collect()
}

/// Consecutive pairs covering `p_a ..= p_b`.
fn pairs(a: usize, b: usize) -> Vec<Vec<usize>> {
    debug_assert!((b + 1 - a).is_multiple_of(2));
    (a..=b).step_by(2).map(|s| vec![s, s + 1]).collect()
}

fn join(parts: Vec<Vec<Vec<usize>>>) -> Vec<Vec<usize>> {
    parts.into_iter().flatten().collect()
}

/// Rows `(eighths, sets)` of the path table for `p_1 .. p_n`.
fn path_rows(n: usize, closing_chord: bool) -> Vec<(i64, Vec<Vec<usize>>)> {
    let tail = vec![vec![n - 2, n - 1, n, 1]];
    let p = |a: usize, b: usize| vec![vec![a, b]];
    match n % 4 {
        _ if n == 5 => vec![
            (3, vec![vec![2, 3, 4, 5]]),
            (2, vec![vec![1, 2, 3, 4]]),
            (2, vec![vec![1, 2], vec![4, 5]]),
            (1, vec![vec![1, 2]]),
        ],
        0 => {
            let mut rows = vec![
                (2, quads(1, n)),
                (2, join(vec![p(1, 2), quads(3, n - 2), p(n - 1, n)])),
                (1, join(vec![quads(2, n - 3), p(n - 2, n - 1)])),
                (1, join(vec![p(2, 3), quads(4, n - 1)])),
            ];
            if closing_chord {
                rows.push((1, join(vec![p(1, 2), p(n - 1, n)])));
                rows.push((1, pairs(2, n - 1)));
            } else {
                rows.push((1, p(1, 2)));
                rows.push((1, join(vec![pairs(2, n - 3), tail])));
            }
            rows
        }
        1 => {
            let mut rows = vec![(2, quads(1, n - 1)), (2, quads(2, n))];
            if closing_chord {
                rows.push((2, join(vec![p(1, 2), quads(3, n - 3), p(n - 1, n)])));
                rows.push((1, join(vec![p(1, 2), quads(4, n - 2), p(n - 1, n)])));
                rows.push((1, join(vec![p(2, 3), p(n - 2, n - 1)])));
            } else {
                rows.push((1, join(vec![p(1, 2), quads(3, n - 3), p(n - 1, n)])));
                rows.push((1, join(vec![p(1, 2), quads(4, n - 2), p(n - 1, n)])));
                rows.push((1, join(vec![p(1, 2), quads(4, n - 2)])));
                rows.push((1, join(vec![p(2, 3), tail])));
            }
            rows
        }
        2 => {
            let mut rows = vec![
                (2, join(vec![quads(1, n - 2), p(n - 1, n)])),
                (2, join(vec![p(1, 2), quads(3, n)])),
                (1, quads(2, n - 1)),
                (1, join(vec![p(2, 3), quads(4, n - 3), p(n - 2, n - 1)])),
            ];
            if closing_chord {
                rows.push((1, join(vec![p(1, 2), p(n - 1, n)])));
                rows.push((1, pairs(2, n - 1)));
            } else {
                rows.push((1, p(1, 2)));
                rows.push((1, join(vec![pairs(2, n - 3), tail])));
            }
            rows
        }
        _ => {
            let mut rows = vec![
                (2, join(vec![quads(1, n - 3), p(n - 1, n)])),
                (2, join(vec![p(1, 2), quads(3, n - 1)])),
                (1, join(vec![p(2, 3), quads(4, n)])),
                (1, join(vec![p(1, 2), quads(4, n)])),
            ];
            if closing_chord {
                rows.push((1, join(vec![quads(2, n - 2), p(n - 1, n)])));
                rows.push((1, join(vec![p(2, 3), p(n - 2, n - 1)])));
            } else {
                rows.push((1, quads(2, n - 2)));
                rows.push((1, join(vec![p(2, 3), tail])));
            }
            rows
        }
    }
}

/// The distribution for the path `p_1 .. p_n` of `H - M`, which needs
/// `p_2 p_n` to be an edge of the host and `n >= 5`.
pub fn gadget_for_path(h: &WeightedMultigraph, path: &Walk) -> Result<GadgetDistribution> {
    let p = &path.vertices;
    let n = p.len();
    if n < 5 || !h.adjacent(p[1], p[n - 1]) {
        return Err(Error::UnhandledChordPattern(format!("path of {n} vertices without the p2-pn edge")));
    }
    let closing_chord = h.adjacent(p[0], p[n - 2]);
    let mut b = Builder::new(h);
    for (eighths, sets) in path_rows(n, closing_chord) {
        let sets = sets.into_iter().map(|s| s.into_iter().map(|i| p[i - 1]).collect()).collect();
        b.add(sets, frac(eighths, 8))?;
    }
    Ok(b.finish(GadgetKind::Path { closing_chord }, p.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(l: usize) -> (WeightedMultigraph, Walk) {
        let pairs: Vec<_> = (0..l).map(|i| (i, (i + 1) % l)).collect();
        let g = WeightedMultigraph::unit(l, &pairs).unwrap();
        (g, Walk { vertices: (0..l).collect(), edges: (0..l).collect() })
    }

    #[test]
    fn c8_and_c6_values() {
        let (g, w) = cycle(8);
        let d = gadget_for_cycle(&g, &w).unwrap();
        assert_eq!(d.total_probability(), one());
        for i in 0..8 {
            assert_eq!(d.crossing(i, (i + 1) % 8), frac(21, 32));
            assert_eq!(d.exclusion(i), frac(1, 8));
        }
        let (g, w) = cycle(6);
        let d = gadget_for_cycle(&g, &w).unwrap();
        assert_eq!(d.outcomes[0].probability, frac(7, 8));
        assert_eq!(d.outcomes[0].family.blocks[0].size(), 6);
    }

    #[test]
    fn chordless_seven_and_five() {
        let (g, w) = cycle(7);
        let d = gadget_for_cycle(&g, &w).unwrap();
        assert_eq!(d.crossing(0, 1), frac(5, 7));
        assert_eq!(d.exclusion(3), frac(1, 7));
        let (g, w) = cycle(5);
        let d = gadget_for_cycle(&g, &w).unwrap();
        assert_eq!(d.exclusion(2), frac(1, 5));
        assert_eq!(d.crossing(2, 3), frac(3, 5));
    }

    #[test]
    fn seven_cycle_with_one_chord_is_relabelled() {
        let (mut g, w) = cycle(7);
        g.add_edge(2, 5, one()).unwrap();
        let d = gadget_for_cycle(&g, &w).unwrap();
        assert_eq!(d.kind, GadgetKind::SevenCycle { chords: 1 });
        assert_eq!(d.total_probability(), one());
        for i in 0..7 {
            assert!(d.crossing(i, (i + 1) % 7) >= frac(5, 8));
        }
    }

    #[test]
    fn triangle_chord_is_rejected() {
        let (mut g, w) = cycle(7);
        g.add_edge(0, 2, one()).unwrap();
        assert!(matches!(gadget_for_cycle(&g, &w), Err(Error::UnhandledChordPattern(_))));
    }

    #[test]
    fn path_five_table() {
        let mut g = WeightedMultigraph::unit(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
        g.add_edge(1, 4, one()).unwrap();
        let walk = Walk { vertices: (0..5).collect(), edges: (0..4).collect() };
        let d = gadget_for_path(&g, &walk).unwrap();
        assert_eq!(d.crossing(1, 2), frac(5, 8));
        assert_eq!(d.outcomes.len(), 4);
    }

    #[test]
    fn path_rows_sum_to_one() {
        for n in 5..40 {
            for closing in [false, true] {
                let total: i64 = path_rows(n, closing).iter().map(|r| r.0).sum();
                assert_eq!(total, 8, "n={n}");
            }
        }
    }
}
