//! Exhaustive reference answers: maximum bisections and cuts, bisection
//! verification, edge-colourability, and the gadget auditor.

use std::collections::BTreeMap;
use std::ops::{AddAssign, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::coloring::EdgeColoring;
use crate::error::{Error, Result};
use crate::family::validate_family;
use crate::graph::{Bisection, VertexId, WeightedMultigraph};
use crate::rational::{frac, one, zero, Rational};
use crate::tf::gadget::{GadgetDistribution, GadgetKind};

pub const DEFAULT_NMAX: usize = 24;

/// Largest order the exhaustive searches accept; `BISECT_ORACLE_NMAX`
/// overrides the default.
pub fn oracle_nmax() -> usize {
    std::env::var("BISECT_ORACLE_NMAX").ok().and_then(|s| s.trim().parse().ok()).unwrap_or(DEFAULT_NMAX)
}

fn check_budget(g: &WeightedMultigraph) -> Result<()> {
    let max = oracle_nmax();
    if g.n() > max {
        return Err(Error::BudgetExceeded { n: g.n(), max });
    }
    Ok(())
}

/// Weights scaled to integers by the common denominator.
fn integer_weights(g: &WeightedMultigraph) -> (BigInt, Vec<(VertexId, VertexId, BigInt)>) {
    let denom = g.edges().iter().fold(BigInt::one(), |acc, e| acc.lcm(e.weight.denom()));
    let edges =
        g.edges().iter().map(|e| (e.u, e.v, (e.weight.numer() * &denom) / e.weight.denom())).collect();
    (denom, edges)
}

/// Walks all subsets containing vertex 0 in Gray-code order, keeping the
/// heaviest cut among those whose X side size passes `accept`.
fn gray_search<T>(n: usize, edges: &[(VertexId, VertexId, T)], accept: impl Fn(usize) -> bool) -> (T, Vec<bool>)
where
    T: Clone + PartialOrd + Zero + for<'a> AddAssign<&'a T> + for<'a> SubAssign<&'a T>,
{
    let mut adj: Vec<Vec<(VertexId, usize)>> = vec![Vec::new(); n];
    for (i, (u, v, _)) in edges.iter().enumerate() {
        if u != v {
            adj[*u].push((*v, i));
            adj[*v].push((*u, i));
        }
    }
    let mut in_x = vec![false; n];
    in_x[0] = true;
    let mut size_x = 1usize;
    let mut cut = T::zero();
    for &(v, i) in &adj[0] {
        if !in_x[v] {
            cut += &edges[i].2;
        }
    }
    let mut best: Option<(T, Vec<bool>)> = None;
    if accept(size_x) {
        best = Some((cut.clone(), in_x.clone()));
    }
    let total: u64 = 1u64 << (n - 1);
    for step in 1..total {
        let v = step.trailing_zeros() as usize + 1;
        for &(u, i) in &adj[v] {
            if in_x[u] == in_x[v] {
                cut += &edges[i].2;
            } else {
                cut -= &edges[i].2;
            }
        }
        in_x[v] = !in_x[v];
        if in_x[v] {
            size_x += 1;
        } else {
            size_x -= 1;
        }
        if accept(size_x) && best.as_ref().is_none_or(|(b, _)| cut > *b) {
            best = Some((cut.clone(), in_x.clone()));
        }
    }
    best.expect("some subset is accepted")
}

fn exhaustive(g: &WeightedMultigraph, balanced: bool) -> Result<(Rational, Vec<bool>)> {
    check_budget(g)?;
    let n = g.n();
    if n == 0 {
        return Ok((zero(), Vec::new()));
    }
    let lo = n / 2;
    let hi = n - lo;
    let accept = |k: usize| !balanced || k == lo || k == hi;
    let (denom, edges) = integer_weights(g);
    let total = edges.iter().fold(BigInt::zero(), |acc, e| acc + &e.2);
    let (numer, mask) = if total.to_i128().is_some() {
        let small: Vec<(VertexId, VertexId, i128)> =
            edges.iter().map(|(u, v, w)| (*u, *v, w.to_i128().expect("bounded by the total"))).collect();
        let (w, mask) = gray_search(n, &small, accept);
        (BigInt::from(w), mask)
    } else {
        gray_search(n, &edges, accept)
    };
    Ok((Rational::new(numer, denom), mask))
}

/// Maximum-weight bisection by exhaustive search with vertex 0 fixed in X.
pub fn exact_max_bisection(g: &WeightedMultigraph) -> Result<(Rational, Bisection)> {
    let (w, mask) = exhaustive(g, true)?;
    Ok((w, Bisection::from_mask(g, &mask)))
}

/// Maximum-weight cut by exhaustive search with vertex 0 fixed in X.
pub fn exact_max_cut(g: &WeightedMultigraph) -> Result<(Rational, Vec<bool>)> {
    exhaustive(g, false)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub partition_ok: bool,
    pub balanced: bool,
    pub weight_matches: bool,
    pub meets_bound: bool,
    pub recomputed: Rational,
    pub problems: Vec<String>,
}

impl Verdict {
    pub fn passed(&self) -> bool {
        self.problems.is_empty()
    }
}

pub fn verify_bisection(g: &WeightedMultigraph, b: &Bisection, bound: &Rational) -> Verdict {
    let mut problems = Vec::new();
    let mut count = vec![0usize; g.n()];
    let mut out_of_range = false;
    for &v in b.side_x.iter().chain(&b.side_y) {
        match count.get_mut(v) {
            Some(c) => *c += 1,
            None => out_of_range = true,
        }
    }
    let partition_ok = !out_of_range && count.iter().all(|&c| c == 1);
    if !partition_ok {
        problems.push("partition: sides do not cover every vertex exactly once".to_string());
    }
    let balanced = b.is_balanced();
    if !balanced {
        problems.push(format!("balance: sides have sizes {} and {}", b.side_x.len(), b.side_y.len()));
    }
    let recomputed = if out_of_range { zero() } else { g.cut_weight(&b.mask(g.n())) };
    let weight_matches = recomputed == b.cut_weight;
    if !weight_matches {
        problems.push(format!("weight mismatch: stated {} but recomputed {recomputed}", b.cut_weight));
    }
    let meets_bound = recomputed >= *bound;
    if !meets_bound {
        problems.push(format!("bound: {recomputed} is below {bound}"));
    }
    Verdict { partition_ok, balanced, weight_matches, meets_bound, recomputed, problems }
}

/// A proper edge colouring with at most `k` colours, found by backtracking,
/// or `None` when none exists.
pub fn edge_colorable(g: &WeightedMultigraph, k: usize) -> Result<Option<EdgeColoring>> {
    if g.m() > 64 {
        return Err(Error::BudgetExceeded { n: g.m(), max: 64 });
    }
    let mut ids: Vec<_> = g.edge_ids().collect();
    ids.sort_unstable();
    let mut colour: BTreeMap<usize, usize> = BTreeMap::new();
    fn go(g: &WeightedMultigraph, ids: &[usize], i: usize, k: usize, colour: &mut BTreeMap<usize, usize>) -> bool {
        if i == ids.len() {
            return true;
        }
        let e = g.edge(ids[i]);
        let used: Vec<usize> = [e.u, e.v]
            .iter()
            .flat_map(|&v| g.incident(v).iter().filter_map(|f| colour.get(f).copied()).collect::<Vec<_>>())
            .collect();
        // Colours beyond the first unused one are interchangeable.
        let fresh = colour.values().max().map_or(0, |m| m + 1);
        for c in 0..k.min(fresh + 1) {
            if !used.contains(&c) {
                colour.insert(ids[i], c);
                if go(g, ids, i + 1, k, colour) {
                    return true;
                }
                colour.remove(&ids[i]);
            }
        }
        false
    }
    Ok(go(g, &ids, 0, k, &mut colour).then(|| EdgeColoring::from_map(colour)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Claim {
    /// Cycles other than 5-, 7- and 11-cycles.
    GeneralCycle,
    FiveCycle,
    SevenCycle,
    ElevenCycle,
    Path,
}

impl Claim {
    pub fn for_kind(kind: GadgetKind) -> Option<Claim> {
        match kind {
            GadgetKind::General => Some(Claim::GeneralCycle),
            GadgetKind::FiveCycle => Some(Claim::FiveCycle),
            GadgetKind::SevenCycle { .. } => Some(Claim::SevenCycle),
            GadgetKind::ElevenCycle { .. } => Some(Claim::ElevenCycle),
            GadgetKind::Path { .. } => Some(Claim::Path),
            GadgetKind::Null => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuditReport {
    pub claim: Claim,
    pub total_probability: Rational,
    /// Crossing probability of each host edge `(v_i, v_{i+1})`.
    pub edge_inclusion: Vec<Rational>,
    pub exclusion: Vec<Rational>,
    pub violations: Vec<String>,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks a gadget distribution against the probabilities its claim states,
/// walking the whole support with exact arithmetic.
pub fn audit_gadget(h: &WeightedMultigraph, dist: &GadgetDistribution, claim: Claim) -> AuditReport {
    let mut violations = Vec::new();
    let vs = &dist.vertices;
    let l = vs.len();
    let total_probability = dist.total_probability();
    if total_probability != one() {
        violations.push(format!("probabilities sum to {total_probability}"));
    }
    for (i, o) in dist.outcomes.iter().enumerate() {
        if o.probability <= zero() || o.probability > one() {
            violations.push(format!("outcome {i}: probability {}", o.probability));
        }
        let diag = validate_family(h, &o.family);
        if !diag.is_valid() {
            violations.push(format!("outcome {i}: {}", diag.problems.join("; ")));
        }
        if let Some(v) = o.family.blocks.iter().flat_map(|b| b.vertices()).find(|v| !vs.contains(v)) {
            violations.push(format!("outcome {i}: vertex {v} is outside the host"));
        }
    }
    let is_cycle = claim != Claim::Path;
    let edge_count = if is_cycle { l } else { l - 1 };
    let edge_inclusion: Vec<Rational> = (0..edge_count).map(|i| dist.crossing(vs[i], vs[(i + 1) % l])).collect();
    let exclusion: Vec<Rational> = vs.iter().map(|&v| dist.exclusion(v)).collect();
    let edge_floor = if claim == Claim::FiveCycle { frac(3, 5) } else { frac(5, 8) };
    for (i, p) in edge_inclusion.iter().enumerate() {
        if *p < edge_floor {
            violations.push(format!("edge {i}: inclusion {p} below {edge_floor}"));
        }
    }
    let on_chord: Vec<bool> = vs
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            h.neighbors(v).any(|u| {
                vs.iter().position(|&x| x == u).is_some_and(|j| {
                    let d = i.abs_diff(j);
                    if is_cycle {
                        d.min(l - d) > 1
                    } else {
                        d > 1
                    }
                })
            })
        })
        .collect();
    let closing_chord = matches!(dist.kind, GadgetKind::Path { closing_chord: true });
    for (i, p) in exclusion.iter().enumerate() {
        let ok = match claim {
            Claim::GeneralCycle => *p == frac(1, 8),
            Claim::FiveCycle => *p == frac(1, 5),
            Claim::SevenCycle => *p >= frac(1, 8) && *p <= frac(1, 4),
            Claim::ElevenCycle => on_chord[i] || (*p >= frac(1, 8) && *p <= frac(1, 4)),
            Claim::Path => i == 1 || (closing_chord && i == l - 2) || *p >= frac(1, 8),
        };
        if !ok {
            violations.push(format!("vertex {}: exclusion {p}", vs[i]));
        }
    }
    AuditReport { claim, total_probability, edge_inclusion, exclusion, violations }
}

/// All chord sets of an `l`-cycle that keep it triangle-free and subcubic
/// (matchings of chords spanning distance three or more), one per dihedral
/// class.
pub fn chord_patterns(l: usize) -> Vec<Vec<(usize, usize)>> {
    let chords: Vec<(usize, usize)> =
        (0..l).flat_map(|a| (a + 1..l).map(move |b| (a, b))).filter(|&(a, b)| (b - a).min(l + a - b) >= 3).collect();
    let mut out = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    let canon = |set: &[(usize, usize)]| -> Vec<(usize, usize)> {
        let mut best: Option<Vec<(usize, usize)>> = None;
        for s in 0..l {
            for dir in [false, true] {
                let f = |x: usize| if dir { (s + l - x) % l } else { (s + x) % l };
                let mut img: Vec<(usize, usize)> = set.iter().map(|&(a, b)| (f(a).min(f(b)), f(a).max(f(b)))).collect();
                img.sort_unstable();
                if best.as_ref().is_none_or(|b| img < *b) {
                    best = Some(img);
                }
            }
        }
        best.unwrap_or_default()
    };
    fn grow(
        chords: &[(usize, usize)],
        from: usize,
        used: &mut Vec<bool>,
        current: &mut Vec<(usize, usize)>,
        visit: &mut dyn FnMut(&[(usize, usize)]),
    ) {
        visit(current);
        for i in from..chords.len() {
            let (a, b) = chords[i];
            if !used[a] && !used[b] {
                used[a] = true;
                used[b] = true;
                current.push((a, b));
                grow(chords, i + 1, used, current, visit);
                current.pop();
                used[a] = false;
                used[b] = false;
            }
        }
    }
    let mut used = vec![false; l];
    grow(&chords, 0, &mut used, &mut Vec::new(), &mut |set| {
        if seen.insert(canon(set)) {
            out.push(set.to_vec());
        }
    });
    out
}

/// One audited host: its label and the report, or the construction error.
pub type AuditEntry = (String, std::result::Result<AuditReport, Error>);

fn audit_cycle_host(l: usize, chords: &[(usize, usize)]) -> AuditEntry {
    let label = format!("cycle {l} chords {chords:?}");
    let mut g = WeightedMultigraph::new(l);
    for i in 0..l {
        g.add_edge(i, (i + 1) % l, one()).expect("cycle edge");
    }
    for &(a, b) in chords {
        g.add_edge(a, b, one()).expect("chord");
    }
    let walk = crate::structure::Walk { vertices: (0..l).collect(), edges: (0..l).collect() };
    let result = crate::tf::gadget::gadget_for_cycle(&g, &walk).map(|d| {
        let claim = Claim::for_kind(d.kind).expect("cycle gadget");
        audit_gadget(&g, &d, claim)
    });
    (label, result)
}

/// Audits chordless cycles of every length in `4..=max_len`, plus every
/// chord pattern of 7- and 11-cycles within that range.
pub fn audit_cycle_family(max_len: usize) -> Vec<AuditEntry> {
    let mut out = Vec::new();
    for l in 4..=max_len {
        if l == 7 || l == 11 {
            for chords in chord_patterns(l) {
                out.push(audit_cycle_host(l, &chords));
            }
        } else {
            out.push(audit_cycle_host(l, &[]));
        }
    }
    out
}

/// Audits paths `p_1 .. p_n` for `5 <= n <= max_len`, hosted on the path
/// plus `p_2 p_n`, with and without `p_1 p_{n-1}`.
pub fn audit_path_family(max_len: usize) -> Vec<AuditEntry> {
    let mut out = Vec::new();
    for n in 5..=max_len {
        for closing in [false, true] {
            let mut g = WeightedMultigraph::new(n);
            for i in 0..n - 1 {
                g.add_edge(i, i + 1, one()).expect("path edge");
            }
            g.add_edge(1, n - 1, one()).expect("p2-pn");
            if closing {
                g.add_edge(0, n - 2, one()).expect("p1-pn-1");
            }
            let walk = crate::structure::Walk { vertices: (0..n).collect(), edges: (0..n - 1).collect() };
            let result =
                crate::tf::gadget::gadget_for_path(&g, &walk).map(|d| audit_gadget(&g, &d, Claim::Path));
            out.push((format!("path {n} closing chord {closing}"), result));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;
    use crate::structure::Walk;
    use crate::tf::gadget::gadget_for_cycle;

    fn cycle(l: usize) -> WeightedMultigraph {
        WeightedMultigraph::unit(l, &(0..l).map(|i| (i, (i + 1) % l)).collect::<Vec<_>>()).unwrap()
    }

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
    fn anchors() {
        let claw = WeightedMultigraph::unit(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        assert_eq!(exact_max_bisection(&claw).unwrap().0, int(2));
        assert_eq!(exact_max_bisection(&petersen()).unwrap().0, int(11));
        let k4 = WeightedMultigraph::unit(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert_eq!(exact_max_bisection(&k4).unwrap().0, int(4));
        assert_eq!(exact_max_cut(&k4).unwrap().0, int(4));
        assert_eq!(exact_max_cut(&cycle(5)).unwrap().0, int(4));
        assert_eq!(exact_max_cut(&cycle(4)).unwrap().0, int(4));
        assert_eq!(exact_max_bisection(&cycle(5)).unwrap().0, int(4));
    }

    #[test]
    fn matches_naive_enumeration_with_fractions() {
        let g = WeightedMultigraph::from_edges(
            5,
            [(0, 1, frac(1, 3)), (1, 2, frac(5, 7)), (2, 3, int(2)), (3, 4, frac(1, 2)), (4, 0, frac(3, 4)), (0, 2, one())],
        )
        .unwrap();
        let mut best = zero();
        for mask in 0u32..32 {
            if mask.count_ones() == 2 || mask.count_ones() == 3 {
                let in_x: Vec<bool> = (0..5).map(|v| mask >> v & 1 == 1).collect();
                best = best.max(g.cut_weight(&in_x));
            }
        }
        let (w, b) = exact_max_bisection(&g).unwrap();
        assert_eq!(w, best);
        assert_eq!(b.cut_weight, best);
        assert!(b.is_balanced());
    }

    #[test]
    fn budget_is_enforced() {
        let g = WeightedMultigraph::new(DEFAULT_NMAX + 1);
        assert!(matches!(exact_max_bisection(&g), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn verdicts() {
        let g = cycle(4);
        let good = Bisection::from_mask(&g, &[true, false, true, false]);
        assert!(verify_bisection(&g, &good, &int(4)).passed());
        let lopsided = Bisection::from_mask(&g, &[true, true, true, false]);
        assert!(!verify_bisection(&g, &lopsided, &zero()).balanced);
        let mut stale = good.clone();
        stale.cut_weight = int(3);
        assert!(!verify_bisection(&g, &stale, &zero()).weight_matches);
    }

    #[test]
    fn colourability() {
        let k4 = WeightedMultigraph::unit(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert!(edge_colorable(&k4, 3).unwrap().is_some_and(|c| c.is_proper(&k4)));
        assert!(edge_colorable(&cycle(5), 2).unwrap().is_none());
        assert!(edge_colorable(&petersen(), 3).unwrap().is_none());
    }

    #[test]
    fn audit_spot_values() {
        for (l, claim) in [(5, Claim::FiveCycle), (7, Claim::SevenCycle), (8, Claim::GeneralCycle)] {
            let g = cycle(l);
            let walk = Walk { vertices: (0..l).collect(), edges: (0..l).collect() };
            let d = gadget_for_cycle(&g, &walk).unwrap();
            let report = audit_gadget(&g, &d, claim);
            assert!(report.passed(), "{:?}", report.violations);
            match l {
                5 => assert!(report.exclusion.iter().all(|p| *p == frac(1, 5))),
                7 => {
                    assert!(report.edge_inclusion.iter().all(|p| *p == frac(5, 7)));
                    assert!(report.exclusion.iter().all(|p| *p == frac(1, 7)));
                }
                _ => assert!(report.edge_inclusion.iter().all(|p| *p == frac(21, 32))),
            }
        }
    }

    #[test]
    fn catalogue_audits_pass() {
        assert_eq!(chord_patterns(7).len(), 5);
        for (label, r) in audit_cycle_family(13).into_iter().chain(audit_path_family(13)) {
            match r {
                Ok(rep) => assert!(rep.passed(), "{label}: {:?}", rep.violations),
                Err(e) => panic!("{label}: {e}"),
            }
        }
    }
}
