//! Proper edge colourings with at most Δ+1 colours (Misra–Gries).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{EdgeId, Matching, VertexId, WeightedMultigraph};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeColoring {
    pub color: BTreeMap<EdgeId, usize>,
    /// Number of distinct colours in use.
    pub count: usize,
}

impl EdgeColoring {
    pub fn from_map(color: BTreeMap<EdgeId, usize>) -> Self {
        let mut used: Vec<usize> = color.values().copied().collect();
        used.sort_unstable();
        used.dedup();
        EdgeColoring { count: used.len(), color }
    }

    pub fn problems(&self, g: &WeightedMultigraph) -> Vec<String> {
        let mut out = Vec::new();
        for id in g.edge_ids() {
            if !self.color.contains_key(&id) {
                out.push(format!("edge {id} is uncoloured"));
            }
        }
        for v in 0..g.n() {
            let mut seen: BTreeMap<usize, EdgeId> = BTreeMap::new();
            for &e in g.incident(v) {
                if let Some(&c) = self.color.get(&e) {
                    if let Some(prev) = seen.insert(c, e) {
                        out.push(format!("edges {prev} and {e} share colour {c} at vertex {v}"));
                    }
                }
            }
        }
        out
    }

    pub fn is_proper(&self, g: &WeightedMultigraph) -> bool {
        self.problems(g).is_empty()
    }
}

struct State {
    /// at[v][c] = edge of colour c at v
    at: Vec<Vec<Option<EdgeId>>>,
    color: BTreeMap<EdgeId, usize>,
}

impl State {
    fn free(&self, v: VertexId, c: usize) -> bool {
        self.at[v][c].is_none()
    }

    fn smallest_free(&self, v: VertexId) -> usize {
        (0..self.at[v].len()).find(|&c| self.free(v, c)).expect("Δ+1 colours leave one free")
    }

    fn set(&mut self, g: &WeightedMultigraph, e: EdgeId, c: Option<usize>) {
        let ed = g.edge(e);
        if let Some(old) = self.color.remove(&e) {
            self.at[ed.u][old] = None;
            self.at[ed.v][old] = None;
        }
        if let Some(c) = c {
            self.at[ed.u][c] = Some(e);
            self.at[ed.v][c] = Some(e);
            self.color.insert(e, c);
        }
    }
}

/// Colours a simple graph with at most Δ+1 colours. Edges are coloured in
/// ascending id order; fans grow by the edge whose colour is the smallest
/// colour free at the current fan end.
pub fn vizing_color(g: &WeightedMultigraph) -> Result<EdgeColoring> {
    if !g.is_simple() {
        return Err(Error::NotSimple);
    }
    let palette = g.max_degree() + 1;
    let mut st = State { at: vec![vec![None; palette]; g.n()], color: BTreeMap::new() };
    let mut ids: Vec<EdgeId> = g.edge_ids().collect();
    ids.sort_unstable();
    for id in ids {
        let e = g.edge(id).clone();
        let u = e.u;
        let edge_to = |x: VertexId| g.edges_between(u, x)[0];
        // maximal fan at u starting with e.v
        let mut fan = vec![e.v];
        loop {
            let last = *fan.last().expect("non-empty");
            let next = g
                .incident(u)
                .iter()
                .filter_map(|&f| st.color.get(&f).map(|&c| (c, g.edge(f).other(u))))
                .filter(|&(c, x)| st.free(last, c) && !fan.contains(&x))
                .min();
            match next {
                Some((_, x)) => fan.push(x),
                None => break,
            }
        }
        let c = st.smallest_free(u);
        let d = st.smallest_free(*fan.last().expect("non-empty"));
        if c != d {
            // invert the c/d alternating path starting at u with a d edge
            let mut path = Vec::new();
            let mut v = u;
            let mut want = d;
            while let Some(f) = st.at[v][want] {
                if path.contains(&f) {
                    break;
                }
                path.push(f);
                v = g.edge(f).other(v);
                want = if want == d { c } else { d };
            }
            let recolour: Vec<(EdgeId, usize)> =
                path.iter().map(|&f| (f, if st.color[&f] == c { d } else { c })).collect();
            for &(f, _) in &recolour {
                st.set(g, f, None);
            }
            for (f, col) in recolour {
                st.set(g, f, Some(col));
            }
        }
        // first prefix of the fan that is still a fan and ends where d is free
        let mut end = None;
        for i in 0..fan.len() {
            if i > 0 {
                let prev_ok = st.color.get(&edge_to(fan[i])).is_some_and(|&col| st.free(fan[i - 1], col));
                if !prev_ok {
                    break;
                }
            }
            if st.free(fan[i], d) {
                end = Some(i);
                break;
            }
        }
        let end = end.ok_or_else(|| Error::ImproperColoring(format!("no rotatable fan for edge {id}")))?;
        for i in 0..end {
            let col = st.color[&edge_to(fan[i + 1])];
            st.set(g, edge_to(fan[i + 1]), None);
            st.set(g, edge_to(fan[i]), Some(col));
        }
        st.set(g, edge_to(fan[end]), Some(d));
    }
    let coloring = EdgeColoring::from_map(st.color);
    let problems = coloring.problems(g);
    if !problems.is_empty() {
        return Err(Error::ImproperColoring(problems.join("; ")));
    }
    Ok(coloring)
}

/// The colour class of largest total weight (lowest colour among ties).
pub fn heaviest_color_class(g: &WeightedMultigraph, coloring: &EdgeColoring) -> Result<Matching> {
    let problems = coloring.problems(g);
    if !problems.is_empty() {
        return Err(Error::ImproperColoring(problems.join("; ")));
    }
    let mut classes: BTreeMap<usize, Vec<EdgeId>> = BTreeMap::new();
    for (&e, &c) in &coloring.color {
        if g.has_edge_id(e) {
            classes.entry(c).or_default().push(e);
        }
    }
    let mut best: Option<Matching> = None;
    for (_, ids) in classes {
        let m = Matching::new(ids);
        if best.as_ref().is_none_or(|b| m.weight(g) > b.weight(g)) {
            best = Some(m);
        }
    }
    Ok(best.unwrap_or_default())
}
