//! The mixture of gadget families over all components of `H - M`, with
//! matching edges added back between uncovered endpoints.
//!
//! With probability 24/25 every component draws from its gadget and matching
//! edges touching a 5-cycle may be added back; with probability 1/25 only the
//! 5-cycles draw and every matching edge may be added back.

use std::collections::BTreeMap;

use rand::Rng;

use crate::error::{Error, Result};
use crate::family::{family_weight, BalancedBlock, BalancedFamily};
use crate::graph::{EdgeId, Matching, VertexId, WeightedMultigraph};
use crate::rational::{frac, one, to_f64, zero, Rational};
use crate::structure::CyclePathStructure;

use super::gadget::{crosses, gadget_for_cycle, gadget_for_path, GadgetDistribution, GadgetKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum MatchingClass {
    /// Both endpoints on 5-cycles.
    BothOnFive,
    /// Exactly one endpoint on a 5-cycle.
    OneOnFive,
    NoneOnFive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    /// Every component draws from its gadget.
    AllGadgets,
    /// Only 5-cycles draw; every matching edge is eligible for add-back.
    FiveCyclesOnly,
}

impl Branch {
    pub fn probability(self) -> Rational {
        match self {
            Branch::AllGadgets => frac(24, 25),
            Branch::FiveCyclesOnly => frac(1, 25),
        }
    }
}

#[derive(Clone, Debug)]
pub struct MixPlan {
    pub matching: Matching,
    /// One distribution per component of `H - M`: cycles, then the path,
    /// then isolated vertices.
    pub components: Vec<GadgetDistribution>,
    pub classes: BTreeMap<EdgeId, MatchingClass>,
    component_of: Vec<usize>,
    mate_edge: Vec<Option<EdgeId>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MixExpectation {
    pub all_gadgets: Rational,
    pub five_cycles_only: Rational,
    pub overall: Rational,
    /// `3(w(H) - w(M))/5 + 4 w(M)/125`.
    pub bound: Rational,
}

impl MixPlan {
    pub fn build(h: &WeightedMultigraph, matching: Matching, structure: &CyclePathStructure) -> Result<Self> {
        let mut components = Vec::new();
        for c in &structure.cycles {
            components.push(gadget_for_cycle(h, c)?);
        }
        if let Some(p) = &structure.path {
            components.push(gadget_for_path(h, p)?);
        }
        for &v in &structure.isolated {
            components.push(GadgetDistribution::null(vec![v]));
        }
        let mut component_of = vec![usize::MAX; h.n()];
        for (i, d) in components.iter().enumerate() {
            for &v in &d.vertices {
                component_of[v] = i;
            }
        }
        if component_of.contains(&usize::MAX) {
            return Err(Error::MalformedStructure("vertex outside every component".into()));
        }
        let on_five = |v: VertexId| components[component_of[v]].kind == GadgetKind::FiveCycle;
        let mut classes = BTreeMap::new();
        let mut mate_edge = vec![None; h.n()];
        for &id in &matching.edges {
            let e = h.edge(id);
            mate_edge[e.u] = Some(id);
            mate_edge[e.v] = Some(id);
            let class = match (on_five(e.u), on_five(e.v)) {
                (true, true) => MatchingClass::BothOnFive,
                (false, false) => MatchingClass::NoneOnFive,
                _ => MatchingClass::OneOnFive,
            };
            classes.insert(id, class);
        }
        Ok(MixPlan { matching, components, classes, component_of, mate_edge })
    }

    fn eligible(&self, branch: Branch, id: EdgeId) -> bool {
        branch == Branch::FiveCyclesOnly || self.classes[&id] != MatchingClass::NoneOnFive
    }

    fn draws(&self, branch: Branch, c: usize) -> bool {
        branch == Branch::AllGadgets || self.components[c].kind == GadgetKind::FiveCycle
    }

    /// Outcomes of component `c` with their probabilities, given the fixed
    /// choices so far.
    fn support(&self, branch: Branch, c: usize, fixed: &[Option<usize>]) -> Vec<(Rational, &BalancedFamily)> {
        static EMPTY: BalancedFamily = BalancedFamily { blocks: Vec::new() };
        if !self.draws(branch, c) {
            return vec![(one(), &EMPTY)];
        }
        let d = &self.components[c];
        match fixed[c] {
            Some(i) => vec![(one(), &d.outcomes[i].family)],
            None => d.outcomes.iter().map(|o| (o.probability.clone(), &o.family)).collect(),
        }
    }

    fn uncovered(&self, branch: Branch, v: VertexId, fixed: &[Option<usize>]) -> Rational {
        let c = self.component_of[v];
        self.support(branch, c, fixed)
            .into_iter()
            .filter(|(_, f)| !covers(f, v))
            .fold(zero(), |acc, (p, _)| acc + p)
    }

    /// Expected family weight in `branch`, conditioned on the outcomes in
    /// `fixed`.
    pub fn conditional_expectation(&self, h: &WeightedMultigraph, branch: Branch, fixed: &[Option<usize>]) -> Rational {
        let mut total = zero();
        for e in h.edges() {
            if e.weight == zero() {
                continue;
            }
            let (u, v) = (e.u, e.v);
            let (cu, cv) = (self.component_of[u], self.component_of[v]);
            let mate = self.mate_edge[u].filter(|&m| h.edge(m).other(u) == v && self.eligible(branch, m));
            let mut p = zero();
            if cu == cv {
                for (q, f) in self.support(branch, cu, fixed) {
                    if crosses(f, u, v) || (mate.is_some() && !covers(f, u) && !covers(f, v)) {
                        p += q;
                    }
                }
            } else if mate.is_some() {
                p = self.uncovered(branch, u, fixed) * self.uncovered(branch, v, fixed);
            }
            total += p * &e.weight;
        }
        total
    }

    pub fn expectation(&self, h: &WeightedMultigraph) -> Result<MixExpectation> {
        let none = vec![None; self.components.len()];
        let all_gadgets = self.conditional_expectation(h, Branch::AllGadgets, &none);
        let five_cycles_only = self.conditional_expectation(h, Branch::FiveCyclesOnly, &none);
        let overall = (&all_gadgets * Branch::AllGadgets.probability())
            + (&five_cycles_only * Branch::FiveCyclesOnly.probability());
        let wm = self.matching.weight(h);
        let bound = (h.total_weight() - &wm) * frac(3, 5) + wm * frac(4, 125);
        if overall < bound {
            return Err(Error::AssertionFailed(format!("mixture expectation {overall} below {bound}")));
        }
        Ok(MixExpectation { all_gadgets, five_cycles_only, overall, bound })
    }

    /// The family for fixed outcomes: chosen gadget blocks plus every
    /// eligible matching edge with both endpoints uncovered, in ascending id.
    pub fn assemble(&self, h: &WeightedMultigraph, branch: Branch, chosen: &[Option<usize>]) -> BalancedFamily {
        let mut fam = BalancedFamily::default();
        for c in 0..self.components.len() {
            if let (true, Some(i)) = (self.draws(branch, c), chosen[c]) {
                fam.extend(self.components[c].outcomes[i].family.clone());
            }
        }
        let covered = fam.covered(h.n());
        for &id in &self.matching.edges {
            let e = h.edge(id);
            if self.eligible(branch, id) && !covered[e.u] && !covered[e.v] {
                fam.blocks.push(BalancedBlock::pair(e.u, e.v));
            }
        }
        fam
    }

    /// Fixes outcomes component by component (ascending lowest vertex) by
    /// conditional expectations, in the branch with the larger expectation.
    pub fn derandomize(&self, h: &WeightedMultigraph) -> Result<(BalancedFamily, Branch)> {
        let ex = self.expectation(h)?;
        let branch =
            if ex.all_gadgets >= ex.five_cycles_only { Branch::AllGadgets } else { Branch::FiveCyclesOnly };
        let mut order: Vec<usize> = (0..self.components.len()).collect();
        order.sort_by_key(|&c| self.components[c].vertices.iter().min().copied());
        let mut fixed = vec![None; self.components.len()];
        for c in order {
            if !self.draws(branch, c) {
                continue;
            }
            let mut best: Option<(Rational, usize)> = None;
            for i in 0..self.components[c].outcomes.len() {
                fixed[c] = Some(i);
                let value = self.conditional_expectation(h, branch, &fixed);
                if best.as_ref().is_none_or(|(b, _)| value > *b) {
                    best = Some((value, i));
                }
            }
            fixed[c] = best.map(|(_, i)| i);
        }
        let fam = self.assemble(h, branch, &fixed);
        let weight = family_weight(h, &fam)?;
        if weight < ex.overall {
            return Err(Error::AssertionFailed(format!("derandomized family weight {weight} below {}", ex.overall)));
        }
        Ok((fam, branch))
    }

    /// Draws one family from the mixture.
    pub fn sample<R: Rng>(&self, h: &WeightedMultigraph, rng: &mut R) -> BalancedFamily {
        let branch = if rng.gen_range(0..25) < 24 { Branch::AllGadgets } else { Branch::FiveCyclesOnly };
        let chosen: Vec<Option<usize>> = self
            .components
            .iter()
            .map(|d| {
                let mut r: f64 = rng.gen();
                for (i, o) in d.outcomes.iter().enumerate() {
                    r -= to_f64(&o.probability);
                    if r < 0.0 {
                        return Some(i);
                    }
                }
                Some(d.outcomes.len() - 1)
            })
            .collect();
        self.assemble(h, branch, &chosen)
    }
}

fn covers(f: &BalancedFamily, v: VertexId) -> bool {
    f.blocks.iter().any(|b| b.side_a.contains(&v) || b.side_b.contains(&v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::family_weight;
    use crate::tf::preprocess::{preprocess, structure_matching};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn petersen() -> WeightedMultigraph {
        let mut pairs = Vec::new();
        for i in 0..5 {
            pairs.push((i, (i + 1) % 5));
            pairs.push((i, i + 5));
            pairs.push((5 + i, 5 + (i + 2) % 5));
        }
        WeightedMultigraph::unit(10, &pairs).unwrap()
    }

    fn plan(g: &WeightedMultigraph) -> (WeightedMultigraph, MixPlan) {
        let rec = preprocess(g).unwrap();
        let (m, s) = structure_matching(&rec).unwrap();
        let plan = MixPlan::build(&rec.h, m, &s).unwrap();
        (rec.h, plan)
    }

    #[test]
    fn petersen_expectation_and_family() {
        let g = petersen();
        let (h, plan) = plan(&g);
        let ex = plan.expectation(&h).unwrap();
        assert_eq!(ex.bound, frac(154, 25));
        assert!(ex.overall >= ex.bound);
        let (fam, _) = plan.derandomize(&h).unwrap();
        assert!(family_weight(&h, &fam).unwrap() >= crate::rational::int(7));
    }

    #[test]
    fn zero_weights_give_zero() {
        let g = petersen().scaled(&zero());
        let (h, plan) = plan(&g);
        let ex = plan.expectation(&h).unwrap();
        assert_eq!(ex.overall, zero());
    }

    #[test]
    fn sampling_is_close_to_expectation() {
        let g = petersen();
        let (h, plan) = plan(&g);
        let ex = plan.expectation(&h).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let draws = 4000;
        let total: f64 = (0..draws).map(|_| to_f64(&family_weight(&h, &plan.sample(&h, &mut rng)).unwrap())).sum();
        assert!((total / draws as f64 - to_f64(&ex.overall)).abs() < 0.2);
    }

    #[test]
    fn add_back_order_does_not_matter() {
        use rand::seq::SliceRandom;
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..50 {
            let n = rng.gen_range(6..=20);
            let g = crate::tf::tests::random_tf_2ecc(n, &mut rng);
            let rec = preprocess(&g).unwrap();
            if rec.kind == crate::tf::preprocess::PreprocessKind::EvenCycle {
                continue;
            }
            let (m, s) = structure_matching(&rec).unwrap();
            let h = &rec.h;
            let plan = MixPlan::build(h, m, &s).unwrap();
            for branch in [Branch::AllGadgets, Branch::FiveCyclesOnly] {
                let chosen: Vec<Option<usize>> =
                    plan.components.iter().map(|d| Some(rng.gen_range(0..d.outcomes.len()))).collect();
                let mut expected = plan.assemble(h, branch, &chosen).blocks;
                let mut fam = BalancedFamily::default();
                for c in 0..plan.components.len() {
                    if plan.draws(branch, c) {
                        fam.extend(plan.components[c].outcomes[chosen[c].unwrap()].family.clone());
                    }
                }
                let mut order = plan.matching.edges.clone();
                order.shuffle(&mut rng);
                for id in order {
                    let e = h.edge(id);
                    let covered = fam.covered(h.n());
                    if plan.eligible(branch, id) && !covered[e.u] && !covered[e.v] {
                        fam.blocks.push(BalancedBlock::pair(e.u, e.v));
                    }
                }
                let mut got = fam.blocks;
                got.sort_by_key(|b| (b.lowest_vertex(), b.size()));
                expected.sort_by_key(|b| (b.lowest_vertex(), b.size()));
                assert_eq!(got, expected);
            }
        }
    }
}
