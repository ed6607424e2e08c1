//! Seeded instance generators.

use std::fmt;
use std::str::FromStr;

use bisect_core::rational::{frac, one, Rational};
use bisect_core::structure::{is_bridgeless, is_connected};
use bisect_core::WeightedMultigraph;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::HarnessError;

pub const REJECTION_CAP: usize = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphClass {
    CubicBridgeless,
    Subcubic,
    TfSubcubic2ecc,
    Petersen,
    Claw,
    Complete(usize),
    Remark1(usize),
    Cycle(usize),
    /// Simple graphs with maximum degree at most the given value.
    BoundedDegree(usize),
    /// Every connected triangle-free subcubic graph of the given order.
    AllTfSubcubic,
    /// Every connected cubic graph of the given order.
    AllCubic,
}

impl fmt::Display for GraphClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphClass::CubicBridgeless => write!(f, "cubic-bridgeless"),
            GraphClass::Subcubic => write!(f, "subcubic"),
            GraphClass::TfSubcubic2ecc => write!(f, "tf-subcubic-2ecc"),
            GraphClass::Petersen => write!(f, "petersen"),
            GraphClass::Claw => write!(f, "claw"),
            GraphClass::Complete(k) => write!(f, "complete({k})"),
            GraphClass::Remark1(t) => write!(f, "remark1({t})"),
            GraphClass::Cycle(l) => write!(f, "cycle({l})"),
            GraphClass::BoundedDegree(d) => write!(f, "max-degree({d})"),
            GraphClass::AllTfSubcubic => write!(f, "all-tf-subcubic"),
            GraphClass::AllCubic => write!(f, "all-cubic"),
        }
    }
}

impl FromStr for GraphClass {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || HarnessError::Usage(format!("unknown graph class `{s}`"));
        let arg = |name: &str| -> Option<Result<usize, HarnessError>> {
            let inner = s.strip_prefix(name)?.strip_prefix('(')?.strip_suffix(')')?;
            Some(inner.trim().parse().map_err(|_| bad()))
        };
        match s {
            "cubic-bridgeless" => return Ok(GraphClass::CubicBridgeless),
            "subcubic" => return Ok(GraphClass::Subcubic),
            "tf-subcubic-2ecc" => return Ok(GraphClass::TfSubcubic2ecc),
            "petersen" => return Ok(GraphClass::Petersen),
            "claw" => return Ok(GraphClass::Claw),
            "all-tf-subcubic" => return Ok(GraphClass::AllTfSubcubic),
            "all-cubic" => return Ok(GraphClass::AllCubic),
            _ => {}
        }
        if let Some(k) = arg("complete") {
            return k.map(GraphClass::Complete);
        }
        if let Some(t) = arg("remark1") {
            return t.map(GraphClass::Remark1);
        }
        if let Some(l) = arg("cycle") {
            return l.map(GraphClass::Cycle);
        }
        if let Some(d) = arg("max-degree") {
            return d.map(GraphClass::BoundedDegree);
        }
        Err(bad())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeightModel {
    Unit,
    /// `k/100` for `k` uniform in `0..=1000`.
    Uniform,
}

impl FromStr for WeightModel {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "unit" => Ok(WeightModel::Unit),
            "uniform" => Ok(WeightModel::Uniform),
            _ => Err(HarnessError::Usage(format!("unknown weight model `{s}`"))),
        }
    }
}

impl WeightModel {
    fn draw(self, rng: &mut ChaCha8Rng) -> Rational {
        match self {
            WeightModel::Unit => one(),
            WeightModel::Uniform => frac(rng.gen_range(0..=1000), 100),
        }
    }
}

fn with_weights(pairs: &[(usize, usize)], n: usize, weights: WeightModel, rng: &mut ChaCha8Rng) -> WeightedMultigraph {
    let mut g = WeightedMultigraph::new(n);
    for &(u, v) in pairs {
        g.add_edge(u, v, weights.draw(rng)).expect("valid endpoints");
    }
    g
}

fn has_triangle(n: usize, pairs: &[(usize, usize)]) -> bool {
    let mut adj = vec![vec![false; n]; n];
    for &(u, v) in pairs {
        adj[u][v] = true;
        adj[v][u] = true;
    }
    pairs.iter().any(|&(u, v)| (0..n).any(|t| adj[u][t] && adj[v][t]))
}

/// Random pairing of half-edges for the given degree sequence; `None` when
/// the pairing has a loop or a repeated pair.
fn pairing(degrees: &[usize], rng: &mut ChaCha8Rng) -> Option<Vec<(usize, usize)>> {
    let mut stubs: Vec<usize> = degrees.iter().enumerate().flat_map(|(v, &d)| std::iter::repeat_n(v, d)).collect();
    if stubs.len() % 2 == 1 {
        return None;
    }
    stubs.shuffle(rng);
    let mut pairs: Vec<(usize, usize)> = stubs.chunks(2).map(|c| (c[0].min(c[1]), c[0].max(c[1]))).collect();
    pairs.sort_unstable();
    let simple = pairs.iter().all(|&(u, v)| u != v) && pairs.windows(2).all(|w| w[0] != w[1]);
    simple.then_some(pairs)
}

fn rejection<T>(mut attempt: impl FnMut() -> Option<T>, class: GraphClass, n: usize) -> Result<T, HarnessError> {
    for _ in 0..REJECTION_CAP {
        if let Some(x) = attempt() {
            return Ok(x);
        }
    }
    Err(HarnessError::RejectionBudgetExceeded { class: class.to_string(), n })
}

pub fn petersen_pairs() -> Vec<(usize, usize)> {
    let mut pairs = Vec::new();
    for i in 0..5 {
        pairs.push((i, (i + 1) % 5));
        pairs.push((i, i + 5));
        pairs.push((5 + i, 5 + (i + 2) % 5));
    }
    pairs
}

/// `K_{2t,2t}` on `A = 0..2t`, `B = 2t..4t`, plus `v = 4t` joined to all of
/// `B` and to the first vertex of `A`.
pub fn remark1_pairs(t: usize) -> Vec<(usize, usize)> {
    let a = 2 * t;
    let mut pairs: Vec<(usize, usize)> = (0..a).flat_map(|x| (a..2 * a).map(move |y| (x, y))).collect();
    let v = 2 * a;
    pairs.extend((a..2 * a).map(|y| (y, v)));
    pairs.push((0, v));
    pairs
}

/// One instance of `class`. `n` is ignored by the fixed classes.
pub fn generate(class: GraphClass, n: usize, seed: u64, weights: WeightModel) -> Result<WeightedMultigraph, HarnessError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let usage = |msg: &str| Err(HarnessError::Usage(format!("{class}: {msg}")));
    let pairs: Vec<(usize, usize)> = match class {
        GraphClass::Petersen => petersen_pairs(),
        GraphClass::Claw => vec![(0, 1), (0, 2), (0, 3)],
        GraphClass::Complete(k) => (0..k).flat_map(|u| (u + 1..k).map(move |v| (u, v))).collect(),
        GraphClass::Remark1(t) => {
            if t == 0 {
                return usage("t must be positive");
            }
            remark1_pairs(t)
        }
        GraphClass::Cycle(l) => {
            if l < 3 {
                return usage("cycles need at least 3 vertices");
            }
            (0..l).map(|i| (i, (i + 1) % l)).collect()
        }
        GraphClass::CubicBridgeless => {
            if n < 4 || n % 2 == 1 {
                return usage("cubic graphs need an even order of at least 4");
            }
            let degrees = vec![3; n];
            rejection(
                || {
                    pairing(&degrees, &mut rng).filter(|p| {
                        let g = WeightedMultigraph::unit(n, p).expect("valid");
                        is_connected(&g) && is_bridgeless(&g)
                    })
                },
                class,
                n,
            )?
        }
        GraphClass::TfSubcubic2ecc => {
            if n < 4 {
                return usage("needs at least 4 vertices");
            }
            rejection(
                || {
                    let degrees: Vec<usize> = (0..n).map(|_| rng.gen_range(2..=3)).collect();
                    pairing(&degrees, &mut rng).filter(|p| {
                        let g = WeightedMultigraph::unit(n, p).expect("valid");
                        !has_triangle(n, p) && is_connected(&g) && is_bridgeless(&g)
                    })
                },
                class,
                n,
            )?
        }
        GraphClass::Subcubic => {
            // Random edges offered in order; each is kept when both ends have
            // spare degree.
            let mut deg = vec![0usize; n];
            let mut all: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
            all.shuffle(&mut rng);
            let keep = rng.gen_range(0..=3 * n / 2);
            let mut pairs = Vec::new();
            for (u, v) in all {
                if pairs.len() == keep {
                    break;
                }
                if deg[u] < 3 && deg[v] < 3 {
                    deg[u] += 1;
                    deg[v] += 1;
                    pairs.push((u, v));
                }
            }
            pairs
        }
        GraphClass::BoundedDegree(d) => {
            let mut deg = vec![0usize; n];
            let mut all: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
            all.shuffle(&mut rng);
            let keep = rng.gen_range(0..=d * n / 2);
            let mut pairs = Vec::new();
            for (u, v) in all {
                if pairs.len() == keep {
                    break;
                }
                if deg[u] < d && deg[v] < d {
                    deg[u] += 1;
                    deg[v] += 1;
                    pairs.push((u, v));
                }
            }
            pairs
        }
        GraphClass::AllTfSubcubic | GraphClass::AllCubic => {
            return usage("enumerated classes are only available to sweeps");
        }
    };
    let order = match class {
        GraphClass::Petersen => 10,
        GraphClass::Claw => 4,
        GraphClass::Complete(k) | GraphClass::Cycle(k) => k,
        GraphClass::Remark1(t) => 4 * t + 1,
        _ => n,
    };
    Ok(with_weights(&pairs, order, weights, &mut rng))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_classes() {
        let r = generate(GraphClass::Remark1(1), 0, 0, WeightModel::Unit).unwrap();
        assert_eq!((r.n(), r.m()), (5, 7));
        assert_eq!(r.max_degree(), 3);
        let p = generate(GraphClass::Petersen, 0, 0, WeightModel::Unit).unwrap();
        assert_eq!((p.n(), p.m(), p.max_degree()), (10, 15, 3));
        assert!(p.is_triangle_free());
        let c = generate(GraphClass::Cycle(6), 0, 0, WeightModel::Unit).unwrap();
        assert_eq!((c.n(), c.m()), (6, 6));
    }

    #[test]
    fn random_classes_satisfy_their_constraints() {
        for seed in 0..20 {
            let g = generate(GraphClass::TfSubcubic2ecc, 12, seed, WeightModel::Uniform).unwrap();
            assert!(g.is_simple() && g.is_triangle_free() && g.max_degree() <= 3 && is_bridgeless(&g));
            let c = generate(GraphClass::CubicBridgeless, 10, seed, WeightModel::Unit).unwrap();
            assert!((0..10).all(|v| c.degree(v) == 3) && is_bridgeless(&c) && c.is_simple());
            let s = generate(GraphClass::Subcubic, 9, seed, WeightModel::Uniform).unwrap();
            assert!(s.max_degree() <= 3 && s.is_simple());
        }
    }

    #[test]
    fn class_names_round_trip() {
        for name in ["cubic-bridgeless", "complete(5)", "remark1(2)", "cycle(7)", "max-degree(6)", "all-cubic"] {
            assert_eq!(name.parse::<GraphClass>().unwrap().to_string(), name);
        }
        assert!("complete(x)".parse::<GraphClass>().is_err());
    }
}
