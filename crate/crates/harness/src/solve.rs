//! Method selection for the `solve` command.

use std::str::FromStr;

use bisect_core::chromatic::bisect_via_chromatic_index;
use bisect_core::solution::Solution;
use bisect_core::subcubic::solve_subcubic;
use bisect_core::tf::solve_triangle_free;
use bisect_core::{Error, WeightedMultigraph};

use crate::error::HarnessError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MethodChoice {
    Auto,
    Chi,
    Subcubic,
    Tf,
}

impl FromStr for MethodChoice {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "auto" => Ok(MethodChoice::Auto),
            "chi" => Ok(MethodChoice::Chi),
            "subcubic" => Ok(MethodChoice::Subcubic),
            "tf" => Ok(MethodChoice::Tf),
            _ => Err(HarnessError::Usage(format!("unknown method `{s}`"))),
        }
    }
}

fn run(method: MethodChoice, g: &WeightedMultigraph, seed: u64) -> Result<Solution, Error> {
    match method {
        MethodChoice::Chi => bisect_via_chromatic_index(g),
        MethodChoice::Subcubic => solve_subcubic(g, seed),
        MethodChoice::Tf => solve_triangle_free(g, seed),
        MethodChoice::Auto => unreachable!("auto is resolved by `solve`"),
    }
}

/// Runs one method, or for `Auto` every method whose preconditions hold and
/// keeps the heaviest bisection (ties go to the larger guarantee). A broken
/// guarantee in any method is an error even if another method succeeded.
pub fn solve(method: MethodChoice, g: &WeightedMultigraph, seed: u64) -> Result<Solution, HarnessError> {
    let candidates = match method {
        MethodChoice::Auto => vec![MethodChoice::Chi, MethodChoice::Subcubic, MethodChoice::Tf],
        m => vec![m],
    };
    let mut best: Option<Solution> = None;
    let mut first_error = None;
    for m in candidates {
        match run(m, g, seed) {
            Ok(s) => {
                if s.flags.is_empty() && !s.meets_bound() {
                    return Err(HarnessError::GuaranteeViolated(format!(
                        "{} cut {} below {}",
                        s.method, s.bisection.cut_weight, s.guaranteed_bound
                    )));
                }
                let better = best.as_ref().is_none_or(|b| {
                    (&s.bisection.cut_weight, &s.guaranteed_bound) > (&b.bisection.cut_weight, &b.guaranteed_bound)
                });
                if better {
                    best = Some(s);
                }
            }
            Err(e @ Error::AssertionFailed(_)) => return Err(e.into()),
            Err(e) => {
                first_error.get_or_insert(e);
            }
        }
    }
    match (best, first_error) {
        (Some(s), _) => Ok(s),
        (None, Some(e)) => Err(e.into()),
        (None, None) => Err(HarnessError::Usage("no method ran".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{generate, GraphClass, WeightModel};
    use bisect_core::rational::int;
    use bisect_core::solution::Method;

    #[test]
    fn auto_prefers_the_heaviest() {
        let p = generate(GraphClass::Petersen, 0, 0, WeightModel::Unit).unwrap();
        let s = solve(MethodChoice::Auto, &p, 1).unwrap();
        assert_eq!(s.bisection.cut_weight, int(11));
        let k5 = generate(GraphClass::Complete(5), 0, 0, WeightModel::Unit).unwrap();
        assert_eq!(solve(MethodChoice::Auto, &k5, 1).unwrap().method, Method::Chromatic);
        assert!(solve(MethodChoice::Tf, &k5, 1).is_err_and(|e| e.exit_code() == 3));
    }
}
