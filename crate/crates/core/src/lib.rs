//! Max-weight bisections of bounded-degree graphs with exact lower bounds.
//!
//! Every weight, probability and bound is an exact rational. The solvers
//! return bisections together with the bound they certify:
//!
//! * [`chromatic::bisect_via_chromatic_index`]: `(k+2)/(2(k+1))` of the total
//!   weight when the maximum degree is `k`;
//! * [`subcubic::solve_subcubic`]: `2/3` for maximum degree three;
//! * [`tf::solve_bridgeless_tf`]: `613/855` for bridgeless triangle-free
//!   graphs of maximum degree three.
//!
//! [`oracle`] holds the exhaustive reference used to check all of them.

pub mod chromatic;
pub mod coloring;
pub mod error;
pub mod family;
pub mod graph;
pub mod io;
pub mod matching;
pub mod oracle;
pub mod rational;
pub mod solution;
pub mod structure;
pub mod subcubic;
pub mod tf;

pub use error::{Error, Result};
pub use graph::{Bisection, Edge, EdgeId, Matching, VertexId, WeightedMultigraph};
pub use rational::Rational;
