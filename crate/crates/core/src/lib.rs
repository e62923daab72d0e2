//! Solver library for optimization problems on graphs of bounded twin-width.
//!
//! The input model is a (tri)graph together with a contraction `d`-sequence.
//! From the sequence the [`balance`] engine extracts a `⌊√n⌋`-part partition
//! with bounded part size and bounded quotient red degree, which the
//! [`driver`] uses to decompose instances recursively. Each solver composes a
//! certified approximation-ratio bound along the recursion; at the base it
//! falls back to the budgeted exact [`oracles`].

pub mod balance;
pub mod coloring_util;
pub mod contraction;
pub mod driver;
pub mod error;
pub mod feas;
pub mod instances;
pub mod io;
pub mod oracles;
pub mod solvers;
pub mod trigraph;

pub use error::{Error, Result};

/// Exact rational arithmetic for weights, objective values and certified bounds.
pub type Q = num::rational::Ratio<i64>;

/// Shorthand for an integer-valued rational.
pub fn q(n: i64) -> Q {
    Q::from_integer(n)
}
