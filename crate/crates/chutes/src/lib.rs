//! Chutes-and-ladders number sequences.
//!
//! The 2017 Putnam A1 problem asks for the smallest set of positive
//! integers containing 2 that is closed under `n^2 -> n` and
//! `n -> (n+5)^2`. This crate generates the row-by-row triangle that
//! enumerates the set, certifies the first row in which each integer
//! appears (with a reconstructable path witness), analyzes path structure
//! through the belt/ladder/chute decomposition, and classifies the
//! generalized instances `(d, e, r)` whose solution sets are maximal via
//! power-map graphs modulo primes.
//!
//! Modules:
//! - [`arith`]: exact integer number theory (factorization, phi, orders,
//!   integer roots, primality).
//! - [`paths`]: up/down edge semantics, path witnesses, decomposition,
//!   the UUDD obstruction, explicit connecting paths.
//! - [`bounds`]: certified cutoffs bounding vertices on short paths.
//! - [`rows`]: the row engine and first-appearance search.
//! - [`modgraph`]: power-map graphs modulo primes, component counts,
//!   maximality.

#![forbid(unsafe_code)]

pub mod arith;
pub mod bounds;
pub mod modgraph;
pub mod paths;
pub mod rows;

pub use bounds::BoundQuery;
pub use modgraph::{PowerMapAnalysis, PrimeClassification};
pub use paths::{Labels, PathWitness, ProblemParams, Segment, SegmentKind, Step};
pub use rows::{FirstAppearance, FirstAppearances, Row, RowLimits};
