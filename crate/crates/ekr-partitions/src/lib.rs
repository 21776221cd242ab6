//! Exact combinatorics of t-intersecting families of set partitions.
//!
//! A family of k-partitions of {1, ..., n} is t-intersecting when every two
//! members share at least t blocks (as equal sets). This crate provides the
//! machinery to study such families at desk scale with exact arithmetic:
//!
//! - Stirling numbers of the second kind, with an independent explicit-sum
//!   oracle and the threshold predicates used by the extremal theory
//!   ([`stirling`]).
//! - Canonical set partitions over a 64-element ground set, restricted growth
//!   string enumeration, and prefix-based work splitting ([`partition`]).
//! - The extremal constructions (stars, alpha families, Hilton-Milner style
//!   families), their membership predicates, closed-form sizes, and
//!   brute-force materialization ([`families`]).
//! - t-covers, exact covering numbers, and structural classification of the
//!   (t+1)-cover family ([`covers`]).
//! - Exhaustive searches: maximum families, maximal non-trivial families,
//!   closure, isomorphism ([`search`]).
//! - A registry of inequality and structure claims checked on hypothesis
//!   grids, with exact or certified-interval verdicts ([`verify`]).
//!
//! Every closed-form count is cross-checked against brute-force enumeration
//! in the test suite; the verification registry re-derives each inequality on
//! its stated grid rather than trusting any cached constant.
//!
//! Each capability has a runnable example:
//!
//! ```text
//! cargo run --release --example stirling_table
//! cargo run --release --example enumerate_partitions
//! cargo run --release --example construction_sizes
//! cargo run --release --example covering_numbers
//! cargo run --release --example maximal_families
//! cargo run --release --example verify_inequalities
//! ```
//!
//! The same operations are scriptable through the `ekr-partitions` binary;
//! see `README.md` or `ekr-partitions --help`.

pub mod cli;
pub mod covers;
pub mod error;
pub mod families;
pub mod interval;
pub mod parallel;
pub mod partition;
pub mod search;
pub mod stirling;
pub mod verify;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
