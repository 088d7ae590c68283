//! Exact enumeration toolkit for fully packed loop configurations.
//!
//! The crate is organised around a handful of independent engines that
//! cross-check one another:
//!
//! - [`coupling`]: noncrossing link patterns, the cyclic Temperley-Lieb
//!   action, half-turn symmetric couplings and their slit / punctured forms.
//! - [`fpl`]: backtracking enumeration of FPLs (optionally half-turn or
//!   mirror symmetric, optionally with forced edges), coupling extraction and
//!   the fixed-edge families used to reduce FPL counting to perfect matchings.
//! - [`stationary`]: exact stationary distributions of Temperley-Lieb Markov
//!   chains and the reconciliation against FPL tallies.
//! - [`tiling`]: weighted bipartite regions, a memoised perfect matching
//!   counter, hexagons, plane partitions and the FPL / CSPP bijection.
//! - [`det`]: exact rational determinants and the lattice path matrices.
//! - [`formula`]: closed-form product formulas, each paired with an oracle.
//!
//! All arithmetic on verification paths is exact (`BigInt` / `BigRational`).
//! Parallelism is provided by rayon behind the `parallel` feature; every
//! parallel path merges results in a fixed order so outputs do not depend on
//! the number of worker threads.

pub mod coupling;
pub mod det;
pub mod error;
pub mod formula;
pub mod fpl;
pub mod golden;
pub mod par;
pub mod poly;
pub mod rational;
pub mod report;
pub mod stationary;
pub mod tiling;

pub use error::{Error, Result};
pub use rational::{BigInt, BigRational};
