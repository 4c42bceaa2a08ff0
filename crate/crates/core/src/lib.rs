//! Finite combinatorics of ordinal largeness below ω^ω.
//!
//! The crate covers:
//!
//! * [`ordinal`] – Cantor normal forms below ω^ω and fundamental sequences;
//! * [`largeness`] – α-largeness, α-largeness*, greedy decompositions;
//! * [`coloring`] – finite colorings and the solution predicates
//!   (homogeneous, pseudo-homogeneous, transitive);
//! * [`gamma`] – certified exhaustive search for α-largeness relative to a
//!   Ramsey-type statement, and threshold computation;
//! * [`grouping`] – finite groupings and the finite grouping principle;
//! * [`extract`] – constructive witness-extraction pipelines;
//! * [`density`] – m-density and closed-form exponent bounds;
//! * [`cache`] / [`cli`] – the persistent result cache and command line.
//!
//! Every search returns evidence that can be re-checked independently.

pub mod cache;
pub mod cli;
pub mod coloring;
pub mod density;
pub mod error;
pub mod extract;
pub mod finset;
pub mod gamma;
pub mod grouping;
pub mod largeness;
pub mod ordinal;
pub mod search;

pub use coloring::{Coloring, GammaSpec};
pub use error::{Error, Result};
pub use finset::FinSet;
pub use ordinal::Ordinal;
