//! Minimal spanning entering forests of small weighted digraphs, the atoms
//! of the set algebras generated by their trees, and the timescale
//! hierarchy those atoms induce.
//!
//! Everything is exact: weights are rationals and every minimal forest is
//! found by exhaustive enumeration, so graphs are limited to a few dozen
//! vertices in principle and about fourteen in practice.
//!
//! ```
//! use forest_atoms::{build_hierarchy, phi_sequence, Digraph, Rational, DEFAULT_CAP};
//!
//! let w = Rational::from_integer;
//! let g = Digraph::from_arcs(
//!     &["a", "b", "c", "d"],
//!     &[("b", "a", w(1)), ("a", "c", w(2)), ("b", "d", w(2)), ("c", "b", w(3))],
//! )?;
//! let phi = phi_sequence(&g, DEFAULT_CAP)?;
//! let shown: Vec<String> = phi.values().iter().map(|v| v.to_string()).collect();
//! assert_eq!(shown, ["inf", "7", "3", "1", "0"]);
//! assert_eq!(build_hierarchy(&g)?.len(), 4);
//! # Ok::<(), forest_atoms::Error>(())
//! ```

pub mod analysis;
pub mod atoms;
pub mod cli;
pub mod enumerate;
pub mod error;
pub mod forest;
pub mod graph;
pub mod hierarchy;
pub mod io;
pub mod partition;
pub mod verify;
pub mod vset;
pub mod weight;

pub use analysis::Analysis;
pub use atoms::{atoms, measure, AtomFamily, AtomMeasure};
pub use enumerate::{
    convexity_profile, enumerate_forests, minimal_forests, phi_sequence, ConvexityMarker, MinForestSet,
    PhiSequence, DEFAULT_CAP,
};
pub use error::{Error, Result};
pub use forest::{Forest, OutArcMap};
pub use graph::{ArcView, Digraph};
pub use hierarchy::{build_hierarchy, stochastic_support, HierarchyLevel};
pub use verify::{verify, VerificationReport, VerifyOptions};
pub use vset::VertexSet;
pub use weight::{ExtWeight, Rational};
