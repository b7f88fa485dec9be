//! Exact toolkit for non-archimedean volumes of piecewise-linear toric metrics.
//!
//! Everything is computed over the rationals: polytopes and their lattice
//! points, PL metrics and their Legendre roofs, Monge–Ampère measures and
//! energies, lattice lengths of spaces of small sections, toric cohomology,
//! and the Monge–Ampère equation on metric trees.

pub mod cohomology;
pub mod error;
pub mod fit;
pub mod generate;
pub mod harness;
pub mod hull;
pub mod linalg;
pub mod measure;
pub mod metric;
pub mod par;
pub mod polytope;
pub mod rational;
pub mod roof;
pub mod tree;
pub mod volume;

pub use error::{CoreError, Result};
pub use measure::DiscreteMeasure;
pub use metric::{AffinePiece, PLFunction, PLMetric};
pub use par::Execution;
pub use polytope::{Point, Polytope};
pub use rational::Rational;
pub use roof::RoofFunction;
