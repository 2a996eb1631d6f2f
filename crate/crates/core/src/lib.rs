//! Lattice-point visibility toolkit.
//!
//! A point q of the integer lattice is visible from p when the open segment
//! between them contains no lattice point, which happens exactly when the
//! coordinate differences are coprime. Everything here grows out of that
//! predicate: totient sieves and their partial sums, visibility censuses and
//! density estimates, constructions of k-by-k grids hidden from the origin,
//! and small sets of observers that jointly see an entire square grid.

pub mod arith;
pub mod cover;
pub mod error;
pub mod explicit_cover;
pub mod hidden_forest;
pub mod visibility;

pub use error::{Error, Result};
pub use visibility::{Coord, Point};

/// Lattice point with machine-integer coordinates.
pub type LatticePoint = Point<i64>;

/// Lattice point with arbitrary-precision coordinates.
pub type BigLatticePoint = Point<num_bigint::BigInt>;
