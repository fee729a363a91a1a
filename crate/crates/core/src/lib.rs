//! Exact-arithmetic toolkit for sum-product and bilinear-form counting
//! experiments in the rational plane.

pub mod analysis;
pub mod cluster;
pub mod crossratio;
pub mod equations;
pub mod error;
pub mod formstats;
pub mod generators;
pub mod geom;
pub mod io;
pub mod par;
pub mod scalar;
pub mod setops;
pub mod sets;

/// Exact counts of tuples.
pub type Count = u128;

pub use error::{Error, Result};
pub use geom::{BilinearForm, Direction, FormKind, Point};
pub use par::{Ctx, Exec};
pub use scalar::Scalar;
pub use sets::{CountTable, PointSet, ScalarSet};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
