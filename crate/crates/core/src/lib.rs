//! Computational engine for finite limit spaces.
//!
//! A finite limit space is stored as one set `V(x)` per point: a filter
//! converges to `x` exactly when its generator is a nonempty subset of `V(x)`.
//! On top of that representation the crate builds products, subspaces,
//! quotients and function spaces, decides connectedness, represents
//! continuous paths as step functions, rewrites walks up to homotopy, checks
//! and searches covering atlases, lifts paths and homotopies, and grows
//! radius-bounded fragments of the universal covering space.

pub mod connectivity;
pub mod constructions;
pub mod covering;
pub mod error;
pub mod homotopy;
pub mod io;
pub mod paths;
pub mod pointset;
pub mod space;
pub mod standard;
pub mod universal;

pub use error::{Error, Result};
pub use pointset::PointSet;
pub use space::{Carrier, LimitSpace, PointMap, PrincipalFilter, RawConvergenceTable};
