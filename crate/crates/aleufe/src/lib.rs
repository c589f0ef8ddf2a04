//! 2D unfitted finite element solver for PDEs on time-varying domains.
//!
//! The boundary (or interface) is tracked by marker points joined into a
//! periodic cubic spline and moves across a fixed Cartesian background grid.
//! Each time step classifies the grid into active/boundary cells, builds a
//! discrete ALE map by harmonic extension of the boundary displacement, and
//! advances the solution with a BDF-k scheme transported along the discrete
//! backward flow maps. Spatial terms are discretized with cut-cell
//! quadrature, Nitsche boundary terms, and ghost-penalty stabilization.

pub mod alemap;
pub mod bench;
pub mod curve;
pub mod error;
pub mod fespace;
pub mod flowmap;
pub mod geo;
pub mod linalg;
pub mod mesh;
pub mod quad;
pub mod solvers;
pub mod timestep;

pub use error::Error;
pub use geo::Point2;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
