//! Finite-element solver for the linear sloshing eigenproblem: Laplace's
//! equation in the liquid, `∂φ/∂n = 0` on the wetted walls and
//! `∂φ/∂z = νφ` on the free surface, with analysis of where the
//! fundamental mode's elevation peaks (the high spot).
//!
//! Numerics are generic over [`Real`] (`f32` or `f64`); the aliases below
//! fix `f64`.

pub mod assembly;
pub mod eigen;
pub mod error;
pub mod geometry;
pub mod mesh;
pub mod scalar;
pub mod sloshing;
pub mod sparse;

pub use error::{Result, SloshError};
pub use scalar::Real;

pub type Point = geometry::Point2<f64>;
pub type Domain = geometry::PlanarDomain<f64>;
pub type Mesh = mesh::TriMesh<f64>;
pub type Sizing = mesh::Sizing<f64>;
pub type Matrix = sparse::SparseSym<f64>;
pub type Mode = sloshing::SloshingMode<f64>;
pub type Modes = sloshing::ModeSet<f64>;
pub type Trace = sloshing::SurfaceTrace<f64>;
pub type HighSpot = sloshing::HighSpotReport<f64>;
