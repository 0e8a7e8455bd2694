//! Low-dissipation central-upwind finite-volume solver for ideal MHD in one
//! and two space dimensions, with a constrained-transport update that keeps
//! the discrete magnetic divergence at machine zero.

pub mod analysis;
pub mod ctransport;
pub mod driver;
pub mod error;
pub mod io;
pub mod ldcu1d;
pub mod ldcu2d;
pub mod mesh;
pub mod mhd;
pub mod problems;
pub mod reconstruct;
pub mod timestepper;

pub use error::{Error, Location, Result};
