//! Point-impurity scattering in a hard-walled two-dimensional wire.
//!
//! All lengths are in units of the wire width `d`, so a wavenumber `k` is the
//! dimensionless `kd`.

pub mod error;
pub mod greens;
pub mod mirror;
mod par;
pub mod renorm;
pub mod scattering;
pub mod specfun;
pub mod sweep;
pub mod validate;
pub mod waveguide;

pub use error::{Error, Result};
pub use waveguide::{ChannelSet, ImageArray, Point, WireConfig};
