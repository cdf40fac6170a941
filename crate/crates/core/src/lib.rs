//! Non-autonomous orbit portraits.
//!
//! Exact combinatorics of rational angles under the degree-varying maps
//! θ ↦ d_m θ, critical lamination sequences, and a numerical engine for
//! bounded polynomial sequences (Green's functions, Böttcher coordinates,
//! external rays and their landing points).

pub mod acceptance;
pub mod angle;
pub mod catalog;
pub mod cli;
pub mod config;
pub mod error;
pub mod format;
pub mod lamination;
pub mod poly;
pub mod portrait;
pub mod rays;
pub mod render;
pub mod verify;

pub use angle::{Angle, AngleSet, Arc};
pub use error::{Error, Result};
