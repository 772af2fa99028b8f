//! Embedding CSS codes into 3D, 4D and 5D layer codes.
//!
//! A CSS code is laid out on a qubit grid, its checks are routed through the
//! grid by line and plane colorings, and the resulting layers are glued into
//! one chain complex whose code can be verified and exported.

pub mod coloring;
pub mod complex;
pub mod css;
pub mod error;
pub mod f2;
pub mod grid;
pub mod layers;
pub mod routing;
pub mod verify;

pub use error::{Error, Result, Side};
