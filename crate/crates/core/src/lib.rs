//! Exact tools for the toric manifolds whose orbit space is an n-cube with
//! one vertex cut: fans, classification, cohomology rings and projectivity.

pub mod classify;
pub mod cohomology;
pub mod complexes;
pub mod error;
pub mod exact;
pub mod fans;
pub mod json;
pub mod projectivity;
pub mod sample;
pub mod verify;

pub use error::{Error, Result};
