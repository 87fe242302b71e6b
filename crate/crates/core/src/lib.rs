//! Exact finite geometry over field towers `GF(p) ⊆ GF(q) ⊆ GF(q^t)`.
//!
//! The crate builds Desarguesian spreads by field reduction, embeds them in a
//! Grassmannian through Plücker coordinates, and computes the linear equations
//! cutting the image of a linear set on that embedding.

pub mod error;
pub mod exterior;
pub mod geometry;
pub mod gf;
pub mod linalg;
pub mod linset;
pub mod schubert;

pub use error::{Error, ParseError, Result};
pub use gf::{Elem, FieldConfig, FieldTower, Level};
pub use linalg::{SubspaceBasis, Vector};
