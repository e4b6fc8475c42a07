//! Sphere conditions on closed subsets of R^n, proximal normals, and
//! constructive covers of set complements by balls of a common radius.

pub mod error;
pub mod gallery;
pub mod conditions;
pub mod cover;
pub mod geometry;
pub mod oracle;
pub mod regularity;
pub mod report;
pub mod sampling;
pub mod sets;
pub mod tightness;

pub use error::{Error, Result};
pub use geometry::{point, Ball, Point, Tolerances, UnitVector, Window};
pub use oracle::SetOracle;
