//! Truncated polynomial jets of planar vector fields and of diffeomorphisms
//! fixing the origin.

mod basis;
mod diffeo;
mod field;
mod poly;

pub use basis::JetBasisIndex;
pub use diffeo::{compose, invert_jet, pushforward, DiffeoJet};
pub use field::{bracket, bracket_full, Component, PolyVF};
pub use poly::Poly;

