//! Classification of singular points of planar vector fields by their jets.

pub mod centralizer;
pub mod classify;
pub mod degeneracy;
pub mod error;
pub mod family;
pub mod io;
pub mod jet;
pub mod linalg;
pub mod sampling;
pub mod scalar;

pub use error::{Error, Result};
pub use jet::{bracket, compose, invert_jet, pushforward, DiffeoJet, JetBasisIndex, PolyVF};
pub use scalar::{Field, Rational, Scalar, Tolerances};
