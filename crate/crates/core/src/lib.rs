//! Lifting curves from the orbit space of an orthogonal representation back
//! to the representation space.
//!
//! Everything in the engine runs on truncated power series ([`Jet`]) with
//! exact rational coefficients. Floating point only shows up when sampling
//! for output and when real roots have no rational value.

pub mod catalog;
pub mod error;
pub mod invariant;
pub mod jet;
pub mod lift;
pub mod linalg;
pub mod poly;
pub mod rat;
pub mod rep;
pub mod rewrite;
pub mod roots;

pub use error::{Error, Result};
pub use jet::{Flatness, Jet};
pub use linalg::Matrix;
pub use poly::MultiPoly;
pub use rat::Rational;
pub use rep::Representation;
