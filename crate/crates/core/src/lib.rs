//! Generalized linearizations of rectangular matrix polynomials.

pub mod backward;
pub mod eigen;
pub mod error;
pub mod factor;
pub mod io;
pub mod linalg;
pub mod matpoly;
pub mod matrix;
pub mod minimal;
pub mod random;
pub mod reduction;
pub mod scalar;
pub mod smith;
pub mod spaces;
pub mod upoly;
pub mod worked;

pub use error::{Error, Result};
pub use matpoly::{MatPoly, Pencil};
pub use matrix::Mat;
pub use scalar::{Field, Rat, Scalar, Tol};
