//! Exact computation of the Heegaard Floer homology of `Σ_g × S^1`.

pub mod cfk;
pub mod error;
pub mod exterior;
pub mod floer;
pub mod lefschetz;
pub mod linalg;
pub mod ring;
pub mod verify;

pub use error::{HfError, Result};
pub use exterior::{eta, omega, Blade, Multivector};
pub use ring::{Coeff, Integer, Rational, Ring};
