//! Finite-truncation checks for index and caloron bundle gerbes.

pub mod caloron;
pub mod detline;
pub mod error;
pub mod fock;
pub mod linalg;
pub mod moduli;
pub mod spectral;

pub use error::{Error, Result};
pub use linalg::{seeded_rng, CMatrix};
pub use num_complex::Complex64;
pub use num_rational::Rational64;
pub use rand_chacha::ChaCha8Rng;
