//! Exact p-adic linear algebra for limits of conjugates of the diagonal
//! Cartan subgroup of SL(n, Q_p).

pub mod cartan;
pub mod error;
pub mod io;
pub mod laurent;
pub mod linalg;
pub mod padic;
pub mod tree;

pub use error::{Error, Result};
pub use padic::{PadicNumber, PrimeContext};
