//! Matrices over Q_p and canonical subspaces of matrix space.

mod algebra;
mod charpoly;
mod matrix;
mod subspace;

pub use algebra::{ch_inverse, check_product_closure, is_abelian_algebra, span_with_identity};
pub use charpoly::{char_poly, eval_poly_at, newton_slopes, NewtonPolygon, Slope};
pub use matrix::PMatrix;
pub use subspace::{echelonize, left_kernel, rref, Ambient, Subspace};
