//! Arithmetic in Q_p.

mod context;
pub mod literal;
mod number;
mod power_class;
mod series;

pub use context::{is_prime, PrimeContext, DEFAULT_PRECISION};
pub use number::{PadicNumber, Valuation};
pub use power_class::{
    count_power_classes, kth_root, power_class_decide, roots_of_unity, PowerClassDecision,
    PowerClassLabel, PowerClassTable,
};
pub use series::{nth_root, padic_exp, padic_log};

/// Multiplicative inverse; `DivisionByZero` on exact zero.
pub fn padic_inv(x: &PadicNumber) -> crate::Result<PadicNumber> {
    x.inv()
}
