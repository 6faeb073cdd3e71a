//! Families g(s) over Q_p[s, 1/s] and limits of their conjugates.

pub mod family;
pub mod limit;
pub mod oracle;
pub mod poly;

pub use family::{laurent_coords, laurent_det, LaurentFamily};
pub use limit::{
    chabauty_group_limit, conjugate_family, grassmann_limit, grassmann_limit_reduction,
    normalize_into_group, AlgebraFamily, GroupLimitReport, GroupSample, LimitReduction,
};
pub use oracle::{numeric_limit_oracle, OracleReport, OracleSummary};
pub use poly::{parse_laurent, LaurentAlgebra, LaurentPoly};
