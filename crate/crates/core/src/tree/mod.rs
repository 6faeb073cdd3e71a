//! The Bruhat-Tits tree of SL(2, Q_p).

pub mod ray;
pub mod vertex;

pub use ray::{
    fixing_exponent, parahoric_limit_check, stabilization_check, LimitElementRow, ParahoricReport, RayPoint,
    StabilizationReport, UnipotentRow,
};
pub use vertex::{
    act, ball, displacement, distance, min_displacement_in_ball, parse_vertex, sphere, stabilizer_membership,
    translation_length, translation_length_by_ball, LatticeVertex,
};
