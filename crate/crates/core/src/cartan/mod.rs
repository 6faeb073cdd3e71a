//! Limits of the diagonal Cartan: the Gr correspondence, classification,
//! conjugacy invariants and the built-in tables.

pub mod classify;
pub mod cross_ratio;
pub mod gr;
pub mod invariants;
pub mod presets;
pub mod table;

pub use classify::{block_structure_check, classify_isometry, has_expanding_diagonal, hyperbolic_witness, BlockPartition, Isometry, Witness};
pub use cross_ratio::{
    cross_ratio_set, equivalent_parameters, orbit_dimension, rho_alpha, rho_generators, sl5_rho, sl5_samples,
    sl5_tangent_algebra, CrossRatioSet,
};
pub use gr::{
    exp_into_group, flatness_defect, gr_membership, group_samples, in_unipotent_times_roots, matrix_exp,
    random_algebra_element, GrGroup,
};
pub use invariants::{
    class_label, conjugacy_invariant, generated_algebra, nilpotent_part, structural_invariants, verify_conjugator,
    ConjugacyReport, StructuralInvariants, Verdict,
};
pub use presets::{parse_preset_name, stem_info, table_stems, LimitFamilySpec, StemInfo};
pub use table::{check_family, table_instances, verify_table, FamilyReport, SeparationEvidence, TableOptions, TableReport};
