//! Identity checks producing [`VerificationReport`]s.

mod chain;
mod distributional;
mod kernel_checks;
mod report;
mod suite;

pub use chain::{
    check_arc_identity, check_cos_power_legendre, check_duplication, check_gegenbauer, check_laplace_cosine,
    check_t_integral_form, ARC_IDENTITY_TOL, COS_POWER_TOL, DUPLICATION_TOL, GEGENBAUER_TOL, LAPLACE_COSINE_TOL,
    T_INTEGRAL_TOL,
};
pub use report::{format_number, to_json, write_csv, VerificationReport, CSV_COLUMNS};
pub use kernel_checks::{
    check_integral_vs_closed, check_integral_vs_closed_with, check_resolvent_limit, check_resolvent_limit_translation,
    check_resolvent_symmetry, INTEGRAL_VS_CLOSED_TOL, INVARIANCE_TOL,
    RESOLVENT_LIMIT_TOL,
};
pub use distributional::{check_distributional, DISTRIBUTIONAL_TOL, MAX_EXCLUSION_RADIUS};
pub use suite::{
    axis_point, chain_cases, distributional_cases, distributional_constant, distributional_test_functions, kernel_cases,
    run_cases, run_suite, suite_cases, theorem_grid, Case, Suite, SuiteOutcome, CHAIN_ARC_TOL, DRAWS, EXCLUSION_RADIUS,
};
