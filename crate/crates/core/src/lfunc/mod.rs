//! Dirichlet L-functions at desk scale: values, completed and rotated forms,
//! zeros, the argument S(t, χ) and the smoothed explicit formula.

pub mod arg;
pub mod contour;
pub mod eval;
pub mod explicit;
pub mod littlewood;
pub mod zeros;

pub use arg::{family_s, n_formula, s_of_t, s_tilde, ArgumentSample};
pub use contour::{count_in_rect, family_counts, family_counts_for, ContourCount, Rect};
pub use eval::{
    completed_value, family_gauss_data, l_value, l_value_with_derivative, log_deriv, rotated_value, Completed,
    FamilyEvaluator,
};
pub use explicit::{
    dirichlet_remainder, explicit_formula_residual, sigma_t_chi, smoothed_dirichlet_sum, ExplicitResidual,
};
pub use littlewood::{littlewood_identity_check, littlewood_identity_check_with, LittlewoodCheck};
pub use zeros::{
    critical_zeros, critical_zeros_window, refine_root, region_rect, zero_count_region, OffCriticalBox, ZeroList, ZeroPoint,
};
