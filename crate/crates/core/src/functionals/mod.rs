//! Functionals, rank functions, the realization map `α` and comparison.

pub mod alpha;
pub mod comparison;
pub mod cone;
pub mod edwards;
pub mod functional;
pub mod linalg;
pub mod rank;

pub use alpha::{
    alpha, check_alpha_additive, check_alpha_properties, check_realization, is_supersoft, AlphaResult, Realization,
};
pub use comparison::{check_supersoft_equivalences, comparison_suite, ComparisonParams, ComparisonReport};
pub use cone::{dimension_function_cone, StateCone};
pub use edwards::check_edwards;
pub use functional::{evaluate, extend_functional, functional_basis, is_densely_finite, Functional};
pub use rank::{check_hat_preserves_inf, chisel, rank, Chisel, RankFunction};
