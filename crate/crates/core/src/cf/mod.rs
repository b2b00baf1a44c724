//! Continued fraction expansion and the approximation theory built on it.

mod approximants;
mod convergence;
mod expand;
mod expression;
mod periodic;
mod quality;

pub use approximants::{approximants, cf_value_stream, evaluate_exact, ApproximantPair, Convergents};
pub use convergence::{classify_convergence, Convergence};
pub use expand::{expand_exact, expand_series, expand_stream, Expansion};
pub use expression::{ContinuedFraction, ExpansionStatus};
pub use periodic::{
    detect_periodicity, find_period, periodic_quadratic, unroll, verify_quadratic, PeriodVerdict,
    Periodicity, Quadratic, DEFAULT_MARGIN,
};
pub use quality::{
    best_approximation_check, error_valuation, error_valuation_exact, prefix_agreement_bound,
    BestApproximation,
};
