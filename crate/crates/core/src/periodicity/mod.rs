//! Periodicity of magnetic trajectories: rationality tests, closed-form
//! criteria, slope quantization and numerical period measurement.

pub mod criteria;
pub mod period;
pub mod rational;
pub mod slope;

pub use criteria::{
    closure_ratio, closure_ratio_exact, drift_rate, ikawa_omega, ikawa_omega_exact,
    period_from_ratio, predicted_period, s3_criterion, s3_criterion_exact, ExactCriterion,
};
pub use period::{measure_period, scan, PeriodSearch, ScanRow, TrajectorySource};
pub use rational::{
    exact_from_f64, format_rational, limit_denominator, parse_rational, rational_approx,
    rational_sqrt, to_f64, RationalApprox, Verdict, DEFAULT_MAX_DENOMINATOR, DEFAULT_TOLERANCE,
};
pub use slope::{
    oriented_slope_ratio, projected_radius, slope_from_mn, slope_quantization, slope_residual,
    trajectory_for_slope, SlopeData,
};
