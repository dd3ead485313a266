//! Slope quantization on Hopf tori over circles.
//!
//! A magnetic trajectory over a circle of radius `R` is a straight line of
//! slope `σ = cot θ` in the isometric coordinates `(αt, u)` of its Hopf torus,
//! whose lattice is spanned by `(2πα, 0)` and `(αδ, L)`. It closes iff
//! `σ` points along a lattice vector, i.e. iff
//! `Rσ/α - ½(1 - √(1 - 4R²/α))` is rational. The quantity is stored times
//! `α` as the residual, so that `residual/α` is the tested ratio.

use super::rational::{rational_approx, RationalApprox};
use crate::error::{Error, Result};
use crate::sasaki::{check_cos, q_tilde_unchecked, SasakiParams};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlopeData {
    pub sigma: f64,
    pub radius: f64,
    pub alpha: f64,
    /// `Rσ - (α/2)(1 - √(1 - 4R²/α))`.
    pub residual: f64,
    /// Best rational for `residual/α` and its verdict.
    pub ratio: RationalApprox,
}

fn check_radius(radius: f64, params: &SasakiParams<f64>) -> Result<()> {
    if !(radius > 0.0 && radius <= params.r()) {
        return Err(Error::domain("R", radius, "0 < R <= sqrt(alpha)/2"));
    }
    Ok(())
}

fn cap_root(radius: f64, params: &SasakiParams<f64>) -> f64 {
    let r = params.r();
    (1.0 - (radius / r).powi(2)).max(0.0).sqrt()
}

/// `Rσ - (α/2)(1 - √(1 - R²/r²))`.
pub fn slope_residual(radius: f64, sigma: f64, params: &SasakiParams<f64>) -> Result<f64> {
    check_radius(radius, params)?;
    let alpha = params.alpha();
    Ok(radius * sigma - 0.5 * alpha * (1.0 - cap_root(radius, params)))
}

pub fn slope_quantization(
    radius: f64,
    sigma: f64,
    params: &SasakiParams<f64>,
    max_denominator: u64,
    tol: f64,
) -> Result<SlopeData> {
    let residual = slope_residual(radius, sigma, params)?;
    let alpha = params.alpha();
    Ok(SlopeData {
        sigma,
        radius,
        alpha,
        residual,
        ratio: rational_approx(residual / alpha, max_denominator, tol)?,
    })
}

/// `σ = α[2m + n(1 - √(1 - R²/r²))]/(2nR)`: the slope of the lattice
/// direction `m(2πα, 0) + n(αδ, L)` with `δ` the holonomy of the larger cap
/// complement.
pub fn slope_from_mn(m: i64, n: u64, radius: f64, params: &SasakiParams<f64>) -> Result<f64> {
    check_radius(radius, params)?;
    if n == 0 {
        return Err(Error::domain("n", 0.0, "n >= 1"));
    }
    let (mf, nf) = (m as f64, n as f64);
    let alpha = params.alpha();
    Ok(alpha * (2.0 * mf + nf * (1.0 - cap_root(radius, params))) / (2.0 * nf * radius))
}

/// Contact angle and strength of the trajectory whose projection is a
/// circle of radius `R` and whose slope is `σ`; of the two strengths the
/// one with `q̃/2 - cos θ/α = sin θ √(1/(4R²) - 1/α)` is returned, which is
/// the branch the slope formula describes. Returns `(cos θ, q)`.
pub fn trajectory_for_slope(sigma: f64, radius: f64, alpha: f64) -> Result<(f64, f64)> {
    let base = SasakiParams::from_alpha(alpha, 1.0)?;
    check_radius(radius, &base)?;
    if !sigma.is_finite() {
        return Err(Error::NonFinite("sigma"));
    }
    let hyp = (1.0 + sigma * sigma).sqrt();
    let (cos, sin) = (sigma / hyp, 1.0 / hyp);
    let gap = (1.0 / (4.0 * radius * radius) - 1.0 / alpha)
        .max(0.0)
        .sqrt();
    let q_tilde = 2.0 * (cos / alpha + sin * gap);
    let q = q_tilde - 0.5 * (base.c() - 1.0) * cos;
    Ok((cos, q))
}

/// Radius `R = sin θ/(2Ω)` of the projected circle of a trajectory.
pub fn projected_radius(params: &SasakiParams<f64>, cos_theta: f64) -> Result<f64> {
    let omega = super::criteria::drift_rate(params, cos_theta)?;
    let sin = (1.0 - cos_theta * cos_theta).max(0.0).sqrt();
    if sin == 0.0 {
        return Err(Error::DegenerateAngle { cos_theta });
    }
    Ok(sin / (2.0 * omega))
}

/// The slope quantity of an actual trajectory, with the orientation of its
/// projected circle taken into account: `Rσ/α + A/(4πr²)` with `A` the area
/// on the left of the projected circle. It equals `(1 + ρ)/2`, `ρ` the closure
/// ratio, and agrees with `residual/α + 1` on the branch of
/// [`trajectory_for_slope`].
pub fn oriented_slope_ratio(params: &SasakiParams<f64>, cos_theta: f64) -> Result<f64> {
    check_cos(cos_theta)?;
    let radius = projected_radius(params, cos_theta)?;
    let alpha = params.alpha();
    let sin = (1.0 - cos_theta * cos_theta).sqrt();
    let sigma = cos_theta / sin;
    let omega = super::criteria::drift_rate(params, cos_theta)?;
    let cos_psi = (cos_theta / alpha - q_tilde_unchecked(params, cos_theta) / 2.0) / omega;
    Ok(radius * sigma / alpha + 0.5 * (1.0 - cos_psi))
}
