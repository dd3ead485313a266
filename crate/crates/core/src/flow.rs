//! Normal magnetic curves `∇_γ' γ' = q φ γ'` of the contact magnetic field.
//!
//! In frame components the tangent `T = T1 e1 + T2 e2 + T3 e3` obeys
//! `T1' = q̃ T2`, `T2' = -q̃ T1`, `T3' = 0`; the position follows from the
//! left-trivialized velocity `γ⁻¹γ' = T1 i/√α + T2 j/√α + T3 k/α`.

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::lie_step::cf4_step;
use crate::sasaki::{
    algebra_to_frame, check_cos, frame_to_algebra, lorentz_force, metric_g, q_tilde_unchecked,
    Connection, FrameVector, SasakiParams,
};
use crate::scalar::{lit, to_f64, Scalar};
use crate::su2::{exp_su2, Su2Element, Su2Vector};

/// One point of a trajectory with its conservation residuals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectorySample<T> {
    pub s: T,
    pub position: Su2Element<T>,
    pub tangent: FrameVector<T>,
    /// `|γ| - 1` measured on the raw coordinates.
    pub residual_norm: T,
    /// `g(T, T) - 1`.
    pub residual_speed: T,
    /// `T3 - cos θ₀`.
    pub residual_angle: T,
}

impl<T: Scalar> TrajectorySample<T> {
    pub fn new(s: T, position: Su2Element<T>, tangent: FrameVector<T>, cos_theta0: T) -> Self {
        Self {
            s,
            position,
            tangent,
            residual_norm: position.norm() - T::one(),
            residual_speed: metric_g(tangent, tangent) - T::one(),
            residual_angle: tangent.a3 - cos_theta0,
        }
    }
}

/// Right-hand side of the tangent system, `(q̃T2, -q̃T1, 0)` with `q̃`
/// evaluated at `cos θ = T3`.
pub fn lorentz_rhs<T: Scalar>(tangent: FrameVector<T>, params: &SasakiParams<T>) -> FrameVector<T> {
    let qt = q_tilde_unchecked(params, tangent.a3);
    FrameVector::new(qt * tangent.a2, -qt * tangent.a1, T::zero())
}

/// Exact solution of the tangent system: `(T1, T2)` turns clockwise by `q̃ s`.
pub fn tangent_closed_form<T: Scalar>(t0: FrameVector<T>, q_tilde: T, s: T) -> FrameVector<T> {
    let (sn, cs) = (q_tilde * s).sin_cos();
    FrameVector::new(t0.a1 * cs + t0.a2 * sn, -t0.a1 * sn + t0.a2 * cs, t0.a3)
}

/// Unit tangent `(0, sin θ, cos θ)` used as the canonical initial direction.
pub fn initial_tangent<T: Scalar>(cos_theta: T) -> Result<FrameVector<T>> {
    check_cos(cos_theta)?;
    let sin = (T::one() - cos_theta * cos_theta).max(T::zero()).sqrt();
    Ok(FrameVector::new(T::zero(), sin, cos_theta))
}

fn check_unit<T: Scalar>(t0: FrameVector<T>) -> Result<()> {
    let dev = (metric_g(t0, t0) - T::one()).abs();
    if !(dev <= lit(1e-10)) {
        return Err(Error::Contract(format!(
            "initial tangent must be unit: |g(t0,t0) - 1| = {:e}",
            to_f64(dev)
        )));
    }
    Ok(())
}

/// Stateful integrator for a single trajectory.
#[derive(Debug, Clone)]
pub struct MagneticStepper<T> {
    params: SasakiParams<T>,
    s: T,
    position: Su2Element<T>,
    tangent: FrameVector<T>,
    cos_theta0: T,
}

impl<T: Scalar> MagneticStepper<T> {
    pub fn new(start: Su2Element<T>, t0: FrameVector<T>, params: SasakiParams<T>) -> Result<Self> {
        check_unit(t0)?;
        Ok(Self {
            params,
            s: T::zero(),
            position: start,
            tangent: t0,
            cos_theta0: t0.a3,
        })
    }

    pub fn s(&self) -> T {
        self.s
    }

    pub fn position(&self) -> Su2Element<T> {
        self.position
    }

    pub fn tangent(&self) -> FrameVector<T> {
        self.tangent
    }

    pub fn sample(&self) -> TrajectorySample<T> {
        TrajectorySample::new(self.s, self.position, self.tangent, self.cos_theta0)
    }

    /// State after a step of length `h`, leaving `self` untouched.
    pub fn peek(&self, h: T) -> (Su2Element<T>, FrameVector<T>) {
        let params = self.params;
        let field = move |_s: T, _y: &Su2Element<T>, z: [T; 3]| {
            let t = FrameVector::from_array(z);
            (
                frame_to_algebra(t, &params),
                lorentz_rhs(t, &params).to_array(),
            )
        };
        let (y, z) = cf4_step(&self.position, self.tangent.to_array(), self.s, h, &field);
        (y, FrameVector::from_array(z))
    }

    /// Moves the stepper to another state of the same trajectory.
    pub fn reset(&mut self, s: T, position: Su2Element<T>, tangent: FrameVector<T>) {
        self.s = s;
        self.position = position;
        self.tangent = tangent;
    }

    pub fn step(&mut self, h: T) {
        let (y, t) = self.peek(h);
        self.position = y;
        self.tangent = t;
        self.s = self.s + h;
    }
}

/// Integrates `n_steps` steps of size `ds` from `start` with unit tangent
/// `t0`; returns `n_steps + 1` samples starting at `s = 0`.
pub fn integrate<T: Scalar>(
    start: Su2Element<T>,
    t0: FrameVector<T>,
    params: &SasakiParams<T>,
    ds: T,
    n_steps: usize,
) -> Result<Vec<TrajectorySample<T>>> {
    if !(ds > T::zero()) {
        return Err(Error::domain("ds", to_f64(ds), "ds > 0"));
    }
    let mut stepper = MagneticStepper::new(start, t0, *params)?;
    let mut out = Vec::with_capacity(n_steps + 1);
    out.push(stepper.sample());
    for n in 1..=n_steps {
        stepper.step(ds);
        // pin s to the grid so long runs do not accumulate summation error
        stepper.s = ds * T::from_usize(n).unwrap();
        out.push(stepper.sample());
    }
    Ok(out)
}

/// Exact trajectory through `start` with initial tangent `t0`:
/// `γ(s) = start · exp(s (X₀ - q̃k/2)) · exp(s q̃ k/2)`, where `X₀` is the
/// left-trivialized initial velocity.
#[derive(Debug, Clone, Copy)]
pub struct ClosedFormTrajectory<T> {
    start: Su2Element<T>,
    t0: FrameVector<T>,
    q_tilde: T,
    drift: Su2Vector<T>,
}

impl<T: Scalar> ClosedFormTrajectory<T> {
    pub fn new(start: Su2Element<T>, t0: FrameVector<T>, params: &SasakiParams<T>) -> Result<Self> {
        check_unit(t0)?;
        let q_tilde = q_tilde_unchecked(params, t0.a3);
        let drift = frame_to_algebra(t0, params) - Su2Vector::k() * (q_tilde / lit(2.0));
        Ok(Self {
            start,
            t0,
            q_tilde,
            drift,
        })
    }

    pub fn q_tilde(&self) -> T {
        self.q_tilde
    }

    /// `X₀ - q̃k/2`; its norm is the angular rate of the left factor.
    pub fn drift(&self) -> Su2Vector<T> {
        self.drift
    }

    pub fn start(&self) -> Su2Element<T> {
        self.start
    }

    pub fn position(&self, s: T) -> Su2Element<T> {
        let half = self.q_tilde * s / lit(2.0);
        self.start
            .compose(&exp_su2(self.drift * s))
            .compose(&exp_su2(Su2Vector::k() * half))
    }

    pub fn tangent(&self, s: T) -> FrameVector<T> {
        tangent_closed_form(self.t0, self.q_tilde, s)
    }

    pub fn sample(&self, s: T) -> TrajectorySample<T> {
        TrajectorySample::new(s, self.position(s), self.tangent(s), self.t0.a3)
    }

    /// Samples on the grid `s = n·ds`, `n = 0..=n_steps`.
    pub fn samples(&self, ds: T, n_steps: usize) -> Vec<TrajectorySample<T>> {
        (0..=n_steps)
            .map(|n| self.sample(ds * T::from_usize(n).unwrap()))
            .collect()
    }
}

/// Curvature, torsion and contact angle of a magnetic curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrenetInvariants<T> {
    pub kappa: T,
    /// Signed torsion; absent for geodesics (`q = 0`).
    pub tau: Option<T>,
    pub theta: T,
    /// `sgn(q)`, taken as `+1` when `q = 0`.
    pub epsilon: T,
}

/// `κ = |q| sin θ`, `τ = q cos θ - 1`, with the binormal `B = N × T`.
pub fn frenet<T: Scalar>(params: &SasakiParams<T>, cos_theta: T) -> Result<FrenetInvariants<T>> {
    check_cos(cos_theta)?;
    let q = params.q();
    let sin = (T::one() - cos_theta * cos_theta).max(T::zero()).sqrt();
    let epsilon = if q < T::zero() { -T::one() } else { T::one() };
    let tau = if q == T::zero() {
        None
    } else {
        Some(q * cos_theta - T::one())
    };
    Ok(FrenetInvariants {
        kappa: q.abs() * sin,
        tau,
        theta: cos_theta.acos(),
        epsilon,
    })
}

fn five_point<T: Scalar, F: Fn(T) -> [T; 3]>(f: F, s: T, h: T) -> [T; 3] {
    let (p2, p1, m1, m2) = (f(s + h + h), f(s + h), f(s - h), f(s - h - h));
    let mut out = [T::zero(); 3];
    for idx in 0..3 {
        out[idx] = (m2[idx] - p2[idx] + lit::<T>(8.0) * (p1[idx] - m1[idx])) / (lit::<T>(12.0) * h);
    }
    out
}

fn central_quat<T: Scalar, F: Fn(T) -> Su2Element<T>>(curve: &F, s: T, h: T) -> [T; 4] {
    let (p, m) = (curve(s + h).coords(), curve(s - h).coords());
    let mut d = [T::zero(); 4];
    for idx in 0..4 {
        d[idx] = (p[idx] - m[idx]) / (h + h);
    }
    d
}

fn five_point_quat<T: Scalar, F: Fn(T) -> Su2Element<T>>(curve: &F, s: T, h: T) -> [T; 4] {
    let (p2, p1) = (curve(s + h + h).coords(), curve(s + h).coords());
    let (m1, m2) = (curve(s - h).coords(), curve(s - h - h).coords());
    let mut d = [T::zero(); 4];
    for idx in 0..4 {
        d[idx] = (m2[idx] - p2[idx] + lit::<T>(8.0) * (p1[idx] - m1[idx])) / (lit::<T>(12.0) * h);
    }
    d
}

/// Frame components of the velocity of `curve` at `s`, by a fourth-order
/// central difference.
pub fn frame_velocity<T: Scalar, F: Fn(T) -> Su2Element<T>>(
    curve: &F,
    s: T,
    h: T,
    params: &SasakiParams<T>,
) -> FrameVector<T> {
    let d = five_point_quat(curve, s, h);
    algebra_to_frame(curve(s).pull_back(d), params)
}

/// Curvature and signed torsion of an arbitrary unit-speed curve measured
/// by nested finite differences, using the binormal `B = N × T`.
pub fn frenet_from_curve<T: Scalar, F: Fn(T) -> Su2Element<T>>(
    curve: &F,
    s: T,
    h: T,
    params: &SasakiParams<T>,
) -> (T, T) {
    let conn = Connection::new(params);
    let tangent = |u: T| frame_velocity(curve, u, h, params);
    let accel = |u: T| {
        let t = tangent(u);
        let dt = FrameVector::from_array(five_point(|v| tangent(v).to_array(), u, h));
        dt + conn.covariant(t, t)
    };
    let normal = |u: T| {
        let a = accel(u);
        a.scale(T::one() / a.norm())
    };
    let t = tangent(s);
    let a = accel(s);
    let kappa = a.norm();
    let n = a.scale(T::one() / kappa);
    let dn = FrameVector::from_array(five_point(|v| normal(v).to_array(), s, h));
    let nabla_n = dn + conn.covariant(t, n);
    let b = n.cross(t);
    (kappa, metric_g(nabla_n, b))
}

/// `|∇_T T - qφT|` for `curve` at `s` using second-order central
/// differences with step `h`; the result is `O(h²)` for an exact solution.
pub fn lorentz_residual_fd<T: Scalar, F: Fn(T) -> Su2Element<T>>(
    curve: &F,
    s: T,
    h: T,
    params: &SasakiParams<T>,
) -> T {
    let conn = Connection::new(params);
    let tangent = |u: T| algebra_to_frame(curve(u).pull_back(central_quat(curve, u, h)), params);
    let t = tangent(s);
    let dt = (tangent(s + h) - tangent(s - h)).scale(T::one() / (h + h));
    let accel = dt + conn.covariant(t, t);
    (accel - lorentz_force(t, params.q())).norm()
}

/// Covariant acceleration `∇_T T` at interior samples of a uniformly spaced
/// trajectory, from central differences of the tangent components.
pub fn acceleration_from_samples<T: Scalar>(
    samples: &[TrajectorySample<T>],
    params: &SasakiParams<T>,
) -> Vec<FrameVector<T>> {
    let conn = Connection::new(params);
    samples
        .windows(3)
        .map(|w| {
            let ds = w[2].s - w[0].s;
            let dt = (w[2].tangent - w[0].tangent).scale(T::one() / ds);
            dt + conn.covariant(w[1].tangent, w[1].tangent)
        })
        .collect()
}

fn ikawa_check<T: Scalar>(cos_theta: T) -> Result<()> {
    check_cos(cos_theta)?;
    if cos_theta.abs() >= T::one() {
        return Err(Error::DegenerateAngle {
            cos_theta: to_f64(cos_theta),
        });
    }
    Ok(())
}

/// The explicit strength-1 magnetic curve of the unit sphere, as the
/// 4-tuple `(x1, x2, x3, x4)` in the C² chart of [`Su2Element::to_c2`].
///
/// With `ω = √(5/4 - cos θ)`, `μ = (cos θ - ½)/ω`:
///
/// ```text
/// x1 = cos(s/2) cos(ωs) - μ sin(s/2) sin(ωs)
/// x2 = sin(s/2) cos(ωs) + μ cos(s/2) sin(ωs)
/// x3 = (sin θ/ω) cos(s/2) sin(ωs)
/// x4 = (sin θ/ω) sin(s/2) sin(ωs)
/// ```
pub fn ikawa_coords<T: Scalar>(cos_theta: T, s: T) -> Result<[T; 4]> {
    ikawa_check(cos_theta)?;
    let omega = (lit::<T>(1.25) - cos_theta).sqrt();
    let sin_theta = (T::one() - cos_theta * cos_theta).sqrt();
    let mu = (cos_theta - lit(0.5)) / omega;
    let (sh, ch) = (s / lit(2.0)).sin_cos();
    let (sw, cw) = (omega * s).sin_cos();
    let amp = sin_theta / omega;
    Ok([
        ch * cw - mu * sh * sw,
        sh * cw + mu * ch * sw,
        amp * ch * sw,
        amp * sh * sw,
    ])
}

pub fn ikawa_curve<T: Scalar>(cos_theta: T, s: T) -> Result<Su2Element<T>> {
    Ok(Su2Element::from_c2(ikawa_coords(cos_theta, s)?))
}

/// The same curve as a closed-form trajectory on the round sphere
/// (`alpha = 1`, `q = 1`) starting at the identity.
pub fn ikawa_trajectory<T: Scalar>(cos_theta: T) -> Result<ClosedFormTrajectory<T>> {
    ikawa_check(cos_theta)?;
    let params = SasakiParams::from_alpha(T::one(), T::one())?;
    ClosedFormTrajectory::new(Su2Element::identity(), initial_tangent(cos_theta)?, &params)
}

fn helix_constraint<T: Scalar>(psi: T, a: T, b: T) -> T {
    let (sp, cp) = psi.sin_cos();
    a * a * cp * cp + b * b * sp * sp - T::one()
}

/// `(cos ψ cos(as), cos ψ sin(as), sin ψ cos(bs), sin ψ sin(bs))` in the C²
/// chart.
pub fn model_helix<T: Scalar>(psi: T, a: T, b: T, s: T) -> Result<Su2Element<T>> {
    let dev = helix_constraint(psi, a, b);
    if !(dev.abs() <= lit(1e-10)) {
        return Err(Error::Contract(format!(
            "helix parameters must satisfy a²cos²ψ + b²sin²ψ = 1 (off by {:e})",
            to_f64(dev)
        )));
    }
    Ok(Su2Element::from_c2(model_helix_coords(psi, a, b, s)))
}

pub fn model_helix_coords<T: Scalar>(psi: T, a: T, b: T, s: T) -> [T; 4] {
    let (sp, cp) = psi.sin_cos();
    let (sa, ca) = (a * s).sin_cos();
    let (sb, cb) = (b * s).sin_cos();
    [cp * ca, cp * sa, sp * cb, sp * sb]
}

/// Frame components of the helix velocity on the round sphere.
pub fn model_helix_tangent<T: Scalar>(psi: T, a: T, b: T, s: T) -> FrameVector<T> {
    let (sp, cp) = psi.sin_cos();
    let (sa, ca) = (a * s).sin_cos();
    let (sb, cb) = (b * s).sin_cos();
    let d = [-a * cp * sa, a * cp * ca, -b * sp * sb, b * sp * cb];
    let point = Su2Element::from_c2(model_helix_coords(psi, a, b, s));
    // C² ordering (x1, x2, x3, x4) -> quaternion (x1, x4, x3, x2)
    let x = point.pull_back([d[0], d[3], d[2], d[1]]);
    FrameVector::new(x.v1, x.v2, x.v3)
}

/// Closing helix parameters for the rational frequency ratio `p = b/a`:
/// `a = 1/√(p² sin²ψ + cos²ψ)`, `b = p a`.
pub fn helix_periodic_params<T: Scalar>(p: Ratio<i64>, psi: T) -> (T, T) {
    let pf = T::from_i64(*p.numer()).unwrap() / T::from_i64(*p.denom()).unwrap();
    let (sp, cp) = psi.sin_cos();
    let a = T::one() / (pf * pf * sp * sp + cp * cp).sqrt();
    (a, pf * a)
}

/// Length after which the helix with ratio `p` closes: `2π·den(p)/a`.
pub fn helix_period<T: Scalar>(p: Ratio<i64>, a: T) -> T {
    T::TAU() * T::from_i64(*p.denom()).unwrap() / a.abs()
}
