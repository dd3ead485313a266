//! Hopf fibration `π(a) = Ad(a)(r k)` onto the sphere `S²(r)`, `r = √α/2`,
//! horizontal lifts, Hopf tubes and the holonomy of circles.

use nalgebra::{Matrix3, SymmetricEigen, Vector3};

use crate::error::{Error, Result};
use crate::flow::{ClosedFormTrajectory, TrajectorySample};
use crate::lie_step::cf4_step;
use crate::sasaki::{check_cos, FrameVector, SasakiParams};
use crate::scalar::{lit, to_f64, Scalar};
use crate::su2::{ad_action, exp_su2, slerp, Su2Element, Su2Vector};

/// Largest arclength step used when integrating horizontal lifts.
pub const LIFT_STEP: f64 = 5e-5;

/// A point of `S²(r) ⊂ su(2) ≅ E³`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpherePoint<T> {
    pub y1: T,
    pub y2: T,
    pub y3: T,
}

impl<T: Scalar> SpherePoint<T> {
    pub fn new(y1: T, y2: T, y3: T) -> Self {
        Self { y1, y2, y3 }
    }

    pub fn from_vector(v: Su2Vector<T>) -> Self {
        Self::new(v.v1, v.v2, v.v3)
    }

    pub fn to_vector(self) -> Su2Vector<T> {
        Su2Vector::new(self.y1, self.y2, self.y3)
    }

    pub fn to_array(self) -> [T; 3] {
        [self.y1, self.y2, self.y3]
    }

    pub fn norm(self) -> T {
        self.to_vector().norm()
    }

    pub fn distance(self, other: Self) -> T {
        (self.to_vector() - other.to_vector()).norm()
    }
}

/// `π(a) = Ad(a)(r k)`.
pub fn project<T: Scalar>(a: &Su2Element<T>, params: &SasakiParams<T>) -> SpherePoint<T> {
    SpherePoint::from_vector(ad_action(a, Su2Vector::k() * params.r()))
}

/// `π_*` of the tangent vector with frame components `t` at `a`:
/// `Ad(a)(T2 i - T1 j)`. The vertical part `T3` is killed.
pub fn project_velocity<T: Scalar>(a: &Su2Element<T>, t: FrameVector<T>) -> Su2Vector<T> {
    ad_action(a, Su2Vector::new(t.a2, -t.a1, T::zero()))
}

/// A base curve on `S²(r)` parametrized on `[0, length]`.
pub trait BaseCurve<T: Scalar> {
    fn length(&self) -> T;
    fn point(&self, u: T) -> Su2Vector<T>;
    fn velocity(&self, u: T) -> Su2Vector<T>;
}

/// A circle on `S²(r)` traversed at unit speed, counterclockwise as seen
/// from the tip of `axis`.
#[derive(Debug, Clone, Copy)]
pub struct SphereCircle<T> {
    axis: Su2Vector<T>,
    start: Su2Vector<T>,
    sphere_radius: T,
    radius: T,
}

impl<T: Scalar> SphereCircle<T> {
    /// The circle through `start` around `axis`; `start` must lie on `S²(r)`.
    pub fn new(
        axis: Su2Vector<T>,
        start: SpherePoint<T>,
        params: &SasakiParams<T>,
    ) -> Result<Self> {
        let r = params.r();
        let p = start.to_vector();
        if !((p.norm() - r).abs() <= lit(1e-10)) {
            return Err(Error::Contract(format!(
                "circle start point has norm {} but the base sphere has radius {}",
                to_f64(p.norm()),
                to_f64(r)
            )));
        }
        let n = axis.norm();
        if !(n > T::zero()) {
            return Err(Error::Contract("circle axis must be nonzero".into()));
        }
        let axis = axis.scale(T::one() / n);
        let radius = axis.cross(p).norm();
        if !(radius > T::zero()) {
            return Err(Error::Contract("circle degenerates to a point".into()));
        }
        Ok(Self {
            axis,
            start: p,
            sphere_radius: r,
            radius,
        })
    }

    /// The circle of radius `R` about `axis` whose starting point is the
    /// projection of `reference` onto the circle.
    pub fn with_radius(
        axis: Su2Vector<T>,
        radius: T,
        reference: Su2Vector<T>,
        params: &SasakiParams<T>,
    ) -> Result<Self> {
        let r = params.r();
        if !(radius > T::zero() && radius <= r) {
            return Err(Error::domain("R", to_f64(radius), "0 < R <= r"));
        }
        let n = axis.scale(T::one() / axis.norm());
        let side = reference - n * n.dot(reference);
        if !(side.norm() > T::zero()) {
            return Err(Error::Contract(
                "reference direction is parallel to the axis".into(),
            ));
        }
        let e = side.scale(T::one() / side.norm());
        let height = (r * r - radius * radius).max(T::zero()).sqrt();
        Self::new(n, SpherePoint::from_vector(n * height + e * radius), params)
    }

    /// The projection of a closed-form magnetic trajectory: the orbit of
    /// `π(γ₀)` under rotation about `Ad(γ₀)(X₀ - q̃k/2)`.
    pub fn of_trajectory(traj: &ClosedFormTrajectory<T>, params: &SasakiParams<T>) -> Result<Self> {
        let axis = ad_action(&traj.start(), traj.drift());
        Self::new(axis, project(&traj.start(), params), params)
    }

    pub fn axis(&self) -> Su2Vector<T> {
        self.axis
    }

    pub fn radius(&self) -> T {
        self.radius
    }

    /// Cosine of the polar angle of the circle about its axis.
    pub fn cos_polar(&self) -> T {
        self.axis.dot(self.start) / self.sphere_radius
    }

    /// Area of the cap on the left of the direction of travel, the one
    /// containing the axis.
    pub fn left_area(&self) -> T {
        let r = self.sphere_radius;
        T::TAU() * r * r * (T::one() - self.cos_polar())
    }

    fn angle(&self, u: T) -> T {
        u / self.radius
    }
}

fn rotate<T: Scalar>(n: Su2Vector<T>, p: Su2Vector<T>, phi: T) -> Su2Vector<T> {
    let (s, c) = phi.sin_cos();
    p * c + n.cross(p) * s + n * (n.dot(p) * (T::one() - c))
}

impl<T: Scalar> BaseCurve<T> for SphereCircle<T> {
    fn length(&self) -> T {
        T::TAU() * self.radius
    }

    fn point(&self, u: T) -> Su2Vector<T> {
        rotate(self.axis, self.start, self.angle(u))
    }

    fn velocity(&self, u: T) -> Su2Vector<T> {
        self.axis.cross(self.point(u)).scale(T::one() / self.radius)
    }
}

/// Piecewise cubic Hermite curve through sampled points and velocities.
#[derive(Debug, Clone)]
pub struct SampledCurve<T> {
    u: Vec<T>,
    points: Vec<Su2Vector<T>>,
    velocities: Vec<Su2Vector<T>>,
}

impl<T: Scalar> SampledCurve<T> {
    pub fn new(
        u: Vec<T>,
        points: Vec<Su2Vector<T>>,
        velocities: Vec<Su2Vector<T>>,
    ) -> Result<Self> {
        if u.len() < 2 {
            return Err(Error::Empty);
        }
        if points.len() != u.len() || velocities.len() != u.len() {
            return Err(Error::Contract("sample arrays differ in length".into()));
        }
        if u.windows(2).any(|w| !(w[1] > w[0])) || u[0] != T::zero() {
            return Err(Error::Contract(
                "curve parameter must start at 0 and increase strictly".into(),
            ));
        }
        Ok(Self {
            u,
            points,
            velocities,
        })
    }

    /// The projection of a trajectory, reparametrized by the arclength of the
    /// projected curve (the speed of `π∘γ` is `√(T1² + T2²)`).
    pub fn from_trajectory(
        samples: &[TrajectorySample<T>],
        params: &SasakiParams<T>,
    ) -> Result<Self> {
        let (u, points, velocities) = projected_arclength(samples, params);
        let speeds: Vec<T> = samples
            .iter()
            .map(|p| (p.tangent.a1 * p.tangent.a1 + p.tangent.a2 * p.tangent.a2).sqrt())
            .collect();
        if speeds.iter().any(|v| !(*v > T::zero())) {
            return Err(Error::Contract(
                "trajectory has vertical samples; its projection is not regular".into(),
            ));
        }
        let velocities = velocities
            .into_iter()
            .zip(speeds)
            .map(|(v, speed)| v.scale(T::one() / speed))
            .collect();
        Self::new(u, points, velocities)
    }

    fn locate(&self, u: T) -> usize {
        let idx = self.u.partition_point(|x| *x <= u);
        idx.clamp(1, self.u.len() - 1) - 1
    }
}

impl<T: Scalar> BaseCurve<T> for SampledCurve<T> {
    fn length(&self) -> T {
        *self.u.last().unwrap()
    }

    fn point(&self, u: T) -> Su2Vector<T> {
        let i = self.locate(u);
        let h = self.u[i + 1] - self.u[i];
        let t = (u - self.u[i]) / h;
        let (t2, t3) = (t * t, t * t * t);
        let two: T = lit(2.0);
        let three: T = lit(3.0);
        let h00 = two * t3 - three * t2 + T::one();
        let h10 = t3 - two * t2 + t;
        let h01 = -two * t3 + three * t2;
        let h11 = t3 - t2;
        self.points[i] * h00
            + self.velocities[i] * (h10 * h)
            + self.points[i + 1] * h01
            + self.velocities[i + 1] * (h11 * h)
    }

    fn velocity(&self, u: T) -> Su2Vector<T> {
        let i = self.locate(u);
        let h = self.u[i + 1] - self.u[i];
        let t = (u - self.u[i]) / h;
        let t2 = t * t;
        let six: T = lit(6.0);
        let d00 = (six * t2 - six * t) / h;
        let d10 = lit::<T>(3.0) * t2 - lit::<T>(4.0) * t + T::one();
        let d01 = (six * t - six * t2) / h;
        let d11 = lit::<T>(3.0) * t2 - lit::<T>(2.0) * t;
        self.points[i] * d00
            + self.velocities[i] * d10
            + self.points[i + 1] * d01
            + self.velocities[i + 1] * d11
    }
}

/// Projected points `π(γ)`, their velocities `π_*γ'` and the cumulative
/// trapezoidal arclength `u` of the projected curve.
#[allow(clippy::type_complexity)]
pub fn projected_arclength<T: Scalar>(
    samples: &[TrajectorySample<T>],
    params: &SasakiParams<T>,
) -> (Vec<T>, Vec<Su2Vector<T>>, Vec<Su2Vector<T>>) {
    let mut u = Vec::with_capacity(samples.len());
    let mut acc = T::zero();
    let speed = |p: &TrajectorySample<T>| {
        (p.tangent.a1 * p.tangent.a1 + p.tangent.a2 * p.tangent.a2).sqrt()
    };
    for (idx, smp) in samples.iter().enumerate() {
        if idx > 0 {
            let prev = &samples[idx - 1];
            acc = acc + (smp.s - prev.s) * (speed(prev) + speed(smp)) / lit(2.0);
        }
        u.push(acc);
    }
    let points = samples
        .iter()
        .map(|p| project(&p.position, params).to_vector())
        .collect();
    let velocities = samples
        .iter()
        .map(|p| project_velocity(&p.position, p.tangent))
        .collect();
    (u, points, velocities)
}

/// A horizontal lift sampled on a uniform grid of the base arclength.
#[derive(Debug, Clone)]
pub struct HorizontalLift<T> {
    step: T,
    samples: Vec<Su2Element<T>>,
    residuals: Vec<T>,
}

impl<T: Scalar> HorizontalLift<T> {
    pub fn step(&self) -> T {
        self.step
    }

    pub fn length(&self) -> T {
        self.step * T::from_usize(self.samples.len() - 1).unwrap()
    }

    pub fn samples(&self) -> &[Su2Element<T>] {
        &self.samples
    }

    /// `|⟨β̂⁻¹β̂', k⟩|` at every sample, with `β̂'` from central differences
    /// (one-sided at the ends).
    pub fn horizontality_residuals(&self) -> &[T] {
        &self.residuals
    }

    pub fn max_horizontality_residual(&self) -> T {
        self.residuals.iter().fold(T::zero(), |m, r| m.max(*r))
    }

    /// The lift at `u ∈ [0, length]`, by geodesic interpolation between
    /// neighbouring samples.
    pub fn at(&self, u: T) -> Result<Su2Element<T>> {
        let len = self.length();
        let slack = self.step * lit(1e-9);
        if !(u >= -slack && u <= len + slack) {
            return Err(Error::domain("u", to_f64(u), "0 <= u <= lift length"));
        }
        let pos = (u / self.step).max(T::zero());
        let last = self.samples.len() - 1;
        let i = pos
            .floor()
            .to_usize()
            .unwrap_or(0)
            .min(last.saturating_sub(1));
        if last == 0 {
            return Ok(self.samples[0]);
        }
        let t = (pos - T::from_usize(i).unwrap()).min(T::one());
        Ok(slerp(&self.samples[i], &self.samples[i + 1], t))
    }

    /// `β̂(0)⁻¹ β̂(L)`; for a closed base curve it lies on the fiber through
    /// `β̂(0)`.
    pub fn endpoint_offset(&self) -> Su2Element<T> {
        self.samples[0]
            .inverse()
            .compose(self.samples.last().unwrap())
    }

    /// Fiber phase `t` with `β̂(L) = β̂(0) exp(t k)`, in `(-π, π]`.
    pub fn endpoint_phase(&self) -> T {
        let off = self.endpoint_offset();
        off.x3().atan2(off.x0())
    }
}

/// Distance of `a - b` to the nearest multiple of `2π`.
pub fn phase_difference<T: Scalar>(a: T, b: T) -> T {
    let tau = T::TAU();
    let d = (a - b) % tau;
    let d = if d < T::zero() { d + tau } else { d };
    d.min(tau - d)
}

/// Integrates the horizontal lift `β̂' = β̂ H` with
/// `H = (-w2 i + w1 j)/(2r)`, `w = Ad(β̂⁻¹) β'`, starting at `start`.
pub fn horizontal_lift<T: Scalar, C: BaseCurve<T> + ?Sized>(
    beta: &C,
    start: &Su2Element<T>,
    params: &SasakiParams<T>,
) -> Result<HorizontalLift<T>> {
    let b0 = SpherePoint::from_vector(beta.point(T::zero()));
    let gap = project(start, params).distance(b0);
    if !(gap <= lit(1e-8)) {
        return Err(Error::Contract(format!(
            "lift start projects {:e} away from the base curve",
            to_f64(gap)
        )));
    }
    let len = beta.length();
    let n = (len / lit(LIFT_STEP)).ceil().to_usize().unwrap_or(0).max(1);
    let h = len / T::from_usize(n).unwrap();
    let two_r = params.r() + params.r();
    let field = |u: T, y: &Su2Element<T>, _z: [T; 3]| {
        let w = ad_action(&y.inverse(), beta.velocity(u));
        (
            Su2Vector::new(-w.v2, w.v1, T::zero()) * (T::one() / two_r),
            [T::zero(); 3],
        )
    };
    let mut samples = Vec::with_capacity(n + 1);
    let mut y = *start;
    samples.push(y);
    for idx in 0..n {
        let u = h * T::from_usize(idx).unwrap();
        y = cf4_step(&y, [T::zero(); 3], u, h, &field).0;
        samples.push(y);
    }
    let residuals = horizontality(&samples, h);
    Ok(HorizontalLift {
        step: h,
        samples,
        residuals,
    })
}

fn horizontality<T: Scalar>(samples: &[Su2Element<T>], h: T) -> Vec<T> {
    let m = samples.len();
    (0..m)
        .map(|i| {
            let (lo, hi) = if m < 2 {
                (0, 0)
            } else if i == 0 {
                (0, 1)
            } else if i == m - 1 {
                (m - 2, m - 1)
            } else {
                (i - 1, i + 1)
            };
            if lo == hi {
                return T::zero();
            }
            let (p, q) = (samples[hi].coords(), samples[lo].coords());
            let span = h * T::from_usize(hi - lo).unwrap();
            let mut d = [T::zero(); 4];
            for k in 0..4 {
                d[k] = (p[k] - q[k]) / span;
            }
            samples[i].pull_back(d).v3.abs()
        })
        .collect()
}

/// A point of `S²(r)`'s preimage: any `a` with `π(a) = p`.
pub fn point_over<T: Scalar>(p: SpherePoint<T>) -> Su2Element<T> {
    Su2Element::aligning_k_to(p.to_vector())
}

/// The Hopf tube `F(t, u) = β̂(u) exp(t k)`; closes after `t = 2π`
/// (fiber length `2πα` in the metric `α² dt² + du²`).
pub fn hopf_tube<T: Scalar>(lift: &HorizontalLift<T>, t: T, u: T) -> Result<Su2Element<T>> {
    Ok(lift.at(u)?.compose(&exp_su2(Su2Vector::k() * t)))
}

/// Quad mesh of a Hopf torus on an `nt × nu` grid, wrapped in both
/// directions.
#[derive(Debug, Clone)]
pub struct TubeMesh<T> {
    pub nt: usize,
    pub nu: usize,
    /// Row-major in `u`: vertex `(i, j)` sits at index `j * nt + i`.
    pub vertices: Vec<Su2Element<T>>,
}

impl<T> TubeMesh<T> {
    /// Zero-based quads `(i,j) → (i+1,j) → (i+1,j+1) → (i,j+1)`, indices
    /// taken modulo the grid.
    pub fn quads(&self) -> Vec<[usize; 4]> {
        let (nt, nu) = (self.nt, self.nu);
        let id = |i: usize, j: usize| (j % nu) * nt + (i % nt);
        let mut out = Vec::with_capacity(nt * nu);
        for j in 0..nu {
            for i in 0..nt {
                out.push([id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)]);
            }
        }
        out
    }
}

/// Samples `F̃(t, u) = β̂(u) exp((t - δu/L) k)`, which agrees with the tube
/// and matches up seamlessly across `u = L` for a closed base curve.
pub fn tube_mesh<T: Scalar>(lift: &HorizontalLift<T>, nt: usize, nu: usize) -> Result<TubeMesh<T>> {
    if nt < 3 {
        return Err(Error::domain("nt", nt as f64, "nt >= 3"));
    }
    if nu < 3 {
        return Err(Error::domain("nu", nu as f64, "nu >= 3"));
    }
    let len = lift.length();
    let delta = lift.endpoint_phase();
    let mut vertices = Vec::with_capacity(nt * nu);
    for j in 0..nu {
        let u = len * T::from_usize(j).unwrap() / T::from_usize(nu).unwrap();
        let shift = delta * u / len;
        let base = lift.at(u)?;
        for i in 0..nt {
            let t = T::TAU() * T::from_usize(i).unwrap() / T::from_usize(nt).unwrap();
            vertices.push(base.compose(&exp_su2(Su2Vector::k() * (t - shift))));
        }
    }
    Ok(TubeMesh { nt, nu, vertices })
}

/// Radius, length, enclosed area and geodesic curvature of a circle on
/// `S²(r)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircleData<T> {
    pub radius: T,
    pub length: T,
    pub area: T,
    pub kappa_beta: T,
}

/// `L = 2πR`, `A = 2πr(r - √(r² - R²))`, `κ_β = √(r² - R²)/(rR)`.
pub fn circle_data<T: Scalar>(radius: T, params: &SasakiParams<T>) -> Result<CircleData<T>> {
    let r = params.r();
    if !(radius > T::zero() && radius <= r) {
        return Err(Error::domain("R", to_f64(radius), "0 < R <= r"));
    }
    let h = (r * r - radius * radius).max(T::zero()).sqrt();
    Ok(CircleData {
        radius,
        length: T::TAU() * radius,
        area: T::TAU() * r * (r - h),
        kappa_beta: h / (r * radius),
    })
}

/// `δ = A/(2r²)` for an enclosed oriented area `|A| ≤ 4πr²`.
pub fn holonomy<T: Scalar>(area: T, params: &SasakiParams<T>) -> Result<T> {
    let r2 = params.r() * params.r();
    let bound = lit::<T>(4.0) * T::PI() * r2;
    if !(area.abs() <= bound * (T::one() + T::epsilon() * lit(8.0))) {
        return Err(Error::domain("A", to_f64(area), "|A| <= 4 pi r^2"));
    }
    Ok(area / (r2 + r2))
}

/// Generators of the lattice `Γ` with `H_β ≅ R²/Γ` in the isometric
/// coordinates `(αt, u)` of a Hopf torus.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeSpec<T> {
    pub gen_fiber: [T; 2],
    pub gen_horizontal: [T; 2],
    pub delta: T,
}

impl<T: Scalar> LatticeSpec<T> {
    /// Area of a fundamental domain, `|det|`.
    pub fn covolume(&self) -> T {
        (self.gen_fiber[0] * self.gen_horizontal[1] - self.gen_fiber[1] * self.gen_horizontal[0])
            .abs()
    }
}

/// `(2πα, 0)` and `(αδ, L)`: going once around the base circle shifts the
/// fiber phase by `δ`, which is a distance `αδ` along the fiber.
pub fn lattice<T: Scalar>(
    circle: &CircleData<T>,
    params: &SasakiParams<T>,
) -> Result<LatticeSpec<T>> {
    let delta = holonomy(circle.area, params)?;
    let alpha = params.alpha();
    Ok(LatticeSpec {
        gen_fiber: [T::TAU() * alpha, T::zero()],
        gen_horizontal: [alpha * delta, circle.length],
        delta,
    })
}

fn sin_of<T: Scalar>(cos_theta: T) -> Result<T> {
    check_cos(cos_theta)?;
    let sin = (T::one() - cos_theta * cos_theta).max(T::zero()).sqrt();
    if sin == T::zero() {
        return Err(Error::DegenerateAngle {
            cos_theta: to_f64(cos_theta),
        });
    }
    Ok(sin)
}

/// `(q - 2cos θ)/(ε sin θ)` on the round sphere (`α = 1`).
pub fn projected_curvature_from_q<T: Scalar>(q: T, cos_theta: T) -> Result<T> {
    if q == T::zero() {
        return Err(Error::domain("q", to_f64(q), "q != 0"));
    }
    let sin = sin_of(cos_theta)?;
    let eps = q.signum();
    Ok((q - lit::<T>(2.0) * cos_theta) / (eps * sin))
}

/// `(q̃ - 2cos θ/α)/(ε sin θ)` for any `α`; equals
/// [`projected_curvature_from_q`] when `α = 1`. A positive value means the
/// projected circle turns right when `q > 0` (left when `q < 0`) as seen
/// from outside the sphere.
pub fn projected_curvature<T: Scalar>(params: &SasakiParams<T>, cos_theta: T) -> Result<T> {
    let q = params.q();
    if q == T::zero() {
        return Err(Error::domain("q", to_f64(q), "q != 0"));
    }
    let sin = sin_of(cos_theta)?;
    let qt = q + (params.c() - T::one()) * cos_theta / lit(2.0);
    Ok((qt - lit::<T>(2.0) * cos_theta / params.alpha()) / (q.signum() * sin))
}

/// `(κ² + τ² - 1)/κ` from the Frenet data.
pub fn projected_curvature_from_frenet<T: Scalar>(kappa: T, tau: T) -> T {
    (kappa * kappa + (tau - T::one()) * (tau + T::one())) / kappa
}

/// `H = κ_β / 2`.
pub fn tube_mean_curvature<T: Scalar>(kappa_beta: T) -> T {
    kappa_beta / lit(2.0)
}

/// Largest component of the measured acceleration `∇_T T` lying in the
/// tangent plane `span{T, ξ}` of the Hopf tube, over interior samples.
pub fn geodesic_on_tube_check<T: Scalar>(
    samples: &[TrajectorySample<T>],
    params: &SasakiParams<T>,
) -> T {
    let acc = crate::flow::acceleration_from_samples(samples, params);
    let mut worst = T::zero();
    for (a, smp) in acc.iter().zip(samples.iter().skip(1)) {
        let t = smp.tangent;
        let along_t = a.dot(t);
        let mut xi = FrameVector::e3() - t.scale(t.a3);
        let n = xi.norm();
        let along_xi = if n > lit(1e-12) {
            xi = xi.scale(T::one() / n);
            a.dot(xi)
        } else {
            T::zero()
        };
        worst = worst.max((along_t * along_t + along_xi * along_xi).sqrt());
    }
    worst
}

/// Least-squares circle through points of `E³`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircleFit {
    pub center: [f64; 3],
    /// Unit normal, oriented so that the points run counterclockwise
    /// about it.
    pub normal: [f64; 3],
    pub radius: f64,
    /// Largest distance from a point to the fitted circle.
    pub residual: f64,
}

impl CircleFit {
    /// Signed height `n·c` of the circle's plane above the origin.
    pub fn height(&self) -> f64 {
        Vector3::from(self.normal).dot(&Vector3::from(self.center))
    }

    /// Area of the cap of the sphere of radius `r` on the left of the
    /// direction of travel.
    pub fn left_area(&self, r: f64) -> f64 {
        std::f64::consts::TAU * r * (r - self.height())
    }

    /// Geodesic curvature on the sphere of radius `r`, positive when the
    /// curve turns left as seen from outside.
    pub fn geodesic_curvature(&self, r: f64) -> f64 {
        self.height() / (r * self.radius)
    }
}

/// Plane by principal components, then an algebraic circle fit in the
/// plane. Needs at least three non-collinear points.
pub fn fit_circle(points: &[[f64; 3]]) -> Result<CircleFit> {
    if points.len() < 3 {
        return Err(Error::Contract(
            "circle fit needs at least three points".into(),
        ));
    }
    let m = points.len() as f64;
    let vs: Vec<Vector3<f64>> = points.iter().map(|p| Vector3::from(*p)).collect();
    let mean = vs.iter().fold(Vector3::zeros(), |a, v| a + v) / m;
    let mut cov = Matrix3::zeros();
    for v in &vs {
        let d = v - mean;
        cov += d * d.transpose();
    }
    let eig = SymmetricEigen::new(cov);
    let mut order = [0usize, 1, 2];
    order.sort_by(|a, b| eig.eigenvalues[*a].total_cmp(&eig.eigenvalues[*b]));
    let mut normal: Vector3<f64> = eig.eigenvectors.column(order[0]).into();
    let e1: Vector3<f64> = eig.eigenvectors.column(order[2]).into();
    let e2 = normal.cross(&e1);

    // Kasa fit: x² + y² + D x + E y + F = 0
    let mut ata = nalgebra::Matrix3::<f64>::zeros();
    let mut atb = Vector3::<f64>::zeros();
    for v in &vs {
        let d = v - mean;
        let (x, y) = (d.dot(&e1), d.dot(&e2));
        let row = Vector3::new(x, y, 1.0);
        ata += row * row.transpose();
        atb -= row * (x * x + y * y);
    }
    let sol = ata
        .lu()
        .solve(&atb)
        .ok_or_else(|| Error::Contract("points are collinear".into()))?;
    let (cx, cy) = (-sol[0] / 2.0, -sol[1] / 2.0);
    let radius = (cx * cx + cy * cy - sol[2]).max(0.0).sqrt();
    let center = mean + e1 * cx + e2 * cy;

    let mut winding = 0.0;
    for w in vs.windows(2) {
        winding += (w[0] - center).cross(&(w[1] - center)).dot(&normal);
    }
    if winding < 0.0 {
        normal = -normal;
    }
    let residual = vs.iter().fold(0.0f64, |acc, v| {
        let d = v - center;
        let off = d.dot(&normal);
        let inplane = (d - normal * off).norm();
        acc.max((off * off + (inplane - radius).powi(2)).sqrt())
    });
    Ok(CircleFit {
        center: center.into(),
        normal: normal.into(),
        radius,
        residual,
    })
}
