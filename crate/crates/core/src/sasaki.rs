//! Left-invariant Sasakian structures on SU(2) (Berger spheres).
//!
//! For `alpha > 0` the metric `g = alpha g₁ + alpha(alpha - 1) η₁ ⊗ η₁` has
//! φ-sectional curvature `c = 4/alpha - 3` and the orthonormal frame
//! `e1 = E1/√alpha, e2 = E2/√alpha, e3 = ξ = E3/alpha`, where `E1, E2, E3` are
//! the left translates of `i, j, k`. Tangent vectors are carried as
//! [`FrameVector`] components over that frame.
//!
//! The Levi-Civita connection is not tabulated: it is obtained from the frame
//! structure constants through the Koszul formula, and the curvature follows
//! from the connection.

use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::{lit, to_f64, Scalar};
use crate::su2::{bracket, inner_bi, Su2Vector};

/// Deformation parameter together with the quantities derived from it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SasakiParams<T> {
    alpha: T,
    c: T,
    q: T,
    r: T,
}

impl<T: Scalar> SasakiParams<T> {
    pub fn from_alpha(alpha: T, q: T) -> Result<Self> {
        if !(alpha > T::zero()) || !alpha.is_finite() {
            return Err(Error::domain("alpha", to_f64(alpha), "alpha > 0"));
        }
        if !q.is_finite() {
            return Err(Error::NonFinite("q"));
        }
        Ok(Self {
            alpha,
            c: lit::<T>(4.0) / alpha - lit(3.0),
            q,
            r: alpha.sqrt() / lit(2.0),
        })
    }

    /// Same geometry with a different magnetic strength.
    pub fn with_strength(self, q: T) -> Self {
        Self { q, ..self }
    }

    pub fn alpha(&self) -> T {
        self.alpha
    }

    /// φ-sectional curvature.
    pub fn c(&self) -> T {
        self.c
    }

    /// Magnetic strength.
    pub fn q(&self) -> T {
        self.q
    }

    /// Radius of the base sphere S²(r) of the Hopf fibration.
    pub fn r(&self) -> T {
        self.r
    }
}

pub fn params_from_alpha<T: Scalar>(alpha: T, q: T) -> Result<SasakiParams<T>> {
    SasakiParams::from_alpha(alpha, q)
}

/// φ-sectional curvature after a D-homothetic deformation with factor `a`.
pub fn d_homothetic<T: Scalar>(c: T, a: T) -> Result<T> {
    if !(a > T::zero()) {
        return Err(Error::domain("a", to_f64(a), "a > 0"));
    }
    Ok((c + lit(3.0)) / a - lit(3.0))
}

/// Components over the orthonormal frame `{e1, e2, e3}`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FrameVector<T> {
    pub a1: T,
    pub a2: T,
    pub a3: T,
}

impl<T: Scalar> FrameVector<T> {
    pub fn new(a1: T, a2: T, a3: T) -> Self {
        Self { a1, a2, a3 }
    }

    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero(), T::zero())
    }

    /// Frame vector `e_index` for `index` in `1..=3`.
    pub fn basis(index: usize) -> Result<Self> {
        let mut a = [T::zero(); 3];
        *a.get_mut(index.wrapping_sub(1))
            .ok_or(Error::FrameIndex(index))? = T::one();
        Ok(Self::from_array(a))
    }

    pub fn e1() -> Self {
        Self::new(T::one(), T::zero(), T::zero())
    }
    pub fn e2() -> Self {
        Self::new(T::zero(), T::one(), T::zero())
    }
    pub fn e3() -> Self {
        Self::new(T::zero(), T::zero(), T::one())
    }

    pub fn from_array(a: [T; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }

    pub fn to_array(self) -> [T; 3] {
        [self.a1, self.a2, self.a3]
    }

    pub fn dot(self, o: Self) -> T {
        self.a1 * o.a1 + self.a2 * o.a2 + self.a3 * o.a3
    }

    /// Cross product for the orientation `e1 × e2 = e3`.
    pub fn cross(self, o: Self) -> Self {
        Self::new(
            self.a2 * o.a3 - self.a3 * o.a2,
            self.a3 * o.a1 - self.a1 * o.a3,
            self.a1 * o.a2 - self.a2 * o.a1,
        )
    }

    pub fn norm(self) -> T {
        self.dot(self).sqrt()
    }

    pub fn scale(self, s: T) -> Self {
        Self::new(self.a1 * s, self.a2 * s, self.a3 * s)
    }

    pub fn max_abs(self) -> T {
        self.a1.abs().max(self.a2.abs()).max(self.a3.abs())
    }
}

impl<T: Scalar> Add for FrameVector<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.a1 + o.a1, self.a2 + o.a2, self.a3 + o.a3)
    }
}

impl<T: Scalar> Sub for FrameVector<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.a1 - o.a1, self.a2 - o.a2, self.a3 - o.a3)
    }
}

impl<T: Scalar> Neg for FrameVector<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.a1, -self.a2, -self.a3)
    }
}

impl<T: Scalar> Mul<T> for FrameVector<T> {
    type Output = Self;
    fn mul(self, s: T) -> Self {
        self.scale(s)
    }
}

/// `φe1 = -e2, φe2 = e1, φe3 = 0`.
pub fn structure_phi<T: Scalar>(v: FrameVector<T>) -> FrameVector<T> {
    FrameVector::new(v.a2, -v.a1, T::zero())
}

/// Contact form `η = g(ξ, ·)`.
pub fn eta<T: Scalar>(v: FrameVector<T>) -> T {
    v.a3
}

/// Reeb field `ξ = e3`.
pub fn xi<T: Scalar>() -> FrameVector<T> {
    FrameVector::e3()
}

/// The metric in frame components (the frame is orthonormal).
pub fn metric_g<T: Scalar>(v: FrameVector<T>, w: FrameVector<T>) -> T {
    v.dot(w)
}

/// Fundamental 2-form `Ω(X, Y) = g(φX, Y)`.
pub fn fundamental_form<T: Scalar>(v: FrameVector<T>, w: FrameVector<T>) -> T {
    metric_g(structure_phi(v), w)
}

/// Lorentz force `φ_q = qφ` of the contact magnetic field.
pub fn lorentz_force<T: Scalar>(v: FrameVector<T>, q: T) -> FrameVector<T> {
    structure_phi(v).scale(q)
}

/// Deformed metric evaluated on left-trivialized vectors of su(2):
/// `alpha ⟨X,Y⟩₁ + alpha(alpha-1) ⟨X,k⟩₁⟨Y,k⟩₁`.
pub fn metric_on_algebra<T: Scalar>(
    x: Su2Vector<T>,
    y: Su2Vector<T>,
    params: &SasakiParams<T>,
) -> T {
    let a = params.alpha();
    let k = Su2Vector::k();
    a * inner_bi(x, y) + a * (a - T::one()) * inner_bi(x, k) * inner_bi(y, k)
}

/// `a1 e1 + a2 e2 + a3 e3` as the left-trivialized vector in su(2).
pub fn frame_to_algebra<T: Scalar>(v: FrameVector<T>, params: &SasakiParams<T>) -> Su2Vector<T> {
    let sa = params.alpha().sqrt();
    Su2Vector::new(v.a1 / sa, v.a2 / sa, v.a3 / params.alpha())
}

pub fn algebra_to_frame<T: Scalar>(x: Su2Vector<T>, params: &SasakiParams<T>) -> FrameVector<T> {
    let sa = params.alpha().sqrt();
    FrameVector::new(x.v1 * sa, x.v2 * sa, x.v3 * params.alpha())
}

/// Effective rotation rate `q̃ = q + ½(c - 1) cos θ` of the horizontal
/// tangent components.
pub fn q_tilde<T: Scalar>(params: &SasakiParams<T>, cos_theta: T) -> Result<T> {
    check_cos(cos_theta)?;
    Ok(q_tilde_unchecked(params, cos_theta))
}

pub(crate) fn q_tilde_unchecked<T: Scalar>(params: &SasakiParams<T>, cos_theta: T) -> T {
    params.q() + (params.c() - T::one()) * cos_theta / lit(2.0)
}

pub(crate) fn check_cos<T: Scalar>(cos_theta: T) -> Result<()> {
    if !cos_theta.is_finite() {
        return Err(Error::NonFinite("cos_theta"));
    }
    if cos_theta.abs() > T::one() {
        return Err(Error::domain(
            "cos_theta",
            to_f64(cos_theta),
            "|cos_theta| <= 1",
        ));
    }
    Ok(())
}

/// Curvature quantities in the frame `{e1, e2, e3}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvatureReport<T> {
    pub r1212: T,
    pub r1313: T,
    pub r2323: T,
    pub k12: T,
    pub k13: T,
    pub k23: T,
    pub ric11: T,
    pub ric22: T,
    pub ric33: T,
    pub scal: T,
}

/// Structure constants and Levi-Civita coefficients of the frame.
///
/// Indices are zero-based internally: `gamma[i][j]` holds `∇_{e_{i+1}} e_{j+1}`.
#[derive(Debug, Clone)]
pub struct Connection<T> {
    brackets: [[FrameVector<T>; 3]; 3],
    gamma: [[FrameVector<T>; 3]; 3],
}

impl<T: Scalar> Connection<T> {
    pub fn new(params: &SasakiParams<T>) -> Self {
        let frame: [FrameVector<T>; 3] = [FrameVector::e1(), FrameVector::e2(), FrameVector::e3()];
        let mut brackets = [[FrameVector::zero(); 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                let b = bracket(
                    frame_to_algebra(frame[i], params),
                    frame_to_algebra(frame[j], params),
                );
                brackets[i][j] = algebra_to_frame(b, params);
            }
        }
        // Koszul: g(∇_X Y, Z) = ½ (g([X,Y],Z) - g([Y,Z],X) + g([Z,X],Y))
        let mut gamma = [[FrameVector::zero(); 3]; 3];
        let half: T = lit(0.5);
        for i in 0..3 {
            for j in 0..3 {
                let mut comps = [T::zero(); 3];
                for (k, comp) in comps.iter_mut().enumerate() {
                    *comp = half
                        * (brackets[i][j].dot(frame[k]) - brackets[j][k].dot(frame[i])
                            + brackets[k][i].dot(frame[j]));
                }
                gamma[i][j] = FrameVector::from_array(comps);
            }
        }
        Self { brackets, gamma }
    }

    /// `[e_i, e_j]` for one-based indices.
    pub fn bracket(&self, i: usize, j: usize) -> Result<FrameVector<T>> {
        let (a, b) = (index(i)?, index(j)?);
        Ok(self.brackets[a][b])
    }

    /// `∇_{e_i} e_j` for one-based indices.
    pub fn levi_civita(&self, i: usize, j: usize) -> Result<FrameVector<T>> {
        let (a, b) = (index(i)?, index(j)?);
        Ok(self.gamma[a][b])
    }

    /// Bracket of the left-invariant fields with constant components `x`, `y`.
    pub fn bracket_of(&self, x: FrameVector<T>, y: FrameVector<T>) -> FrameVector<T> {
        self.bilinear(&self.brackets, x, y)
    }

    /// `∇_X Y` for left-invariant fields with constant components.
    pub fn covariant(&self, x: FrameVector<T>, y: FrameVector<T>) -> FrameVector<T> {
        self.bilinear(&self.gamma, x, y)
    }

    fn bilinear(
        &self,
        table: &[[FrameVector<T>; 3]; 3],
        x: FrameVector<T>,
        y: FrameVector<T>,
    ) -> FrameVector<T> {
        let (xa, ya) = (x.to_array(), y.to_array());
        let mut acc = FrameVector::zero();
        for i in 0..3 {
            for j in 0..3 {
                acc = acc + table[i][j].scale(xa[i] * ya[j]);
            }
        }
        acc
    }

    /// `R(X,Y)Z = ∇_X ∇_Y Z - ∇_Y ∇_X Z - ∇_{[X,Y]} Z`.
    pub fn curvature(
        &self,
        x: FrameVector<T>,
        y: FrameVector<T>,
        z: FrameVector<T>,
    ) -> FrameVector<T> {
        self.covariant(x, self.covariant(y, z))
            - self.covariant(y, self.covariant(x, z))
            - self.covariant(self.bracket_of(x, y), z)
    }

    /// Sectional curvature of the plane spanned by orthonormal `x`, `y`.
    pub fn sectional(&self, x: FrameVector<T>, y: FrameVector<T>) -> T {
        metric_g(self.curvature(x, y, y), x)
    }

    pub fn ricci(&self, x: FrameVector<T>, y: FrameVector<T>) -> T {
        [FrameVector::e1(), FrameVector::e2(), FrameVector::e3()]
            .into_iter()
            .map(|e| metric_g(self.curvature(e, x, y), e))
            .fold(T::zero(), |a, b| a + b)
    }

    pub fn curvature_report(&self) -> CurvatureReport<T> {
        let (e1, e2, e3) = (FrameVector::e1(), FrameVector::e2(), FrameVector::e3());
        let rm = |a: FrameVector<T>, b: FrameVector<T>| metric_g(self.curvature(a, b, b), a);
        let (ric11, ric22, ric33) = (self.ricci(e1, e1), self.ricci(e2, e2), self.ricci(e3, e3));
        CurvatureReport {
            r1212: rm(e1, e2),
            r1313: rm(e1, e3),
            r2323: rm(e2, e3),
            k12: self.sectional(e1, e2),
            k13: self.sectional(e1, e3),
            k23: self.sectional(e2, e3),
            ric11,
            ric22,
            ric33,
            scal: ric11 + ric22 + ric33,
        }
    }
}

fn index(i: usize) -> Result<usize> {
    if (1..=3).contains(&i) {
        Ok(i - 1)
    } else {
        Err(Error::FrameIndex(i))
    }
}

/// `∇_{e_i} e_j` (one-based indices).
pub fn levi_civita<T: Scalar>(
    i: usize,
    j: usize,
    params: &SasakiParams<T>,
) -> Result<FrameVector<T>> {
    Connection::new(params).levi_civita(i, j)
}

pub fn curvature_tables<T: Scalar>(params: &SasakiParams<T>) -> CurvatureReport<T> {
    Connection::new(params).curvature_report()
}

fn frame<T: Scalar>() -> [FrameVector<T>; 3] {
    [FrameVector::e1(), FrameVector::e2(), FrameVector::e3()]
}

/// `max_i |∇_{e_i} ξ - φ e_i|`.
pub fn sasakian_residual<T: Scalar>(conn: &Connection<T>) -> T {
    frame()
        .into_iter()
        .map(|e| (conn.covariant(e, xi()) - structure_phi(e)).max_abs())
        .fold(T::zero(), T::max)
}

/// `max |g(∇_{e_i} e_j, e_k) + g(e_j, ∇_{e_i} e_k)|`.
pub fn metric_compatibility_residual<T: Scalar>(conn: &Connection<T>) -> T {
    let f = frame::<T>();
    let mut worst = T::zero();
    for ei in f {
        for ej in f {
            for ek in f {
                let r = metric_g(conn.covariant(ei, ej), ek) + metric_g(ej, conn.covariant(ei, ek));
                worst = worst.max(r.abs());
            }
        }
    }
    worst
}

/// `max |∇_{e_i} e_j - ∇_{e_j} e_i - [e_i, e_j]|`.
pub fn torsion_residual<T: Scalar>(conn: &Connection<T>) -> T {
    let f = frame::<T>();
    let mut worst = T::zero();
    for ei in f {
        for ej in f {
            let t = conn.covariant(ei, ej) - conn.covariant(ej, ei) - conn.bracket_of(ei, ej);
            worst = worst.max(t.max_abs());
        }
    }
    worst
}

/// `max_X |φ_q² X - (-q² X + q² η(X) ξ)|` over the frame.
pub fn lorentz_square_residual<T: Scalar>(q: T) -> T {
    frame::<T>()
        .into_iter()
        .map(|x| {
            let lhs = lorentz_force(lorentz_force(x, q), q);
            let rhs = x.scale(-q * q) + xi().scale(q * q * eta(x));
            (lhs - rhs).max_abs()
        })
        .fold(T::zero(), T::max)
}

/// Worst violation of the almost contact metric axioms and of `Ω = dη`.
pub fn contact_metric_residual<T: Scalar>(conn: &Connection<T>) -> T {
    let f = frame::<T>();
    let mut worst = (eta(xi::<T>()) - T::one()).abs();
    worst = worst.max(structure_phi(xi::<T>()).max_abs());
    for x in f {
        worst = worst.max(eta(structure_phi(x)).abs());
        let phi2 = structure_phi(structure_phi(x));
        worst = worst.max((phi2 - (-x + xi().scale(eta(x)))).max_abs());
        for y in f {
            let compat =
                metric_g(structure_phi(x), structure_phi(y)) - metric_g(x, y) + eta(x) * eta(y);
            worst = worst.max(compat.abs());
            // dη(X,Y) = -½ η([X,Y]) on left-invariant fields
            let d_eta = -eta(conn.bracket_of(x, y)) / lit(2.0);
            worst = worst.max((fundamental_form(x, y) - d_eta).abs());
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(alpha: f64) -> SasakiParams<f64> {
        SasakiParams::from_alpha(alpha, 1.0).unwrap()
    }

    #[test]
    fn params_examples() {
        assert_eq!(p(1.0).c(), 1.0);
        assert_eq!(p(4.0).c(), -2.0);
        let half = p(0.5);
        assert_eq!(half.c(), 5.0);
        assert!((half.r() - 2f64.sqrt() / 4.0).abs() < 1e-16);
        assert!(SasakiParams::from_alpha(0.0, 1.0).is_err());
        assert!(SasakiParams::from_alpha(-2.0, 1.0).is_err());
    }

    #[test]
    fn d_homothetic_examples() {
        assert!((d_homothetic(0.7, 1.0).unwrap() - 0.7f64).abs() < 1e-15);
        assert_eq!(d_homothetic(1.0, 4.0).unwrap(), -2.0);
        assert_eq!(d_homothetic(1.0, 0.5).unwrap(), 5.0);
        assert!(d_homothetic(1.0, 0.0).is_err());
        // composing a then a' is one deformation by a·a'
        let (c, a, b): (f64, f64, f64) = (0.3, 1.7, 0.45);
        let two = d_homothetic(d_homothetic(c, a).unwrap(), b).unwrap();
        assert!((two - d_homothetic(c, a * b).unwrap()).abs() < 1e-14);
        // the family c = 4/alpha - 3 is the deformation of c = 1 by alpha
        assert!((d_homothetic(1.0, 2.5).unwrap() - p(2.5).c()).abs() < 1e-15);
    }

    #[test]
    fn phi_table() {
        assert_eq!(structure_phi(FrameVector::<f64>::e1()), -FrameVector::e2());
        assert_eq!(structure_phi(FrameVector::<f64>::e2()), FrameVector::e1());
        assert_eq!(structure_phi(FrameVector::<f64>::e3()), FrameVector::zero());
        assert_eq!(
            structure_phi(structure_phi(FrameVector::<f64>::e1())),
            -FrameVector::e1()
        );
    }

    #[test]
    fn frame_is_orthonormal_for_deformed_metric() {
        for alpha in [0.3, 1.0, 2.0, 7.5] {
            let params = p(alpha);
            for i in 1..=3 {
                for j in 1..=3 {
                    let x = frame_to_algebra(FrameVector::basis(i).unwrap(), &params);
                    let y = frame_to_algebra(FrameVector::basis(j).unwrap(), &params);
                    let expect = if i == j { 1.0 } else { 0.0 };
                    assert!((metric_on_algebra(x, y, &params) - expect).abs() < 1e-14);
                }
            }
        }
        let e1 = FrameVector::<f64>::e1();
        assert_eq!(metric_g(e1, e1), 1.0);
        assert_eq!(metric_g(e1, FrameVector::e3()), 0.0);
    }

    #[test]
    fn frame_brackets_match_closed_form() {
        for alpha in [0.25, 1.0, 3.0] {
            let params = p(alpha);
            let conn = Connection::new(&params);
            let h = (params.c() + 3.0) / 2.0;
            let b12 = conn.bracket(1, 2).unwrap();
            let b23 = conn.bracket(2, 3).unwrap();
            let b31 = conn.bracket(3, 1).unwrap();
            assert!((b12 - FrameVector::e3().scale(2.0)).max_abs() < 1e-14);
            assert!((b23 - FrameVector::e1().scale(h)).max_abs() < 1e-14);
            assert!((b31 - FrameVector::e2().scale(h)).max_abs() < 1e-14);
        }
    }

    #[test]
    fn levi_civita_entries() {
        let params = p(0.5);
        let c = params.c();
        let lc = |i, j| levi_civita(i, j, &params).unwrap();
        assert!((lc(1, 2) - FrameVector::e3()).max_abs() < 1e-14);
        assert!((lc(3, 1) - FrameVector::e2().scale((c + 1.0) / 2.0)).max_abs() < 1e-14);
        assert!(lc(1, 1).max_abs() < 1e-14);
        assert!(matches!(
            levi_civita(0, 1, &params),
            Err(Error::FrameIndex(0))
        ));
        assert!(matches!(
            levi_civita(1, 4, &params),
            Err(Error::FrameIndex(4))
        ));
    }

    #[test]
    fn full_connection_table() {
        for alpha in [0.4, 1.0, 2.2] {
            let params = p(alpha);
            let h = (params.c() + 1.0) / 2.0;
            let (e1, e2, e3) = (FrameVector::e1(), FrameVector::e2(), FrameVector::e3());
            let z = FrameVector::zero();
            let table = [[z, e3, -e2], [-e3, z, e1], [e2.scale(h), e1.scale(-h), z]];
            for (i, row) in table.iter().enumerate() {
                for (j, want) in row.iter().enumerate() {
                    let got = levi_civita(i + 1, j + 1, &params).unwrap();
                    assert!((got - *want).max_abs() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn curvature_examples() {
        let r = curvature_tables(&p(1.0));
        for k in [r.k12, r.k13, r.k23] {
            assert!((k - 1.0).abs() < 1e-14);
        }
        assert!((r.scal - 6.0).abs() < 1e-14);
        assert!(curvature_tables(&p(4.0)).scal.abs() < 1e-14);
        for alpha in [0.3, 1.4, 9.0] {
            assert!((curvature_tables(&p(alpha)).ric33 - 2.0).abs() < 1e-13);
        }
    }

    #[test]
    fn curvature_report_internal_relations() {
        let r = curvature_tables(&p(0.8));
        assert_eq!(r.k12, r.r1212);
        assert_eq!(r.k13, r.r1313);
        assert_eq!(r.k23, r.r2323);
        assert_eq!(r.scal, r.ric11 + r.ric22 + r.ric33);
    }

    #[test]
    fn identities_hold() {
        for alpha in [0.25, 0.5, 1.0, 2.0, 4.0] {
            let conn = Connection::new(&p(alpha));
            assert!(sasakian_residual(&conn) < 1e-14);
            assert!(metric_compatibility_residual(&conn) < 1e-14);
            assert!(torsion_residual(&conn) < 1e-14);
            assert!(contact_metric_residual(&conn) < 1e-14);
        }
        for q in [-3.0, 0.5, 2.0] {
            assert!(lorentz_square_residual(q) < 1e-14);
        }
    }

    #[test]
    fn q_tilde_examples() {
        let s3 = SasakiParams::from_alpha(1.0, 0.7).unwrap();
        for c in [-0.9, 0.0, 0.4] {
            assert_eq!(q_tilde(&s3, c).unwrap(), 0.7);
        }
        let params = SasakiParams::from_alpha(0.5, 1.0).unwrap();
        assert_eq!(q_tilde(&params, 0.0).unwrap(), 1.0);
        assert!((q_tilde::<f64>(&params, 0.5).unwrap() - 2.0).abs() < 1e-15);
        assert!(q_tilde(&params, 1.2).is_err());
    }

    #[test]
    fn single_precision_table() {
        let params = SasakiParams::<f32>::from_alpha(2.0, 1.0).unwrap();
        let r = curvature_tables(&params);
        assert!((r.k12 - params.c()).abs() < 1e-5);
    }
}
