//! SU(2) as unit quaternions and its Lie algebra su(2).
//!
//! A group element `x0 + x1 i + x2 j + x3 k` corresponds to the matrix
//!
//! ```text
//!   [ x0 + √-1 x3    -x2 + √-1 x1 ]
//!   [ x2 + √-1 x1     x0 - √-1 x3 ]
//! ```
//!
//! with the basis `i = [[0, √-1], [√-1, 0]]`, `j = [[0, -1], [1, 0]]` and
//! `k = diag(√-1, -√-1)`, which multiply like Hamilton's quaternions
//! (`ij = k`). The algebra su(2) is the space of pure quaternions, identified
//! with E³ through the coefficients over `{i, j, k}`.

use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use crate::scalar::{lit, Scalar};

/// Element of su(2): `v1 i + v2 j + v3 k`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Su2Vector<T> {
    pub v1: T,
    pub v2: T,
    pub v3: T,
}

impl<T: Scalar> Su2Vector<T> {
    pub fn new(v1: T, v2: T, v3: T) -> Self {
        Self { v1, v2, v3 }
    }

    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero(), T::zero())
    }

    pub fn i() -> Self {
        Self::new(T::one(), T::zero(), T::zero())
    }

    pub fn j() -> Self {
        Self::new(T::zero(), T::one(), T::zero())
    }

    pub fn k() -> Self {
        Self::new(T::zero(), T::zero(), T::one())
    }

    pub fn from_array(a: [T; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }

    pub fn to_array(self) -> [T; 3] {
        [self.v1, self.v2, self.v3]
    }

    /// Euclidean dot product of coefficients; equals `inner_bi`.
    pub fn dot(self, other: Self) -> T {
        self.v1 * other.v1 + self.v2 * other.v2 + self.v3 * other.v3
    }

    pub fn cross(self, other: Self) -> Self {
        Self::new(
            self.v2 * other.v3 - self.v3 * other.v2,
            self.v3 * other.v1 - self.v1 * other.v3,
            self.v1 * other.v2 - self.v2 * other.v1,
        )
    }

    /// Norm induced by the bi-invariant inner product.
    pub fn norm(self) -> T {
        self.dot(self).sqrt()
    }

    pub fn scale(self, s: T) -> Self {
        Self::new(self.v1 * s, self.v2 * s, self.v3 * s)
    }
}

impl<T: Scalar> Add for Su2Vector<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.v1 + o.v1, self.v2 + o.v2, self.v3 + o.v3)
    }
}

impl<T: Scalar> AddAssign for Su2Vector<T> {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl<T: Scalar> Sub for Su2Vector<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.v1 - o.v1, self.v2 - o.v2, self.v3 - o.v3)
    }
}

impl<T: Scalar> Neg for Su2Vector<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.v1, -self.v2, -self.v3)
    }
}

impl<T: Scalar> Mul<T> for Su2Vector<T> {
    type Output = Self;
    fn mul(self, s: T) -> Self {
        self.scale(s)
    }
}

/// Lie bracket `[X, Y] = XY - YX`; for pure quaternions this is `2 X × Y`.
pub fn bracket<T: Scalar>(x: Su2Vector<T>, y: Su2Vector<T>) -> Su2Vector<T> {
    x.cross(y).scale(lit(2.0))
}

/// Bi-invariant inner product `⟨X, Y⟩₁ = -½ tr(XY)`.
pub fn inner_bi<T: Scalar>(x: Su2Vector<T>, y: Su2Vector<T>) -> T {
    x.dot(y)
}

/// Point of SU(2) stored as a unit quaternion `(x0, x1, x2, x3)`.
///
/// Every constructor and product divides by the norm, so the stored value is
/// unit length up to rounding.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Su2Element<T> {
    x: [T; 4],
}

impl<T: Scalar> Su2Element<T> {
    /// Builds an element from raw coordinates, normalizing them.
    pub fn new(x0: T, x1: T, x2: T, x3: T) -> Self {
        Self::from_raw([x0, x1, x2, x3])
    }

    pub fn identity() -> Self {
        Self {
            x: [T::one(), T::zero(), T::zero(), T::zero()],
        }
    }

    fn from_raw(x: [T; 4]) -> Self {
        let n = raw_norm(&x);
        Self {
            x: [x[0] / n, x[1] / n, x[2] / n, x[3] / n],
        }
    }

    pub fn coords(&self) -> [T; 4] {
        self.x
    }

    pub fn x0(&self) -> T {
        self.x[0]
    }
    pub fn x1(&self) -> T {
        self.x[1]
    }
    pub fn x2(&self) -> T {
        self.x[2]
    }
    pub fn x3(&self) -> T {
        self.x[3]
    }

    pub fn norm(&self) -> T {
        raw_norm(&self.x)
    }

    /// Group inverse (quaternion conjugate).
    pub fn inverse(&self) -> Self {
        Self {
            x: [self.x[0], -self.x[1], -self.x[2], -self.x[3]],
        }
    }

    /// Hamilton product without renormalization; returns raw coordinates.
    pub fn mul_raw(&self, other: &Self) -> [T; 4] {
        hamilton(&self.x, &other.x)
    }

    /// Group law with renormalization.
    pub fn compose(&self, other: &Self) -> Self {
        Self::from_raw(self.mul_raw(other))
    }

    /// Left-trivialized velocity `a⁻¹ v` of an ambient tangent vector `v` at
    /// `self`, given in quaternion coordinates; returns its pure part.
    pub fn pull_back(&self, v: [T; 4]) -> Su2Vector<T> {
        let p = hamilton(&self.inverse().x, &v);
        Su2Vector::new(p[1], p[2], p[3])
    }

    /// Ambient tangent vector `a X` at `self` in quaternion coordinates.
    pub fn push_forward(&self, v: Su2Vector<T>) -> [T; 4] {
        hamilton(&self.x, &[T::zero(), v.v1, v.v2, v.v3])
    }

    /// Euclidean distance in R⁴.
    pub fn distance(&self, other: &Self) -> T {
        let mut acc = T::zero();
        for idx in 0..4 {
            let d = self.x[idx] - other.x[idx];
            acc = acc + d * d;
        }
        acc.sqrt()
    }

    /// Read-only 2×2 complex matrix view; entries are `(re, im)` pairs.
    pub fn matrix(&self) -> [[(T, T); 2]; 2] {
        let [x0, x1, x2, x3] = self.x;
        [[(x0, x3), (-x2, x1)], [(x2, x1), (x0, -x3)]]
    }

    /// Coordinates `(x1, x2, x3, x4)` of the first matrix column viewed in
    /// C² as `(x1 + √-1 x2, x3 + √-1 x4)`. In this chart the right action of
    /// `a_t = exp(t k)` is scalar multiplication by `e^{√-1 t}`.
    pub fn to_c2(&self) -> [T; 4] {
        [self.x[0], self.x[3], self.x[2], self.x[1]]
    }

    /// Inverse of [`Su2Element::to_c2`].
    pub fn from_c2(c: [T; 4]) -> Self {
        Self::from_raw([c[0], c[3], c[2], c[1]])
    }

    /// An element whose adjoint action sends `k` to the direction of `v`.
    pub fn aligning_k_to(v: Su2Vector<T>) -> Self {
        let n = v.norm();
        let u = v.scale(T::one() / n);
        let kk = Su2Vector::<T>::k();
        let w = T::one() + kk.dot(u);
        if w < lit(1e-12) {
            // antipodal: any half-turn about an axis orthogonal to k
            return Self::new(T::zero(), T::one(), T::zero(), T::zero());
        }
        let axis = kk.cross(u);
        Self::new(w, axis.v1, axis.v2, axis.v3)
    }
}

impl<T: Scalar> Mul for Su2Element<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.compose(&rhs)
    }
}

fn raw_norm<T: Scalar>(x: &[T; 4]) -> T {
    (x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3]).sqrt()
}

fn hamilton<T: Scalar>(a: &[T; 4], b: &[T; 4]) -> [T; 4] {
    let [a0, a1, a2, a3] = *a;
    let [b0, b1, b2, b3] = *b;
    [
        a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
        a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
        a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
        a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
    ]
}

/// Group product, renormalized.
pub fn quat_mul<T: Scalar>(a: &Su2Element<T>, b: &Su2Element<T>) -> Su2Element<T> {
    a.compose(b)
}

/// `Ad(a) X = a X a⁻¹`.
pub fn ad_action<T: Scalar>(a: &Su2Element<T>, x: Su2Vector<T>) -> Su2Vector<T> {
    let ax = a.push_forward(x);
    let p = hamilton(&ax, &a.inverse().x);
    Su2Vector::new(p[1], p[2], p[3])
}

/// Group exponential `exp X = cos|X| + sin|X| X/|X|`.
pub fn exp_su2<T: Scalar>(x: Su2Vector<T>) -> Su2Element<T> {
    let theta2 = x.dot(x);
    let theta = theta2.sqrt();
    let (c, sinc) = if theta < lit(1e-6) {
        let t4 = theta2 * theta2;
        (
            T::one() - theta2 / lit(2.0) + t4 / lit(24.0),
            T::one() - theta2 / lit(6.0) + t4 / lit(120.0),
        )
    } else {
        (theta.cos(), theta.sin() / theta)
    };
    Su2Element::new(c, sinc * x.v1, sinc * x.v2, sinc * x.v3)
}

/// Principal logarithm: the `X` with `|X| ≤ π` and `exp X = a`.
pub fn log_su2<T: Scalar>(a: &Su2Element<T>) -> Su2Vector<T> {
    let v = Su2Vector::new(a.x1(), a.x2(), a.x3());
    let s = v.norm();
    if s == T::zero() {
        return v;
    }
    let angle = s.atan2(a.x0());
    v.scale(angle / s)
}

/// Geodesic interpolation `a exp(t log(a⁻¹ b))` in the bi-invariant metric.
pub fn slerp<T: Scalar>(a: &Su2Element<T>, b: &Su2Element<T>, t: T) -> Su2Element<T> {
    let rel = a.inverse().compose(b);
    a.compose(&exp_su2(log_su2(&rel).scale(t)))
}
