//! Fourth-order commutator-free Lie group stepping on SU(2) × R³.
//!
//! The group part evolves by `y' = y A(s, y, z)` (left-trivialized velocity)
//! and the vector part by `z' = f(s, y, z)`. On R³ the scheme reduces to the
//! classical Runge–Kutta method; on SU(2) it only composes exponentials, so
//! the iterate never leaves the group.

use crate::scalar::{lit, Scalar};
use crate::su2::{exp_su2, Su2Element, Su2Vector};

pub(crate) type Field<'a, T> = dyn Fn(T, &Su2Element<T>, [T; 3]) -> (Su2Vector<T>, [T; 3]) + 'a;

fn axpy<T: Scalar>(z: [T; 3], h: T, k: [T; 3]) -> [T; 3] {
    [z[0] + h * k[0], z[1] + h * k[1], z[2] + h * k[2]]
}

/// Advances `(y, z)` from `s` to `s + h`.
pub(crate) fn cf4_step<T: Scalar>(
    y: &Su2Element<T>,
    z: [T; 3],
    s: T,
    h: T,
    field: &Field<'_, T>,
) -> (Su2Element<T>, [T; 3]) {
    let half = h / lit(2.0);
    let (f1, k1) = field(s, y, z);

    let y2 = y.compose(&exp_su2(f1 * half));
    let z2 = axpy(z, half, k1);
    let (f2, k2) = field(s + half, &y2, z2);

    let y3 = y.compose(&exp_su2(f2 * half));
    let z3 = axpy(z, half, k2);
    let (f3, k3) = field(s + half, &y3, z3);

    let y4 = y2.compose(&exp_su2((f3 - f1 * lit(0.5)) * h));
    let z4 = axpy(z, h, k3);
    let (f4, k4) = field(s + h, &y4, z4);

    let w = h / lit(12.0);
    let two: T = lit(2.0);
    let three: T = lit(3.0);
    let first: Su2Vector<T> = (f1 * three + f2 * two + f3 * two - f4) * w;
    let second: Su2Vector<T> = (-f1 + f2 * two + f3 * two + f4 * three) * w;
    let y_next = y.compose(&exp_su2(first)).compose(&exp_su2(second));

    let sixth = h / lit(6.0);
    let mut z_next = z;
    for idx in 0..3 {
        z_next[idx] = z[idx] + sixth * (k1[idx] + two * k2[idx] + two * k3[idx] + k4[idx]);
    }
    (y_next, z_next)
}
