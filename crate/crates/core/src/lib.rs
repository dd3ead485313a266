//! Magnetic trajectories on Berger spheres.
//!
//! `SU(2)` carries the one-parameter family of left-invariant Sasakian
//! metrics `g_α`, whose φ-sectional curvature is `c = 4/α - 3`. This crate
//! integrates the normal magnetic curves of the contact magnetic field
//! `qΩ` and studies their shadows on the sphere of radius `√α/2` under the
//! Hopf fibration. The `periodicity` module decides when they close.
//!
//! Geometry is generic over [`Scalar`] (`f32` or `f64`); the aliases at the
//! crate root fix `f64`. Exact periodicity tests use `BigRational`.

// `!(x > 0)` guards also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod flow;
pub mod hopf;
mod lie_step;
pub mod periodicity;
pub mod sasaki;
pub mod scalar;
pub mod su2;
pub mod verify;
pub mod viz;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type Su2 = su2::Su2Element<f64>;
pub type Algebra = su2::Su2Vector<f64>;
pub type Params = sasaki::SasakiParams<f64>;
pub type Frame = sasaki::FrameVector<f64>;
pub type Sample = flow::TrajectorySample<f64>;
