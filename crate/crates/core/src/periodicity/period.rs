//! Numerical period detection and parameter scans.

use rayon::prelude::*;

use super::criteria::closure_ratio;
use super::rational::{rational_approx, Verdict};
use crate::error::{Error, Result};
use crate::flow::{initial_tangent, ClosedFormTrajectory, MagneticStepper};
use crate::sasaki::{frame_to_algebra, FrameVector, SasakiParams};
use crate::su2::Su2Element;

/// Where trajectory points come from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TrajectorySource {
    ClosedForm { ds: f64 },
    Integrator { ds: f64 },
}

impl TrajectorySource {
    fn ds(self) -> f64 {
        match self {
            TrajectorySource::ClosedForm { ds } | TrajectorySource::Integrator { ds } => ds,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeriodSearch {
    /// The first return within tolerance, if any.
    pub period: Option<f64>,
    /// Closest approach to the start among the local minima of the
    /// distance (for a closure this is the distance at the period).
    pub min_distance: f64,
    pub s_at_min: f64,
}

#[derive(Clone, Copy)]
struct State {
    s: f64,
    position: Su2Element<f64>,
    tangent: FrameVector<f64>,
}

enum Walker {
    Closed(ClosedFormTrajectory<f64>),
    Stepped(MagneticStepper<f64>),
}

impl Walker {
    fn state_at(&self, base: &State, s: f64) -> State {
        match self {
            Walker::Closed(t) => State {
                s,
                position: t.position(s),
                tangent: t.tangent(s),
            },
            Walker::Stepped(stepper) => {
                let mut local = stepper.clone();
                local.reset(base.s, base.position, base.tangent);
                let (position, tangent) = local.peek(s - base.s);
                State {
                    s,
                    position,
                    tangent,
                }
            }
        }
    }

    fn advance(&mut self, from: &State, ds: f64) -> State {
        match self {
            Walker::Closed(_) => self.state_at(from, from.s + ds),
            Walker::Stepped(stepper) => {
                stepper.step(ds);
                State {
                    s: stepper.s(),
                    position: stepper.position(),
                    tangent: stepper.tangent(),
                }
            }
        }
    }
}

/// Searches `(0, horizon]` for the first `s` where the trajectory from the
/// identity with initial tangent `(0, sin θ, cos θ)` returns to its start
/// within `tol`, with matching tangent components. The distance to the start
/// is scanned on the grid `ds`, and each local minimum is refined by
/// bisection on `⟨γ(s) - γ(0), γ'(s)⟩`.
pub fn measure_period(
    source: TrajectorySource,
    params: &SasakiParams<f64>,
    cos_theta: f64,
    horizon: f64,
    tol: f64,
) -> Result<PeriodSearch> {
    if !(horizon > 0.0) {
        return Err(Error::domain("horizon", horizon, "horizon > 0"));
    }
    if !(tol > 0.0) {
        return Err(Error::domain("tol", tol, "tol > 0"));
    }
    let ds = source.ds();
    if !(ds > 0.0) {
        return Err(Error::domain("ds", ds, "ds > 0"));
    }
    let t0 = initial_tangent(cos_theta)?;
    let start = Su2Element::identity();
    let mut walker = match source {
        TrajectorySource::ClosedForm { .. } => {
            Walker::Closed(ClosedFormTrajectory::new(start, t0, params)?)
        }
        TrajectorySource::Integrator { .. } => {
            Walker::Stepped(MagneticStepper::new(start, t0, *params)?)
        }
    };
    let dist = |st: &State| st.position.distance(&start);
    let slope = |st: &State| {
        let v = st
            .position
            .push_forward(frame_to_algebra(st.tangent, params));
        let x = st.position.coords();
        let o = start.coords();
        (0..4).map(|k| (x[k] - o[k]) * v[k]).sum::<f64>()
    };

    let mut best = PeriodSearch {
        period: None,
        min_distance: f64::INFINITY,
        s_at_min: 0.0,
    };
    let n_steps = (horizon / ds).ceil() as usize;
    let mut prev2 = State {
        s: 0.0,
        position: start,
        tangent: t0,
    };
    let mut prev = walker.advance(&prev2, ds);
    for step in 2..=n_steps + 1 {
        let mut cur = walker.advance(&prev, ds);
        cur.s = ds * step as f64;
        let (d0, d1, d2) = (dist(&prev2), dist(&prev), dist(&cur));
        if d1 <= d0 && d1 <= d2 {
            let refined = refine(&walker, &prev2, &cur, &slope);
            let dr = dist(&refined).min(d1);
            let at = if dist(&refined) <= d1 { refined } else { prev };
            if at.s <= horizon {
                if dr < best.min_distance {
                    best.min_distance = dr;
                    best.s_at_min = at.s;
                }
                let tangent_gap = (at.tangent - t0).norm();
                if dr < tol && tangent_gap < tol {
                    best.period = Some(at.s);
                    best.min_distance = dr;
                    best.s_at_min = at.s;
                    return Ok(best);
                }
            }
        }
        prev2 = prev;
        prev = cur;
    }
    Ok(best)
}

fn refine(walker: &Walker, lo: &State, hi: &State, slope: &dyn Fn(&State) -> f64) -> State {
    let (mut a, mut b) = (lo.s, hi.s);
    let (fa, fb) = (slope(lo), slope(hi));
    if !(fa <= 0.0 && fb >= 0.0) {
        return walker.state_at(lo, 0.5 * (a + b));
    }
    for _ in 0..80 {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        if slope(&walker.state_at(lo, mid)) < 0.0 {
            a = mid;
        } else {
            b = mid;
        }
    }
    walker.state_at(lo, 0.5 * (a + b))
}

/// One cell of a scan over the contact angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanRow {
    pub cos_theta: f64,
    pub criterion: f64,
    pub numerator: i64,
    pub denominator: u64,
    pub error: f64,
    pub verdict: Verdict,
}

/// Closure ratios on the midpoint grid `cos θ = -1 + (2k + 1)/N`,
/// `k = 0..N`, evaluated in parallel and returned in grid order.
pub fn scan(
    params: &SasakiParams<f64>,
    grid: usize,
    max_denominator: u64,
    tol: f64,
) -> Result<Vec<ScanRow>> {
    if grid == 0 {
        return Err(Error::domain("grid", 0.0, "grid >= 1"));
    }
    (0..grid)
        .into_par_iter()
        .map(|k| {
            let cos_theta = -1.0 + (2 * k + 1) as f64 / grid as f64;
            let criterion = closure_ratio(params, cos_theta)?;
            let a = rational_approx(criterion, max_denominator, tol)?;
            Ok(ScanRow {
                cos_theta,
                criterion,
                numerator: a.numerator,
                denominator: a.denominator,
                error: a.error,
                verdict: a.verdict,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn s3(q: f64) -> SasakiParams<f64> {
        SasakiParams::from_alpha(1.0, q).unwrap()
    }

    #[test]
    fn reeb_orbit_period() {
        let r = measure_period(
            TrajectorySource::ClosedForm { ds: 1e-3 },
            &s3(1.0),
            1.0,
            10.0,
            1e-8,
        )
        .unwrap();
        assert!((r.period.unwrap() - 2.0 * PI).abs() < 1e-9);
        let p = SasakiParams::from_alpha(2.0, 1.0).unwrap();
        let r = measure_period(
            TrajectorySource::Integrator { ds: 1e-3 },
            &p,
            1.0,
            20.0,
            1e-8,
        )
        .unwrap();
        assert!((r.period.unwrap() - 4.0 * PI).abs() < 1e-8);
    }

    #[test]
    fn ikawa_period_both_sources() {
        let c = 29.0 / 36.0;
        for src in [
            TrajectorySource::ClosedForm { ds: 1e-3 },
            TrajectorySource::Integrator { ds: 1e-3 },
        ] {
            let r = measure_period(src, &s3(1.0), c, 40.0, 1e-5).unwrap();
            assert!(
                (r.period.unwrap() - 12.0 * PI).abs() < 1e-6,
                "{src:?} {r:?}"
            );
        }
    }

    #[test]
    fn no_closure_reports_nearest_return() {
        let r = measure_period(
            TrajectorySource::ClosedForm { ds: 1e-3 },
            &s3(2.0),
            0.0,
            60.0,
            1e-5,
        )
        .unwrap();
        assert!(r.period.is_none());
        assert!(r.min_distance > 1e-5 && r.min_distance.is_finite());
        assert!(r.s_at_min > 0.0 && r.s_at_min <= 60.0);
    }

    #[test]
    fn rejects_bad_arguments() {
        let src = TrajectorySource::ClosedForm { ds: 1e-3 };
        assert!(measure_period(src, &s3(1.0), 0.2, 0.0, 1e-5).is_err());
        assert!(measure_period(src, &s3(1.0), 0.2, 1.0, 0.0).is_err());
        assert!(measure_period(src, &s3(1.0), 1.2, 1.0, 1e-5).is_err());
        assert!(measure_period(
            TrajectorySource::ClosedForm { ds: 0.0 },
            &s3(1.0),
            0.2,
            1.0,
            1e-5
        )
        .is_err());
    }

    #[test]
    fn scan_is_ordered_and_consistent() {
        let rows = scan(&s3(1.0), 9, 64, 1e-9).unwrap();
        assert_eq!(rows.len(), 9);
        for w in rows.windows(2) {
            assert!(w[1].cos_theta > w[0].cos_theta);
        }
        for row in &rows {
            let v = super::super::criteria::s3_criterion(1.0, row.cos_theta).unwrap();
            assert!((row.criterion - v).abs() < 1e-14);
        }
        // cos θ = 0 sits on the 9-point midpoint grid and gives 1/√5
        assert_eq!(rows[4].cos_theta, 0.0);
        assert_eq!(rows[4].verdict, Verdict::AperiodicAtResolution);
        assert!(scan(&s3(1.0), 0, 64, 1e-9).is_err());
    }
}
