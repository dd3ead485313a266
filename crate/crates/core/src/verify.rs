//! The invariant suite run by `sasaki verify`.

use std::fmt;

use crate::error::Result;
use crate::flow::{ikawa_coords, initial_tangent, integrate, ClosedFormTrajectory};
use crate::hopf::{projected_curvature_from_frenet, projected_curvature_from_q};
use crate::sasaki::{
    contact_metric_residual, lorentz_square_residual, metric_compatibility_residual,
    sasakian_residual, torsion_residual, Connection, CurvatureReport, FrameVector, SasakiParams,
};
use crate::su2::{exp_su2, Su2Element, Su2Vector};

/// One line of the suite: the worst residual over the check and whether it
/// is below the tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub residual: f64,
    pub tolerance: f64,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.residual < self.tolerance
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:<28} {:>12.3e} < {:<8.0e} {}",
            self.name,
            self.residual,
            self.tolerance,
            if self.passed() { "PASS" } else { "FAIL" }
        )
    }
}

#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub params: SasakiParams<f64>,
    pub curvature: CurvatureReport<f64>,
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = &self.params;
        let c = &self.curvature;
        writeln!(
            f,
            "alpha = {}  c = {}  q = {}  r = {}",
            p.alpha(),
            p.c(),
            p.q(),
            p.r()
        )?;
        writeln!(
            f,
            "R1212 = {:.15}  R1313 = {:.15}  R2323 = {:.15}",
            c.r1212, c.r1313, c.r2323
        )?;
        writeln!(
            f,
            "K12 = {:.15}  K13 = {:.15}  K23 = {:.15}",
            c.k12, c.k13, c.k23
        )?;
        writeln!(
            f,
            "Ric11 = {:.15}  Ric22 = {:.15}  Ric33 = {:.15}",
            c.ric11, c.ric22, c.ric33
        )?;
        writeln!(f, "scal = {:.15}", c.scal)?;
        for check in &self.checks {
            writeln!(f, "{check}")?;
        }
        Ok(())
    }
}

/// Largest deviation of the computed tables from `K12 = c`,
/// `K13 = K23 = 1`, `Ric11 = Ric22 = c + 1`, `Ric33 = 2`, `scal = 2(c + 2)`.
pub fn table_deviation(report: &CurvatureReport<f64>, c: f64) -> f64 {
    [
        report.k12 - c,
        report.k13 - 1.0,
        report.k23 - 1.0,
        report.r1212 - c,
        report.r1313 - 1.0,
        report.r2323 - 1.0,
        report.ric11 - (c + 1.0),
        report.ric22 - (c + 1.0),
        report.ric33 - 2.0,
        report.scal - 2.0 * (c + 2.0),
    ]
    .into_iter()
    .fold(0.0, |m, d: f64| m.max(d.abs()))
}

/// Worst disagreement of `(q - 2cos θ)/(ε sin θ)` with `(κ² + τ² - 1)/κ`
/// over an `n × n` grid with `q ∈ [-4, 4] \ {0}` and `sin θ ∈ (0.05, 1]`,
/// both branches of `cos θ`.
pub fn kappa_beta_grid_deviation(n: usize) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..n {
        // midpoints avoid q = 0
        let q = -4.0 + 8.0 * (i as f64 + 0.5) / n as f64;
        for j in 0..n {
            let sin = 0.05 + 0.95 * (j as f64 + 1.0) / n as f64;
            for sign in [1.0, -1.0] {
                let cos = sign * (1.0 - sin * sin).max(0.0).sqrt();
                let kappa = q.abs() * (1.0 - cos * cos).sqrt();
                let tau = q * cos - 1.0;
                let a = projected_curvature_from_q(q, cos).unwrap();
                let b = projected_curvature_from_frenet(kappa, tau);
                worst = worst.max((a - b).abs());
            }
        }
    }
    worst
}

/// Runs the suite at `params`.
pub fn run(params: &SasakiParams<f64>) -> Result<VerifyReport> {
    let conn = Connection::new(params);
    let curvature = conn.curvature_report();
    let mut checks = vec![
        Check {
            name: "curvature tables",
            residual: table_deviation(&curvature, params.c()),
            tolerance: 1e-10,
        },
        Check {
            name: "nabla xi = phi",
            residual: sasakian_residual(&conn),
            tolerance: 1e-14,
        },
        Check {
            name: "metric compatibility",
            residual: metric_compatibility_residual(&conn),
            tolerance: 1e-14,
        },
        Check {
            name: "torsion free",
            residual: torsion_residual(&conn),
            tolerance: 1e-14,
        },
        Check {
            name: "lorentz square",
            residual: lorentz_square_residual(params.q()),
            tolerance: 1e-14,
        },
        Check {
            name: "contact metric axioms",
            residual: contact_metric_residual(&conn),
            tolerance: 1e-14,
        },
    ];

    let cos: f64 = 0.35;
    let sin = (1.0 - cos * cos).sqrt();
    let t0 = FrameVector::new(0.6 * sin, 0.8 * sin, cos);
    let start = exp_su2(Su2Vector::new(0.1, -0.2, 0.3));
    let samples = integrate(start, t0, params, 1e-3, 10_000)?;
    let exact = ClosedFormTrajectory::new(start, t0, params)?;
    let (mut speed, mut angle, mut tangent, mut position) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for smp in &samples {
        speed = speed.max(smp.residual_speed.abs());
        angle = angle.max(smp.residual_angle.abs());
        tangent = tangent.max((smp.tangent - exact.tangent(smp.s)).max_abs());
        position = position.max(smp.position.distance(&exact.position(smp.s)));
    }
    checks.push(Check {
        name: "speed conservation",
        residual: speed,
        tolerance: 1e-9,
    });
    checks.push(Check {
        name: "contact angle conservation",
        residual: angle,
        tolerance: 1e-9,
    });
    checks.push(Check {
        name: "tangent vs closed form",
        residual: tangent,
        tolerance: 1e-8,
    });
    checks.push(Check {
        name: "position vs closed form",
        residual: position,
        tolerance: 1e-8,
    });

    let mut sphere: f64 = 0.0;
    for i in 0..100 {
        let c = -0.99 + 1.98 * i as f64 / 99.0;
        for j in 0..100 {
            let x = ikawa_coords(c, 40.0 * j as f64 / 99.0)?;
            sphere = sphere.max((x.iter().map(|v| v * v).sum::<f64>() - 1.0).abs());
        }
    }
    checks.push(Check {
        name: "ikawa curve on sphere",
        residual: sphere,
        tolerance: 1e-12,
    });
    checks.push(Check {
        name: "projected curvature forms",
        residual: kappa_beta_grid_deviation(50),
        tolerance: 1e-12,
    });

    let reeb = integrate(
        Su2Element::identity(),
        initial_tangent(1.0)?,
        params,
        1e-2,
        1000,
    )?;
    let reeb_dev = reeb.iter().fold(0.0f64, |m, smp| {
        let expect = exp_su2(Su2Vector::k() * (smp.s / params.alpha()));
        m.max(smp.position.distance(&expect))
    });
    checks.push(Check {
        name: "reeb orbit is a fiber",
        residual: reeb_dev,
        tolerance: 1e-10,
    });

    Ok(VerifyReport {
        params: *params,
        curvature,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_passes_for_several_alpha() {
        for alpha in [0.25, 1.0, 4.0] {
            let report = run(&SasakiParams::from_alpha(alpha, 1.3).unwrap()).unwrap();
            assert!(report.all_passed(), "{report}");
            assert_eq!(report.checks.len(), 13);
        }
    }

    #[test]
    fn failing_check_is_reported() {
        let c = Check {
            name: "x",
            residual: 2.0,
            tolerance: 1.0,
        };
        assert!(!c.passed());
        assert!(c.to_string().ends_with("FAIL"));
    }
}
