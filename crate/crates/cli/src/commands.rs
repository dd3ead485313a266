//! One handler per subcommand.

use std::f64::consts::PI;
use std::io::Write;
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{One, ToPrimitive};
use sasaki::flow::{
    helix_period, helix_periodic_params, ikawa_trajectory, initial_tangent, integrate, model_helix,
    model_helix_tangent, ClosedFormTrajectory,
};
use sasaki::hopf::{
    circle_data, holonomy, horizontal_lift, lattice, phase_difference, point_over, tube_mesh,
    BaseCurve, SphereCircle, SpherePoint,
};
use sasaki::periodicity::{
    closure_ratio_exact, drift_rate, measure_period, period_from_ratio, predicted_period,
    rational_approx, s3_criterion_exact, scan, slope_from_mn, slope_quantization,
    trajectory_for_slope, ExactCriterion, TrajectorySource,
};
use sasaki::su2::{Su2Element, Su2Vector};
use sasaki::viz::{emit_curve, stereographic_all, write_mesh_obj, CurveFormat};
use sasaki::{Params, Sample};

use crate::{
    CliError, Command, CurveKind, Exact, Format, ParamArgs, RationalArgs, RunConfig, Source,
};

pub fn dispatch(cfg: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    match &cfg.command {
        Command::Verify { params } => verify(params, out),
        Command::Integrate {
            params,
            cos_theta,
            ds,
            s_max,
            source,
            out: path,
        } => integrate_cmd(params, cos_theta, *ds, *s_max, *source, path, out),
        Command::Curve {
            kind,
            cos_theta,
            psi,
            p,
            s_max,
            ds,
            format,
            out: path,
        } => curve(
            *kind,
            cos_theta.as_ref(),
            *psi,
            p.as_ref(),
            *s_max,
            *ds,
            *format,
            path,
            out,
        ),
        Command::Project {
            input,
            format,
            out: path,
        } => project(input, *format, path, out),
        Command::Tube {
            params,
            radius_ratio,
            nt,
            nu,
            out: path,
        } => tube(params, *radius_ratio, *nt, *nu, path, out),
        Command::Holonomy {
            params,
            radius_ratio,
            check,
        } => holonomy_cmd(params, *radius_ratio, *check, out),
        Command::Period {
            params,
            cos_theta,
            rational,
            measure,
            source,
            ds,
            horizon,
            return_tol,
        } => period(
            params,
            cos_theta,
            rational,
            measure.then_some((*source, *ds, *horizon, *return_tol)),
            out,
        ),
        Command::Quantize {
            params,
            radius_ratio,
            sigma,
            m,
            n,
            rational,
        } => quantize(params, *radius_ratio, *sigma, m.zip(*n), rational, out),
        Command::Scan {
            params,
            grid,
            rational,
            out: path,
        } => scan_cmd(params, *grid, rational, path.as_deref(), out),
        Command::Figure {
            out_dir,
            samples,
            nt,
            nu,
        } => figure(out_dir, *samples, *nt, *nu, out, err),
    }
}

fn positive(name: &str, v: f64) -> Result<(), CliError> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(CliError::Usage(format!(
            "--{name} must be a positive number, got {v}"
        )))
    }
}

fn format_for(format: Option<Format>, path: &Path) -> Result<CurveFormat, CliError> {
    match format {
        Some(f) => Ok(f.into()),
        None => CurveFormat::from_path(path).ok_or_else(|| {
            CliError::Usage(format!(
                "cannot infer a format from `{}`; pass --format csv|obj|svg",
                path.display()
            ))
        }),
    }
}

/// `n` steps covering `[0, s_max]` with spacing at most `ds`.
fn grid(s_max: f64, ds: f64) -> Result<(usize, f64), CliError> {
    positive("s-max", s_max)?;
    positive("ds", ds)?;
    let n = (s_max / ds).ceil().max(1.0) as usize;
    Ok((n, s_max / n as f64))
}

fn verify(p: &ParamArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let report = sasaki::verify::run(&p.params()?)?;
    write!(out, "{report}")?;
    if report.all_passed() {
        Ok(())
    } else {
        let failed: Vec<&str> = report
            .checks
            .iter()
            .filter(|c| !c.passed())
            .map(|c| c.name)
            .collect();
        Err(CliError::Tolerance(format!(
            "failed checks: {}",
            failed.join(", ")
        )))
    }
}

fn integrate_cmd(
    p: &ParamArgs,
    cos: &Exact,
    ds: f64,
    s_max: f64,
    source: Source,
    path: &Path,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let params = p.params()?;
    let t0 = initial_tangent(cos.value)?;
    let (n, h) = grid(s_max, ds)?;
    let start = Su2Element::identity();
    let samples = match source {
        Source::Integrator => integrate(start, t0, &params, h, n)?,
        Source::Closed => ClosedFormTrajectory::new(start, t0, &params)?.samples(h, n),
    };
    sasaki::viz::write_trajectory_csv(path, &samples, false)?;
    let worst = |f: fn(&Sample) -> f64| samples.iter().map(f).fold(0.0f64, |m, v| m.max(v.abs()));
    writeln!(out, "samples = {}", samples.len())?;
    writeln!(out, "max |g(T,T) - 1| = {:e}", worst(|s| s.residual_speed))?;
    writeln!(out, "max |T3 - T3(0)| = {:e}", worst(|s| s.residual_angle))?;
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn curve(
    kind: CurveKind,
    cos: Option<&Exact>,
    psi: Option<f64>,
    p: Option<&Exact>,
    s_max: Option<f64>,
    ds: f64,
    format: Option<Format>,
    path: &Path,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let fmt = format_for(format, path)?;
    let samples: Vec<Sample> = match kind {
        CurveKind::Ikawa => {
            let cos = cos.ok_or_else(|| CliError::Usage("curve ikawa needs --cos-theta".into()))?;
            let traj = ikawa_trajectory(cos.value)?;
            let s_max = match s_max {
                Some(s) => s,
                None => {
                    let round = Params::from_alpha(1.0, 1.0)?;
                    predicted_period(&round, cos.value, 64, 1e-9)?.0.ok_or_else(|| {
                        CliError::Usage(format!("the Ikawa curve at cos(theta) = {cos} does not close; pass --s-max"))
                    })?
                }
            };
            let (n, h) = grid(s_max, ds)?;
            writeln!(out, "s_max = {s_max:.15}")?;
            traj.samples(h, n)
        }
        CurveKind::Helix => {
            let psi = psi.ok_or_else(|| CliError::Usage("curve helix needs --psi".into()))?;
            let p = p.ok_or_else(|| CliError::Usage("curve helix needs --p".into()))?;
            let ratio = small_ratio(&p.exact)
                .ok_or_else(|| CliError::Usage(format!("--p {p} is too large")))?;
            let (a, b) = helix_periodic_params(ratio, psi);
            let s_max = s_max.unwrap_or_else(|| helix_period(ratio, a));
            let (n, h) = grid(s_max, ds)?;
            let cos0 = model_helix_tangent(psi, a, b, 0.0).a3;
            let mut v = Vec::with_capacity(n + 1);
            for k in 0..=n {
                let s = h * k as f64;
                v.push(Sample::new(
                    s,
                    model_helix(psi, a, b, s)?,
                    model_helix_tangent(psi, a, b, s),
                    cos0,
                ));
            }
            writeln!(out, "a = {a:.15}  b = {b:.15}  s_max = {s_max:.15}")?;
            v
        }
    };
    emit_curve(&samples, fmt, path)?;
    writeln!(out, "wrote {} samples to {}", samples.len(), path.display())?;
    Ok(())
}

fn small_ratio(x: &BigRational) -> Option<Ratio<i64>> {
    Some(Ratio::new(x.numer().to_i64()?, x.denom().to_i64()?))
}

fn project(
    input: &Path,
    format: Option<Format>,
    path: &Path,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let fmt = format_for(format, path)?;
    let samples = sasaki::viz::read_trajectory_csv(input)?;
    emit_curve(&samples, fmt, path)?;
    writeln!(
        out,
        "projected {} samples to {}",
        samples.len(),
        path.display()
    )?;
    Ok(())
}

fn polar_circle(params: &Params, radius_ratio: f64) -> Result<SphereCircle<f64>, CliError> {
    Ok(SphereCircle::with_radius(
        Su2Vector::k(),
        radius_ratio * params.r(),
        Su2Vector::i(),
        params,
    )?)
}

fn write_tube(
    circle: &SphereCircle<f64>,
    start: &Su2Element<f64>,
    params: &Params,
    nt: usize,
    nu: usize,
    path: &Path,
) -> Result<usize, CliError> {
    if nt < 3 || nu < 3 {
        return Err(CliError::Usage("--nt and --nu must be at least 3".into()));
    }
    let lift = horizontal_lift(circle, start, params)?;
    let mesh = tube_mesh(&lift, nt, nu)?;
    let verts = stereographic_all(&mesh.vertices)?;
    let quads = mesh.quads();
    write_mesh_obj(path, &verts, &quads)?;
    Ok(verts.len())
}

fn tube(
    p: &ParamArgs,
    ratio: f64,
    nt: usize,
    nu: usize,
    path: &Path,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let params = p.params()?;
    let circle = polar_circle(&params, ratio)?;
    let start = point_over(SpherePoint::from_vector(circle.point(0.0)));
    let n = write_tube(&circle, &start, &params, nt, nu, path)?;
    writeln!(
        out,
        "wrote {n} vertices and {n} quads to {}",
        path.display()
    )?;
    Ok(())
}

fn holonomy_cmd(
    p: &ParamArgs,
    ratio: f64,
    check: f64,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let params = p.params()?;
    let circle = polar_circle(&params, ratio)?;
    let data = circle_data(circle.radius(), &params)?;
    let predicted = holonomy(circle.left_area(), &params)?;
    let start = point_over(SpherePoint::from_vector(circle.point(0.0)));
    let lift = horizontal_lift(&circle, &start, &params)?;
    let measured = lift.endpoint_phase();
    let gap = phase_difference(measured, predicted);
    let lat = lattice(&data, &params)?;
    writeln!(
        out,
        "R = {:.15}  L = {:.15}  A = {:.15}",
        data.radius, data.length, data.area
    )?;
    writeln!(out, "kappa_beta = {:.15}", data.kappa_beta)?;
    writeln!(out, "delta predicted = {predicted:.15}")?;
    writeln!(out, "delta measured  = {measured:.15}")?;
    writeln!(out, "phase gap = {gap:e}")?;
    writeln!(
        out,
        "horizontality residual = {:e}",
        lift.max_horizontality_residual()
    )?;
    writeln!(
        out,
        "lattice = ({:.15}, {:.15}), ({:.15}, {:.15})",
        lat.gen_fiber[0], lat.gen_fiber[1], lat.gen_horizontal[0], lat.gen_horizontal[1]
    )?;
    if gap < check {
        Ok(())
    } else {
        Err(CliError::Tolerance(format!(
            "holonomy gap {gap:e} exceeds {check:e}"
        )))
    }
}

fn exact_criterion(p: &ParamArgs, cos: &Exact) -> Result<ExactCriterion, CliError> {
    if p.alpha.exact.is_one() {
        Ok(s3_criterion_exact(&p.q.exact, &cos.exact)?)
    } else {
        Ok(closure_ratio_exact(&p.alpha.exact, &p.q.exact, &cos.exact)?)
    }
}

fn period(
    p: &ParamArgs,
    cos: &Exact,
    rational: &RationalArgs,
    measure: Option<(Source, f64, Option<f64>, f64)>,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let params = p.params()?;
    positive("tol", rational.tol)?;
    let predicted = if cos.value.abs() == 1.0 {
        writeln!(out, "fiber direction: the trajectory is a Reeb orbit")?;
        let period = 2.0 * PI * params.alpha();
        writeln!(out, "verdict = periodic")?;
        writeln!(out, "period = {period:.15}")?;
        Some(period)
    } else {
        let crit = exact_criterion(p, cos)?;
        let omega = drift_rate(&params, cos.value)?;
        let value = sasaki::periodicity::to_f64(&crit.squared)
            .sqrt()
            .copysign(sasaki::periodicity::closure_ratio(&params, cos.value)?);
        let approx = rational_approx(value, rational.max_denominator, rational.tol)?;
        match &crit.value {
            Some(v) => {
                let (num, den) = (v.numer().to_i64(), v.denom().to_u64());
                writeln!(
                    out,
                    "criterion = {} (exact)",
                    sasaki::periodicity::format_rational(v)
                )?;
                writeln!(out, "verdict = periodic")?;
                match num.zip(den) {
                    Some((num, den)) => {
                        let period = period_from_ratio(num, den, omega);
                        writeln!(out, "period = {period:.15}  ({:.6} pi)", period / PI)?;
                        Some(period)
                    }
                    None => {
                        writeln!(out, "period: ratio too large to evaluate")?;
                        None
                    }
                }
            }
            None => {
                writeln!(
                    out,
                    "criterion = {value:.17} (squared {} is not a rational square)",
                    sasaki::periodicity::format_rational(&crit.squared)
                )?;
                writeln!(
                    out,
                    "nearest = {}/{}  error = {:e}",
                    approx.numerator, approx.denominator, approx.error
                )?;
                writeln!(out, "verdict = {}", approx.verdict)?;
                if approx.verdict.is_periodic() {
                    let period = period_from_ratio(approx.numerator, approx.denominator, omega);
                    writeln!(
                        out,
                        "period = {period:.15}  ({:.6} pi, at resolution)",
                        period / PI
                    )?;
                    Some(period)
                } else {
                    None
                }
            }
        }
    };
    if let Some((source, ds, horizon, tol)) = measure {
        positive("ds", ds)?;
        let horizon = horizon.unwrap_or_else(|| predicted.map_or(200.0 * PI, |t| 1.01 * t + 1.0));
        let src = match source {
            Source::Closed => TrajectorySource::ClosedForm { ds },
            Source::Integrator => TrajectorySource::Integrator { ds },
        };
        let found = measure_period(src, &params, cos.value, horizon, tol)?;
        match found.period {
            Some(t) => writeln!(out, "measured period = {t:.12}")?,
            None => writeln!(
                out,
                "no return within {horizon:.6} at tol {tol:e}; nearest approach {:e} at s = {:.6}",
                found.min_distance, found.s_at_min
            )?,
        }
    }
    Ok(())
}

fn quantize(
    p: &ParamArgs,
    ratio: f64,
    sigma: Option<f64>,
    mn: Option<(i64, u64)>,
    rational: &RationalArgs,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let params = p.params()?;
    let radius = ratio * params.r();
    let sigma = match (sigma, mn) {
        (Some(s), _) => s,
        (None, Some((m, n))) => slope_from_mn(m, n, radius, &params)?,
        (None, None) => {
            return Err(CliError::Usage(
                "quantize needs --sigma or --m and --n".into(),
            ))
        }
    };
    let d = slope_quantization(
        radius,
        sigma,
        &params,
        rational.max_denominator,
        rational.tol,
    )?;
    writeln!(out, "R = {:.15}  sigma = {:.15}", d.radius, d.sigma)?;
    writeln!(out, "residual = {:.15}", d.residual)?;
    writeln!(out, "residual/alpha = {:.15}", d.residual / d.alpha)?;
    writeln!(
        out,
        "nearest = {}/{}  error = {:e}",
        d.ratio.numerator, d.ratio.denominator, d.ratio.error
    )?;
    writeln!(out, "verdict = {}", d.ratio.verdict)?;
    let (cos, q) = trajectory_for_slope(sigma, radius, params.alpha())?;
    writeln!(out, "trajectory: cos_theta = {cos:.15}  q = {q:.15}")?;
    Ok(())
}

fn scan_cmd(
    p: &ParamArgs,
    grid: usize,
    rational: &RationalArgs,
    path: Option<&Path>,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let rows = scan(&p.params()?, grid, rational.max_denominator, rational.tol)?;
    let mut text = String::from("cos_theta,criterion,numerator,denominator,error,verdict\n");
    for r in &rows {
        text.push_str(&format!(
            "{:.16e},{:.16e},{},{},{:.16e},{}\n",
            r.cos_theta, r.criterion, r.numerator, r.denominator, r.error, r.verdict
        ));
    }
    match path {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

/// Contact angles drawn for the Ikawa figure: the closing value and the
/// value printed in the original caption.
pub const FIGURE_VARIANTS: [(i64, i64); 2] = [(29, 36), (29, 37)];

fn figure(
    dir: &Path,
    n: usize,
    nt: usize,
    nu: usize,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<(), CliError> {
    if n < 2 {
        return Err(CliError::Usage("--samples must be at least 2".into()));
    }
    std::fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    let s_max = 12.0 * PI;
    let h = s_max / n as f64;
    let mut closed_gap = f64::NAN;
    for (num, den) in FIGURE_VARIANTS {
        let cos = num as f64 / den as f64;
        let omega = sasaki::periodicity::ikawa_omega_exact(&BigRational::new(
            BigInt::from(num),
            BigInt::from(den),
        ))?;
        let samples = ikawa_trajectory(cos)?.samples(h, n);
        let stem = format!("figure1_cos{num}-{den}");
        for (ext, fmt) in [
            ("csv", CurveFormat::Csv),
            ("obj", CurveFormat::Obj),
            ("svg", CurveFormat::Svg),
        ] {
            emit_curve(&samples, fmt, &dir.join(format!("{stem}.{ext}")))?;
        }
        let ends = stereographic_all(&[samples[0].position, samples[n].position])?;
        let gap = (0..3)
            .map(|k| (ends[0][k] - ends[1][k]).powi(2))
            .sum::<f64>()
            .sqrt();
        match &omega.value {
            Some(w) => writeln!(
                err,
                "cos(theta) = {num}/{den}: omega = {}, projected endpoint gap after 12 pi = {gap:e}",
                sasaki::periodicity::format_rational(w)
            )?,
            None => writeln!(
                err,
                "cos(theta) = {num}/{den}: omega^2 = {} is not a rational square, so the curve does not close; \
                 projected endpoint gap after 12 pi = {gap:e}. The closing curve with omega = 2/3 has cos(theta) = 29/36.",
                sasaki::periodicity::format_rational(&omega.squared)
            )?,
        }
        if (num, den) == (29, 36) {
            closed_gap = gap;
        }
        writeln!(
            out,
            "{}",
            dir.join(format!("{stem}.{{csv,obj,svg}}")).display()
        )?;
    }

    let params = Params::from_alpha(1.0, 1.0)?;
    let traj = ikawa_trajectory(29.0 / 36.0)?;
    let circle = SphereCircle::of_trajectory(&traj, &params)?;
    let tube_path: PathBuf = dir.join("figure2_tube.obj");
    let count = write_tube(
        &circle,
        &Su2Element::identity(),
        &params,
        nt,
        nu,
        &tube_path,
    )?;
    writeln!(
        err,
        "tube over the projected circle: {count} vertices, {count} quads"
    )?;
    writeln!(out, "{}", tube_path.display())?;
    if closed_gap.is_nan() || closed_gap >= 1e-5 {
        return Err(CliError::Tolerance(format!(
            "the 29/36 curve does not close after 12 pi (gap {closed_gap:e})"
        )));
    }
    Ok(())
}
