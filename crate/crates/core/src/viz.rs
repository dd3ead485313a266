//! Stereographic projection of `S³` and plain-text figure output
//! (CSV, OBJ, SVG).
//!
//! Points are read in the C² chart `(x1, x2, x3, x4)` of
//! [`Su2Element::to_c2`] and projected from the pole `(0, 0, 0, 1)`.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::flow::TrajectorySample;
use crate::sasaki::FrameVector;
use crate::scalar::{lit, Scalar};
use crate::su2::Su2Element;

/// Samples closer than this to the pole are rejected.
pub const POLE_GUARD: f64 = 1e-9;

pub const TRAJECTORY_HEADER: [&str; 11] = [
    "s",
    "x0",
    "x1",
    "x2",
    "x3",
    "T1",
    "T2",
    "T3",
    "res_norm",
    "res_speed",
    "res_angle",
];

fn pole_distance<T: Scalar>(x: &[T; 4]) -> T {
    (x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + (x[3] - T::one()) * (x[3] - T::one())).sqrt()
}

/// `(x1, x2, x3)/(1 - x4)`.
pub fn stereographic<T: Scalar>(p: &Su2Element<T>) -> Result<[T; 3]> {
    let x = p.to_c2();
    if !(pole_distance(&x) > lit(POLE_GUARD)) {
        return Err(Error::ProjectionSingularity { indices: vec![0] });
    }
    let d = T::one() - x[3];
    Ok([x[0] / d, x[1] / d, x[2] / d])
}

/// `(2y, |y|² - 1)/(|y|² + 1)`.
pub fn inverse_stereographic<T: Scalar>(y: [T; 3]) -> Su2Element<T> {
    let n2 = y[0] * y[0] + y[1] * y[1] + y[2] * y[2];
    let d = n2 + T::one();
    let two: T = lit(2.0);
    Su2Element::from_c2([
        two * y[0] / d,
        two * y[1] / d,
        two * y[2] / d,
        (n2 - T::one()) / d,
    ])
}

/// Projects every point, reporting all offending indices at once.
pub fn stereographic_all<T: Scalar>(points: &[Su2Element<T>]) -> Result<Vec<[T; 3]>> {
    let bad: Vec<usize> = points
        .iter()
        .enumerate()
        .filter(|(_, p)| !(pole_distance(&p.to_c2()) > lit(POLE_GUARD)))
        .map(|(i, _)| i)
        .collect();
    if !bad.is_empty() {
        return Err(Error::ProjectionSingularity { indices: bad });
    }
    Ok(points.iter().map(|p| stereographic(p).unwrap()).collect())
}

/// Output format of [`emit_curve`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveFormat {
    Csv,
    Obj,
    Svg,
}

impl CurveFormat {
    /// Format implied by a file extension.
    pub fn from_path(path: &Path) -> Option<Self> {
        match path.extension()?.to_str()?.to_ascii_lowercase().as_str() {
            "csv" => Some(Self::Csv),
            "obj" => Some(Self::Obj),
            "svg" => Some(Self::Svg),
            _ => None,
        }
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::io(path, e))
}

fn finish(path: &Path, mut w: BufWriter<File>) -> Result<()> {
    w.flush().map_err(|e| Error::io(path, e))
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// Trajectory table with the fixed header, optionally followed by the
/// projected columns `px,py,pz`.
pub fn write_trajectory_csv(
    path: &Path,
    samples: &[TrajectorySample<f64>],
    projected: bool,
) -> Result<()> {
    if samples.is_empty() {
        return Err(Error::Empty);
    }
    let proj = if projected {
        Some(stereographic_all(
            &samples.iter().map(|s| s.position).collect::<Vec<_>>(),
        )?)
    } else {
        None
    };
    let mut w = create(path)?;
    let mut header = TRAJECTORY_HEADER.join(",");
    if projected {
        header.push_str(",px,py,pz");
    }
    let io = |e| Error::io(path, e);
    writeln!(w, "{header}").map_err(io)?;
    for (idx, smp) in samples.iter().enumerate() {
        let x = smp.position.coords();
        let t = smp.tangent;
        let mut row: Vec<String> = [
            smp.s,
            x[0],
            x[1],
            x[2],
            x[3],
            t.a1,
            t.a2,
            t.a3,
            smp.residual_norm,
            smp.residual_speed,
            smp.residual_angle,
        ]
        .into_iter()
        .map(num)
        .collect();
        if let Some(p) = &proj {
            row.extend(p[idx].iter().map(|v| num(*v)));
        }
        writeln!(w, "{}", row.join(",")).map_err(io)?;
    }
    finish(path, w)
}

/// Reads a table written by [`write_trajectory_csv`]; extra columns are
/// ignored.
pub fn read_trajectory_csv(path: &Path) -> Result<Vec<TrajectorySample<f64>>> {
    let mut reader = csv::Reader::from_path(path).map_err(|e| Error::io(path, e))?;
    let header = reader.headers().map_err(|e| Error::io(path, e))?.clone();
    let mut cols = [0usize; 11];
    for (slot, name) in cols.iter_mut().zip(TRAJECTORY_HEADER) {
        *slot = header
            .iter()
            .position(|h| h.trim() == name)
            .ok_or_else(|| Error::Parse(format!("{}: missing column `{name}`", path.display())))?;
    }
    let mut out = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::io(path, e))?;
        let mut v = [0.0f64; 11];
        for (k, &c) in cols.iter().enumerate() {
            let field = record.get(c).unwrap_or("");
            v[k] = field.trim().parse().map_err(|_| {
                Error::Parse(format!(
                    "{}: row {}: `{field}` is not a number",
                    path.display(),
                    line + 2
                ))
            })?;
        }
        out.push(TrajectorySample {
            s: v[0],
            position: Su2Element::new(v[1], v[2], v[3], v[4]),
            tangent: FrameVector::new(v[5], v[6], v[7]),
            residual_norm: v[8],
            residual_speed: v[9],
            residual_angle: v[10],
        });
    }
    if out.is_empty() {
        return Err(Error::Empty);
    }
    Ok(out)
}

/// `u,y1,y2,y3` rows of a projected curve.
pub fn write_projection_csv(path: &Path, u: &[f64], points: &[[f64; 3]]) -> Result<()> {
    if points.is_empty() {
        return Err(Error::Empty);
    }
    if u.len() != points.len() {
        return Err(Error::Contract("parameter and point counts differ".into()));
    }
    let mut w = create(path)?;
    let io = |e| Error::io(path, e);
    writeln!(w, "u,y1,y2,y3").map_err(io)?;
    for (s, p) in u.iter().zip(points) {
        writeln!(w, "{},{},{},{}", num(*s), num(p[0]), num(p[1]), num(p[2])).map_err(io)?;
    }
    finish(path, w)
}

/// One `v` line per point, then a single `l` polyline through all of them.
pub fn write_polyline_obj(path: &Path, points: &[[f64; 3]]) -> Result<()> {
    if points.is_empty() {
        return Err(Error::Empty);
    }
    let mut w = create(path)?;
    let io = |e| Error::io(path, e);
    for p in points {
        writeln!(w, "v {} {} {}", num(p[0]), num(p[1]), num(p[2])).map_err(io)?;
    }
    let idx: Vec<String> = (1..=points.len()).map(|i| i.to_string()).collect();
    writeln!(w, "l {}", idx.join(" ")).map_err(io)?;
    finish(path, w)
}

/// Vertex lines, then one `f` line per quad (indices are zero-based on
/// input and written one-based).
pub fn write_mesh_obj(path: &Path, vertices: &[[f64; 3]], quads: &[[usize; 4]]) -> Result<()> {
    if vertices.is_empty() {
        return Err(Error::Empty);
    }
    if let Some(q) = quads
        .iter()
        .find(|q| q.iter().any(|&i| i >= vertices.len()))
    {
        return Err(Error::Contract(format!(
            "face {q:?} references a missing vertex"
        )));
    }
    let mut w = create(path)?;
    let io = |e| Error::io(path, e);
    for p in vertices {
        writeln!(w, "v {} {} {}", num(p[0]), num(p[1]), num(p[2])).map_err(io)?;
    }
    for q in quads {
        writeln!(w, "f {} {} {} {}", q[0] + 1, q[1] + 1, q[2] + 1, q[3] + 1).map_err(io)?;
    }
    finish(path, w)
}

/// Orthographic `(x, y)` view of one or more polylines with a viewBox
/// fitted to the data plus a 5% margin. The y axis points up.
pub fn write_svg(path: &Path, polylines: &[Vec<[f64; 2]>]) -> Result<()> {
    if polylines.iter().all(|p| p.is_empty()) {
        return Err(Error::Empty);
    }
    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for p in polylines.iter().flatten() {
        for k in 0..2 {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    let span = (hi[0] - lo[0]).max(hi[1] - lo[1]).max(1e-12);
    let margin = 0.05 * span;
    let (x0, y0) = (lo[0] - margin, -hi[1] - margin);
    let (wd, ht) = (hi[0] - lo[0] + 2.0 * margin, hi[1] - lo[1] + 2.0 * margin);
    let stroke = span / 400.0;
    let mut w = create(path)?;
    let io = |e| Error::io(path, e);
    writeln!(
        w,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{x0:.9} {y0:.9} {wd:.9} {ht:.9}\">"
    )
    .map_err(io)?;
    for line in polylines.iter().filter(|p| !p.is_empty()) {
        let pts: Vec<String> = line
            .iter()
            .map(|p| format!("{:.9},{:.9}", p[0], -p[1]))
            .collect();
        writeln!(
            w,
            "  <polyline fill=\"none\" stroke=\"black\" stroke-width=\"{stroke:.9}\" points=\"{}\"/>",
            pts.join(" ")
        )
        .map_err(io)?;
    }
    writeln!(w, "</svg>").map_err(io)?;
    finish(path, w)
}

/// Writes `samples` in the requested format; CSV carries the projected
/// columns, OBJ is a polyline, SVG shows `(px, py)`.
pub fn emit_curve(
    samples: &[TrajectorySample<f64>],
    format: CurveFormat,
    path: &Path,
) -> Result<()> {
    if samples.is_empty() {
        return Err(Error::Empty);
    }
    match format {
        CurveFormat::Csv => write_trajectory_csv(path, samples, true),
        CurveFormat::Obj | CurveFormat::Svg => {
            let pts = stereographic_all(&samples.iter().map(|s| s.position).collect::<Vec<_>>())?;
            if format == CurveFormat::Obj {
                write_polyline_obj(path, &pts)
            } else {
                write_svg(path, &[pts.iter().map(|p| [p[0], p[1]]).collect()])
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow::ikawa_trajectory;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn examples() {
        let south = Su2Element::from_c2([0.0, 0.0, 0.0, -1.0]);
        assert_eq!(stereographic(&south).unwrap(), [0.0, 0.0, 0.0]);
        assert_eq!(
            stereographic(&Su2Element::<f64>::identity()).unwrap(),
            [1.0, 0.0, 0.0]
        );
        let pole = Su2Element::from_c2([0.0, 0.0, 0.0, 1.0]);
        assert!(matches!(
            stereographic(&pole),
            Err(Error::ProjectionSingularity { .. })
        ));
        let pts = [Su2Element::identity(), pole, south, pole];
        match stereographic_all(&pts) {
            Err(Error::ProjectionSingularity { indices }) => assert_eq!(indices, vec![1, 3]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn round_trip_on_random_points() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        let mut worst: f64 = 0.0;
        for _ in 0..10_000 {
            let v: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
            let p = Su2Element::new(v[0], v[1], v[2], v[3]);
            if p.to_c2()[3] > 0.9 {
                continue;
            }
            let back = inverse_stereographic(stereographic(&p).unwrap());
            worst = worst.max(back.distance(&p));
        }
        assert!(worst < 1e-12, "{worst}");
    }

    proptest! {
        #[test]
        fn inverse_lands_on_sphere(y in proptest::array::uniform3(-50.0f64..50.0)) {
            let p = inverse_stereographic(y);
            let back = stereographic(&p).unwrap();
            for k in 0..3 {
                prop_assert!((back[k] - y[k]).abs() < 1e-9 * (1.0 + y[k].abs()));
            }
        }
    }

    #[test]
    fn csv_round_trip_and_determinism() {
        let dir = tempfile::tempdir().unwrap();
        let traj = ikawa_trajectory(29.0 / 36.0).unwrap();
        let samples = traj.samples(0.1, 40);
        let a = dir.path().join("a.csv");
        let b = dir.path().join("b.csv");
        write_trajectory_csv(&a, &samples, true).unwrap();
        write_trajectory_csv(&b, &samples, true).unwrap();
        let text = std::fs::read_to_string(&a).unwrap();
        assert_eq!(text, std::fs::read_to_string(&b).unwrap());
        assert!(text.starts_with("s,x0,x1,x2,x3,T1,T2,T3,res_norm,res_speed,res_angle,px,py,pz\n"));
        let back = read_trajectory_csv(&a).unwrap();
        assert_eq!(back.len(), samples.len());
        for (x, y) in back.iter().zip(&samples) {
            assert_eq!(x.s, y.s);
            assert_eq!(x.tangent, y.tangent);
            assert!(x.position.distance(&y.position) < 1e-15);
        }
    }

    #[test]
    fn empty_input_creates_nothing() {
        let dir = tempfile::tempdir().unwrap();
        for fmt in [CurveFormat::Csv, CurveFormat::Obj, CurveFormat::Svg] {
            let path = dir.path().join("empty.out");
            assert!(matches!(emit_curve(&[], fmt, &path), Err(Error::Empty)));
            assert!(!path.exists());
        }
        let path = dir.path().join("mesh.obj");
        assert!(write_mesh_obj(&path, &[], &[]).is_err());
        assert!(!path.exists());
    }

    #[test]
    fn obj_and_svg_layout() {
        let dir = tempfile::tempdir().unwrap();
        let traj = ikawa_trajectory(0.3).unwrap();
        let samples = traj.samples(0.05, 20);
        let obj = dir.path().join("c.obj");
        emit_curve(&samples, CurveFormat::Obj, &obj).unwrap();
        let text = std::fs::read_to_string(&obj).unwrap();
        assert_eq!(text.lines().filter(|l| l.starts_with("v ")).count(), 21);
        assert!(text.lines().last().unwrap().starts_with("l 1 2 3"));
        let svg = dir.path().join("c.svg");
        emit_curve(&samples, CurveFormat::Svg, &svg).unwrap();
        let text = std::fs::read_to_string(&svg).unwrap();
        assert!(text.contains("viewBox=") && text.contains("<polyline"));
        let mesh = dir.path().join("m.obj");
        let verts = [[0.0; 3], [1.0, 0.0, 0.0], [1.0, 1.0, 0.0], [0.0, 1.0, 0.0]];
        write_mesh_obj(&mesh, &verts, &[[0, 1, 2, 3]]).unwrap();
        assert!(std::fs::read_to_string(&mesh)
            .unwrap()
            .ends_with("f 1 2 3 4\n"));
        assert!(write_mesh_obj(&mesh, &verts, &[[0, 1, 2, 4]]).is_err());
    }

    #[test]
    fn format_from_extension() {
        assert_eq!(
            CurveFormat::from_path(Path::new("a/b.CSV")),
            Some(CurveFormat::Csv)
        );
        assert_eq!(
            CurveFormat::from_path(Path::new("x.svg")),
            Some(CurveFormat::Svg)
        );
        assert_eq!(CurveFormat::from_path(Path::new("x.txt")), None);
    }

    #[test]
    fn unwritable_path_is_an_io_error() {
        let samples = ikawa_trajectory(0.3).unwrap().samples(0.1, 3);
        let path = Path::new("/nonexistent-dir/x.csv");
        assert!(matches!(
            emit_curve(&samples, CurveFormat::Csv, path),
            Err(Error::Io { .. })
        ));
    }
}
