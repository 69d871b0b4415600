use std::io::Write;

use serde::Serialize;

use crate::bianchi::BianchiAlgebra;
use crate::curvature::CurvatureReport;
use crate::evolution::{Kind, SolutionFamily, Trajectory, TrajectoryPoint};
use crate::geometry::{metric_in_coordinates, signature_counts, Chart};
use crate::verify::{sample_state, VerifyError};

/// Closed-form values on a grid, in the same shape as an integrated trajectory.
pub fn family_trajectory(family: &SolutionFamily, ts: &[f64]) -> Result<Trajectory, VerifyError> {
    let points = ts
        .iter()
        .map(|&t| {
            let (f, gauge) = family.eval(t)?.values();
            Ok(TrajectoryPoint { t, f, gauge })
        })
        .collect::<Result<_, VerifyError>>()?;
    Ok(Trajectory { points, boundary: None })
}

pub fn write_curvature_csv<W: Write>(reports: &[CurvatureReport], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "t",
        "ricci_max_abs",
        "riemann_norm",
        "weyl_sd_norm",
        "weyl_asd_norm",
        "dF_max_abs",
        "residual_max_abs",
        "nijenhuis_max_abs",
        "identity_defect",
        "pair_symmetry_defect",
        "pass",
    ])?;
    for r in reports {
        w.serialize((
            r.t,
            r.ricci_max_abs,
            r.riemann_norm,
            r.weyl_sd_norm,
            r.weyl_asd_norm,
            r.d_f_max_abs,
            r.residual_max_abs,
            r.nijenhuis_max_abs,
            r.identity_defect,
            r.pair_symmetry_defect,
            r.pass.all,
        ))?;
    }
    w.flush()?;
    Ok(())
}

/// Plot series `t, ricci_max_abs, weyl_sd_norm, riemann_norm`.
pub fn write_plot_csv<W: Write>(reports: &[CurvatureReport], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["t", "ricci_max_abs", "weyl_sd_norm", "riemann_norm"])?;
    for r in reports {
        w.serialize((r.t, r.ricci_max_abs, r.weyl_sd_norm, r.riemann_norm))?;
    }
    w.flush()?;
    Ok(())
}

/// One coordinate-metric record; `g` lists the upper triangle row by row in
/// the coordinate order `(t, c¹, c², c³)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricSample {
    pub t: f64,
    pub coords: [f64; 3],
    pub g: [f64; 10],
    pub signature: [usize; 2],
}

pub fn metric_samples(
    family: &SolutionFamily,
    algebra: &BianchiAlgebra,
    kind: Kind,
    chart: &Chart,
    ts: &[f64],
    coords: [f64; 3],
) -> Result<Vec<MetricSample>, VerifyError> {
    ts.iter()
        .map(|&t| {
            let st = sample_state(family, algebra, kind, t, 0.0)?;
            let m = metric_in_coordinates(&st, chart, coords)?;
            let mut g = [0.0; 10];
            let mut k = 0;
            for i in 0..4 {
                for j in i..4 {
                    g[k] = m[i][j];
                    k += 1;
                }
            }
            let (p, n) = signature_counts(&m);
            Ok(MetricSample {
                t,
                coords,
                g,
                signature: [p, n],
            })
        })
        .collect()
}

pub fn write_metric_csv<W: Write>(samples: &[MetricSample], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["t".to_string(), "c1".into(), "c2".into(), "c3".into()];
    for i in 0..4 {
        for j in i..4 {
            header.push(format!("g{i}{j}"));
        }
    }
    header.push("positive".into());
    header.push("negative".into());
    w.write_record(&header)?;
    for s in samples {
        let mut row: Vec<String> = vec![s.t.to_string()];
        row.extend(s.coords.iter().map(f64::to_string));
        row.extend(s.g.iter().map(f64::to_string));
        row.push(s.signature[0].to_string());
        row.push(s.signature[1].to_string());
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}
