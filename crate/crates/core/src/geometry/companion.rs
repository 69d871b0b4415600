//! Conformal rescaling `g = φ² ĝ` along a reparametrization `r(t)` with
//! `φ dr = f dt`, so that `ĝ = dr² + Σ (f_j/φ)² (eʲ)²` up to the signs of
//! the metric.

use serde::Serialize;

use super::{signature_of, GeometryError};
use crate::evolution::{Kind, SolutionFamily};

pub enum Reparam<'a> {
    /// `r(t) = ∫_{t_ref}^t f`, computed by composite Simpson quadrature; gives `φ ≡ 1`.
    ProperTime { t_ref: f64 },
    /// A caller-supplied map and its derivative.
    Custom {
        r: &'a dyn Fn(f64) -> f64,
        dr: &'a dyn Fn(f64) -> f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CompanionSample {
    pub t: f64,
    pub r: f64,
    pub phi: f64,
    /// Diagonal of `g` on `(e¹, e², e³, dr)`.
    pub g: [f64; 4],
    /// Diagonal of `ĝ` on the same basis.
    pub g_hat: [f64; 4],
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConformalCompanion {
    pub samples: Vec<CompanionSample>,
    /// `max |g − φ² ĝ|` over all samples and entries.
    pub max_defect: f64,
}

const SIMPSON_PANELS: usize = 64;

fn simpson(f: &dyn Fn(f64) -> Result<f64, GeometryError>, a: f64, b: f64) -> Result<f64, GeometryError> {
    let n = SIMPSON_PANELS;
    let h = (b - a) / n as f64;
    let mut acc = f(a)? + f(b)?;
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + i as f64 * h)?;
    }
    Ok(acc * h / 3.0)
}

/// Sample the companion metric at increasing times `ts`.
pub fn conformal_companion(
    family: &SolutionFamily,
    kind: Kind,
    reparam: &Reparam<'_>,
    ts: &[f64],
) -> Result<ConformalCompanion, GeometryError> {
    if ts.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(GeometryError::Usage("sample times must be strictly increasing".into()));
    }
    let gauge = |t: f64| -> Result<f64, GeometryError> {
        family
            .eval(t)
            .map(|p| p.gauge.v)
            .map_err(|e| GeometryError::Usage(e.to_string()))
    };
    let (rs, drs): (Vec<f64>, Vec<f64>) = match reparam {
        Reparam::ProperTime { t_ref } => {
            let mut rs = Vec::with_capacity(ts.len());
            let mut drs = Vec::with_capacity(ts.len());
            let (mut prev_t, mut acc) = (*t_ref, 0.0);
            for &t in ts {
                acc += simpson(&gauge, prev_t, t)?;
                prev_t = t;
                rs.push(acc);
                drs.push(gauge(t)?);
            }
            (rs, drs)
        }
        Reparam::Custom { r, dr } => (ts.iter().map(|&t| r(t)).collect(), ts.iter().map(|&t| dr(t)).collect()),
    };

    let direction = drs.first().copied().unwrap_or(1.0).signum();
    for (i, &t) in ts.iter().enumerate() {
        let d = drs[i];
        if !(d.is_finite() && d != 0.0 && d.signum() == direction) {
            return Err(GeometryError::NonMonotone(t));
        }
        if i > 0 && !((rs[i] - rs[i - 1]) * direction > 0.0) {
            return Err(GeometryError::NonMonotone(t));
        }
    }

    let eta = signature_of(kind).eta;
    let mut samples = Vec::with_capacity(ts.len());
    let mut max_defect = 0.0f64;
    for (i, &t) in ts.iter().enumerate() {
        let (f, g) = family
            .eval(t)
            .map(|p| p.values())
            .map_err(|e| GeometryError::Usage(e.to_string()))?;
        let phi = g / drs[i];
        if !(phi > 0.0) {
            return Err(GeometryError::Usage(format!(
                "conformal factor must be positive, got {phi} at t = {t}"
            )));
        }
        let metric = [
            eta[0] * f[0] * f[0],
            eta[1] * f[1] * f[1],
            eta[2] * f[2] * f[2],
            eta[3] * phi * phi,
        ];
        let g_hat = [
            metric[0] / (phi * phi),
            metric[1] / (phi * phi),
            metric[2] / (phi * phi),
            eta[3],
        ];
        for k in 0..4 {
            max_defect = max_defect.max((metric[k] - phi * phi * g_hat[k]).abs());
        }
        samples.push(CompanionSample {
            t,
            r: rs[i],
            phi,
            g: metric,
            g_hat,
        });
    }
    Ok(ConformalCompanion {
        samples,
        max_defect,
    })
}
