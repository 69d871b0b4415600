//! Fixed-step RK4 for the reduced systems.
//!
//! The state is integrated in the squared pair products `xᵢ = (f_j f_k)²`,
//! for which `dxᵢ/dt = 2 wᵢ f(t) s (x₁x₂x₃)^{1/4}` with `s = sign(f₁f₂f₃)`,
//! and recovered as `f_i = ± (x_j x_k / x_i)^{1/4}` keeping the initial signs.
//! A pair product reaching zero is the edge of the solution's domain.

use std::io::Write;

use serde::Serialize;

use super::{EvolutionError, OdeWeights};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrajectoryPoint {
    pub t: f64,
    pub f: [f64; 3],
    pub gauge: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundaryHit {
    /// Time of the attempted step that left the domain.
    pub t: f64,
    pub last: TrajectoryPoint,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    pub points: Vec<TrajectoryPoint>,
    pub boundary: Option<BoundaryHit>,
}

impl Trajectory {
    pub fn last(&self) -> &TrajectoryPoint {
        self.points.last().expect("trajectory always holds its initial point")
    }

    pub fn reached_end(&self) -> bool {
        self.boundary.is_none()
    }

    /// Write `t,f1,f2,f3,f` rows.
    pub fn write_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["t", "f1", "f2", "f3", "f"])?;
        for p in &self.points {
            w.serialize((p.t, p.f[0], p.f[1], p.f[2], p.gauge))?;
        }
        w.flush()?;
        Ok(())
    }
}

fn rhs(w: [f64; 3], g: f64, s: f64, x: [f64; 3]) -> Option<[f64; 3]> {
    let prod = x[0] * x[1] * x[2];
    if !(prod > 0.0) || !g.is_finite() {
        return None;
    }
    let q = prod.powf(0.25);
    Some(w.map(|wi| 2.0 * wi * g * s * q))
}

fn recover(x: [f64; 3], signs: [f64; 3]) -> [f64; 3] {
    std::array::from_fn(|i| {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        signs[i] * (x[j] * x[k] / x[i]).powf(0.25)
    })
}

/// Integrate from `t0` to `t1` (either direction) with steps no longer than
/// `step`, starting from `init = (f₁, f₂, f₃)` at `t0`.
pub fn integrate<S: OdeWeights>(
    system: &S,
    gauge: impl Fn(f64) -> f64,
    init: [f64; 3],
    t0: f64,
    t1: f64,
    step: f64,
) -> Result<Trajectory, EvolutionError> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(EvolutionError::BadIntegration(format!("step must be positive, got {step}")));
    }
    if !(t0.is_finite() && t1.is_finite()) {
        return Err(EvolutionError::BadIntegration("time range must be finite".into()));
    }
    if init.iter().any(|v| *v == 0.0 || !v.is_finite()) {
        return Err(EvolutionError::BadIntegration(format!(
            "initial f must be finite and nonzero, got {init:?}"
        )));
    }
    let g0 = gauge(t0);
    if g0 == 0.0 || !g0.is_finite() {
        return Err(EvolutionError::BadIntegration(format!("gauge is {g0} at t0 = {t0}")));
    }

    let w = system.weights();
    let signs = init.map(f64::signum);
    let s = signs[0] * signs[1] * signs[2];
    let mut x: [f64; 3] = std::array::from_fn(|i| {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        (init[j] * init[k]).powi(2)
    });

    let span = t1 - t0;
    let n = (span.abs() / step).ceil().max(1.0) as usize;
    let h = span / n as f64;
    let mut points = Vec::with_capacity(n + 1);
    points.push(TrajectoryPoint { t: t0, f: init, gauge: g0 });

    let add = |a: [f64; 3], b: [f64; 3], c: f64| -> [f64; 3] { std::array::from_fn(|i| a[i] + c * b[i]) };

    for i in 0..n {
        let t = t0 + i as f64 * h;
        let tn = if i + 1 == n { t1 } else { t0 + (i + 1) as f64 * h };
        let stage = || -> Option<[f64; 3]> {
            let k1 = rhs(w, gauge(t), s, x)?;
            let k2 = rhs(w, gauge(t + 0.5 * h), s, add(x, k1, 0.5 * h))?;
            let k3 = rhs(w, gauge(t + 0.5 * h), s, add(x, k2, 0.5 * h))?;
            let k4 = rhs(w, gauge(t + h), s, add(x, k3, h))?;
            Some(std::array::from_fn(|m| {
                x[m] + h / 6.0 * (k1[m] + 2.0 * k2[m] + 2.0 * k3[m] + k4[m])
            }))
        };
        let next = stage();
        let g = gauge(tn);
        let hit = |reason: String| BoundaryHit {
            t: tn,
            last: *points.last().expect("nonempty"),
            reason,
        };
        let xn = match next {
            Some(xn) if xn.iter().all(|v| *v > 0.0 && v.is_finite()) => xn,
            Some(xn) => {
                let idx = xn.iter().position(|v| !(*v > 0.0 && v.is_finite())).unwrap_or(0);
                let boundary = hit(format!("x{} = (f_j f_k)^2 reached {}", idx + 1, xn[idx]));
                return Ok(Trajectory { points, boundary: Some(boundary) });
            }
            None => {
                let boundary = hit("right-hand side left the domain within the step".into());
                return Ok(Trajectory { points, boundary: Some(boundary) });
            }
        };
        if g == 0.0 || !g.is_finite() {
            let boundary = hit(format!("gauge is {g}"));
            return Ok(Trajectory { points, boundary: Some(boundary) });
        }
        x = xn;
        points.push(TrajectoryPoint { t: tn, f: recover(x, signs), gauge: g });
    }
    Ok(Trajectory { points, boundary: None })
}
