//! Browser bindings: trajectories, curvature certification and the HK/HS
//! correspondence, each returned as a JSON string for the static page in `www/`.
//!
//! The `*_json` functions are plain Rust so they can be tested natively; the
//! `#[wasm_bindgen]` wrappers only convert errors into JavaScript exceptions.

use bianchi_core::bianchi::{algebra_for, BianchiLabel};
use bianchi_core::curvature::Tolerances;
use bianchi_core::evolution::{correspondence_table, named_solution, reduce_label, FamilyKind, Kind};
use bianchi_core::export::family_trajectory;
use bianchi_core::verify::{run_verification, sample_grid, Verdict, VerificationSpec};
use serde_json::json;
use wasm_bindgen::prelude::*;

const MAX_SAMPLES: usize = 2000;

fn check_window(t_min: f64, t_max: f64, samples: usize) -> Result<(), String> {
    if !(t_min.is_finite() && t_max.is_finite() && t_min <= t_max) {
        return Err(format!("invalid window [{t_min}, {t_max}]"));
    }
    if samples == 0 || samples > MAX_SAMPLES {
        return Err(format!("samples must lie in 1..={MAX_SAMPLES}"));
    }
    Ok(())
}

/// Class-A groups with both sign patterns and the HS group sharing each HK system.
pub fn correspondence_json() -> String {
    let pairs = correspondence_table();
    let rows: Vec<_> = BianchiLabel::ALL
        .into_iter()
        .filter_map(|label| {
            let hk = reduce_label(label, Kind::Hk).ok()?;
            let hs = reduce_label(label, Kind::Hs).ok()?;
            let partner = pairs.iter().find(|p| p.hk == label);
            Some(json!({
                "group": label,
                "sigma_hk": hk.sigma,
                "sigma_hs": hs.sigma,
                "hs_partner": partner.map(|p| p.hs),
                "sign_flipped": partner.map(|p| p.sign_flipped),
            }))
        })
        .collect();
    serde_json::Value::Array(rows).to_string()
}

/// Closed-form `f_1, f_2, f_3, f` of a family on an evenly spaced grid.
pub fn trajectory_json(
    family: &str,
    params: [f64; 3],
    t_min: f64,
    t_max: f64,
    samples: usize,
) -> Result<String, String> {
    check_window(t_min, t_max, samples)?;
    let kind: FamilyKind = family.parse()?;
    let fam = named_solution(kind, params).map_err(|e| e.to_string())?;
    let traj = family_trajectory(&fam, &sample_grid(t_min, t_max, samples)).map_err(|e| e.to_string())?;
    Ok(json!({
        "family": kind,
        "sigma": fam.sigma(),
        "domain": [fam.domain.0, fam.domain.1],
        "points": traj.points,
    })
    .to_string())
}

/// Verify a family on a group and return the curvature series with the verdict.
#[allow(clippy::too_many_arguments)]
pub fn certify_json(
    group: &str,
    kind: &str,
    family: &str,
    params: [f64; 3],
    t_min: f64,
    t_max: f64,
    samples: usize,
    perturb: f64,
) -> Result<String, String> {
    check_window(t_min, t_max, samples)?;
    let label: BianchiLabel = group.parse().map_err(|e: bianchi_core::bianchi::BianchiError| e.to_string())?;
    let spec = VerificationSpec {
        group: algebra_for(label).map_err(|e| e.to_string())?,
        kind: kind.parse()?,
        family: family.parse()?,
        params,
        t_min,
        t_max,
        samples,
        perturb,
    };
    let run = run_verification(&spec, &Tolerances::default()).map_err(|e| e.to_string())?;
    let series: Vec<_> = run
        .results
        .iter()
        .map(|r| {
            json!({
                "t": r.t,
                "ricci": r.ricci_max_abs,
                "weyl_sd": r.weyl_sd_norm,
                "weyl_asd": r.weyl_asd_norm,
                "riemann": r.riemann_norm,
                "residual": r.residual_max_abs,
                "dF": r.d_f_max_abs,
                "nijenhuis": r.nijenhuis_max_abs,
                "pass": r.pass.all,
            })
        })
        .collect();
    Ok(json!({
        "verdict": matches!(run.verdict, Verdict::Pass),
        "sigma": run.system.sigma,
        "flip_f3": run.flip_f3,
        "series": series,
    })
    .to_string())
}

#[wasm_bindgen]
pub fn correspondence() -> String {
    correspondence_json()
}

#[wasm_bindgen]
pub fn trajectory(
    family: &str,
    p1: f64,
    p2: f64,
    p3: f64,
    t_min: f64,
    t_max: f64,
    samples: usize,
) -> Result<String, JsError> {
    trajectory_json(family, [p1, p2, p3], t_min, t_max, samples).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
#[allow(clippy::too_many_arguments)]
pub fn certify(
    group: &str,
    kind: &str,
    family: &str,
    p1: f64,
    p2: f64,
    p3: f64,
    t_min: f64,
    t_max: f64,
    samples: usize,
    perturb: f64,
) -> Result<String, JsError> {
    certify_json(group, kind, family, [p1, p2, p3], t_min, t_max, samples, perturb)
        .map_err(|e| JsError::new(&e))
}
