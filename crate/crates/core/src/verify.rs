//! End-to-end verification of a solution family on a sample grid.

use serde::Serialize;
use thiserror::Error;

use crate::bianchi::{BianchiAlgebra, BianchiError};
use crate::curvature::{CurvatureReport, Tolerances};
use crate::evolution::{
    named_solution, reduce, EvolutionError, EvolutionSystem, FamilyKind, Kind, OdeWeights,
    SolutionFamily,
};
use crate::geometry::{FrameState, GeometryError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum VerifyError {
    #[error(transparent)]
    Bianchi(#[from] BianchiError),
    #[error(transparent)]
    Evolution(#[from] EvolutionError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("family {family} solves sigma {family_sigma:?}, which is not sign-equivalent to the {kind} system of type {group} with sigma {sigma:?}")]
    Incompatible {
        family: FamilyKind,
        family_sigma: [i8; 3],
        group: String,
        kind: Kind,
        sigma: [i8; 3],
    },
    #[error("{0}")]
    Usage(String),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationSpec {
    pub group: BianchiAlgebra,
    pub kind: Kind,
    pub family: FamilyKind,
    pub params: [f64; 3],
    pub t_min: f64,
    pub t_max: f64,
    pub samples: usize,
    /// Relative perturbation of `f₁`; zero for the exact family.
    pub perturb: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationRun {
    pub spec: VerificationSpec,
    pub system: EvolutionSystem,
    pub flip_f3: bool,
    pub tolerances: Tolerances,
    pub results: Vec<CurvatureReport>,
    pub verdict: Verdict,
}

/// Inclusive, evenly spaced grid; a single sample sits at `t_min`.
pub fn sample_grid(t_min: f64, t_max: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![t_min],
        _ => (0..n)
            .map(|i| {
                if i + 1 == n {
                    t_max
                } else {
                    t_min + (t_max - t_min) * i as f64 / (n - 1) as f64
                }
            })
            .collect(),
    }
}

/// Bind a family to the reduced system of `(algebra, kind)`, flipping `f₃`
/// when the family solves `−σ`.
pub fn compatible_family(
    algebra: &BianchiAlgebra,
    kind: Kind,
    family: FamilyKind,
    params: [f64; 3],
) -> Result<(EvolutionSystem, SolutionFamily), VerifyError> {
    let system = reduce(algebra, kind)?;
    let fam = named_solution(family, params)?;
    let fs = fam.sigma();
    let flip = if fs == system.sigma {
        false
    } else if fs.map(|v| -v) == system.sigma {
        true
    } else {
        return Err(VerifyError::Incompatible {
            family,
            family_sigma: fs,
            group: algebra.label.to_string(),
            kind,
            sigma: system.sigma,
        });
    };
    Ok((system, fam.with_flip(flip)))
}

/// Frame state of `family` at `t`, optionally perturbed.
pub fn sample_state(
    family: &SolutionFamily,
    algebra: &BianchiAlgebra,
    kind: Kind,
    t: f64,
    perturb: f64,
) -> Result<FrameState, VerifyError> {
    let p = family.eval(t)?;
    let st = FrameState::from_jets(t, p.f, p.gauge, kind, *algebra)?;
    Ok(if perturb != 0.0 { st.perturbed(perturb) } else { st })
}

pub fn run_verification(
    spec: &VerificationSpec,
    tolerances: &Tolerances,
) -> Result<VerificationRun, VerifyError> {
    if spec.samples == 0 {
        return Err(VerifyError::Usage("need at least one sample".into()));
    }
    if !(spec.t_min <= spec.t_max) {
        return Err(VerifyError::Usage(format!(
            "empty range: t-min {} > t-max {}",
            spec.t_min, spec.t_max
        )));
    }
    let (system, family) = compatible_family(&spec.group, spec.kind, spec.family, spec.params)?;
    let mut results = Vec::with_capacity(spec.samples);
    for t in sample_grid(spec.t_min, spec.t_max, spec.samples) {
        let st = sample_state(&family, &spec.group, spec.kind, t, spec.perturb)?;
        results.push(CurvatureReport::assess(&st, system.weights(), tolerances)?);
    }
    let verdict = if results.iter().all(|r| r.pass.all) {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    Ok(VerificationRun {
        spec: spec.clone(),
        system,
        flip_f3: family.flip_f3,
        tolerances: *tolerances,
        results,
        verdict,
    })
}

/// The exact solution used for each of the ten non-abelian `(group, kind)`
/// pairs by default, with parameters and a sample range inside its domain.
/// `(group, kind, family, params, (t_min, t_max))`.
pub type ReferenceCase = (crate::bianchi::BianchiLabel, Kind, FamilyKind, [f64; 3], (f64, f64));

pub fn reference_cases() -> Vec<ReferenceCase> {
    use crate::bianchi::BianchiLabel::*;
    use FamilyKind::*;
    vec![
        (IX, Kind::Hk, EguchiHanson, [1.0, 0.0, 0.0], (1.01, 2.0)),
        (VIII, Kind::Hk, Su11Biaxial, [2.0, 0.0, 0.0], (0.3, 1.15)),
        (II, Kind::Hk, HeisenbergGh, [0.0; 3], (0.2, 4.0)),
        (VII0, Kind::Hk, Vii0Vacuum, [1.0, 0.5, 0.0], (0.0, 2.0)),
        (VI0, Kind::Hk, Vi0Vacuum, [1.0, 0.3, 0.0], (0.35, 1.75)),
        (VIII, Kind::Hs, BgppTriaxial, [1.0, 1.2, 1.4], (1.45, 3.0)),
        (IX, Kind::Hs, Su11Biaxial, [2.0, 0.0, 0.0], (0.3, 1.15)),
        (II, Kind::Hs, HeisenbergGh, [0.0; 3], (0.2, 4.0)),
        (VI0, Kind::Hs, Vii0Vacuum, [1.0, -0.5, 0.0], (0.0, 2.0)),
        (VII0, Kind::Hs, Vi0Vacuum, [1.0, 0.3, 0.0], (0.35, 1.75)),
    ]
}
