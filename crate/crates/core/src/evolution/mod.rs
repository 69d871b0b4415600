//! Reduced evolution systems `d/dt(f_j f_k) = σ_i f f_i` and their solutions.
//!
//! Substituting the diagonal evolution `eⁱ(t) = f_i(t) eⁱ` into the closedness
//! conditions of the fundamental 2-forms leaves three first-order ODEs whose
//! only data is a sign pattern `σ`. For the Riemannian (hyper-Kähler) forms
//! `σ = (b₁, b₂, b₃)`; for the neutral (hyper-symplectic) forms
//! `σ = (b₁, b₂, −b₃)`.

mod families;
mod integrate;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bianchi::{algebra_for, BianchiAlgebra, BianchiError, BianchiLabel};
use crate::geometry::FrameState;

pub use families::{
    closed_form, general_with_variable, named_solution, EvalVariable, FamilyKind, FamilyPoint,
    SolutionFamily, StateError,
};
pub use integrate::{integrate, BoundaryHit, Trajectory, TrajectoryPoint};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EvolutionError {
    #[error(transparent)]
    Bianchi(#[from] BianchiError),
    #[error("no closed-form family for sign pattern {0:?}")]
    NoClosedForm([i8; 3]),
    #[error("{family}: empty domain ({reason})")]
    EmptyDomain { family: FamilyKind, reason: String },
    #[error("{family}: seed {seed} lies outside the domain where {factor} > 0")]
    SeedOutside {
        family: FamilyKind,
        seed: f64,
        factor: String,
    },
    #[error("{family}: t = {t} is outside the domain ({factor} must be > 0)")]
    Domain {
        family: FamilyKind,
        t: f64,
        factor: String,
    },
    #[error("division by zero: {0} vanishes")]
    Singular(&'static str),
    #[error("contraction parameter must be >= 0, got {0}")]
    NegativeLambda(f64),
    #[error("invalid integration request: {0}")]
    BadIntegration(String),
}

/// Which triple of fundamental 2-forms is being made closed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Kind {
    /// Riemannian, quaternionic triple `(J₁, J₂, J₃)`.
    #[serde(rename = "HK")]
    Hk,
    /// Neutral signature, paraquaternionic triple `(J, P₁, P₂)`.
    #[serde(rename = "HS")]
    Hs,
}

impl Kind {
    pub fn as_str(&self) -> &'static str {
        match self {
            Kind::Hk => "HK",
            Kind::Hs => "HS",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Kind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "hk" => Ok(Kind::Hk),
            "hs" => Ok(Kind::Hs),
            other => Err(format!("unknown kind `{other}` (expected hk or hs)")),
        }
    }
}

/// Coefficients of the right-hand sides `d/dt(f_j f_k) = w_i f f_i`.
pub trait OdeWeights {
    fn weights(&self) -> [f64; 3];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvolutionSystem {
    pub sigma: [i8; 3],
    pub source: Option<(BianchiLabel, Kind)>,
}

impl EvolutionSystem {
    pub fn from_sigma(sigma: [i8; 3]) -> Self {
        Self {
            sigma,
            source: None,
        }
    }

    pub fn negated(&self) -> Self {
        Self {
            sigma: self.sigma.map(|s| -s),
            source: self.source,
        }
    }

    /// Representative of `{σ, −σ}` whose first nonzero entry is positive,
    /// together with whether a sign flip was needed to reach it.
    pub fn canonical(&self) -> ([i8; 3], bool) {
        match self.sigma.iter().find(|&&s| s != 0) {
            Some(&s) if s < 0 => (self.sigma.map(|s| -s), true),
            _ => (self.sigma, false),
        }
    }

    /// Related by `σ → −σ`, i.e. by flipping the sign of one `f_i` or of `f`.
    pub fn sign_equivalent(&self, other: &EvolutionSystem) -> bool {
        self.sigma == other.sigma || self.sigma == other.sigma.map(|s| -s)
    }
}

impl OdeWeights for EvolutionSystem {
    fn weights(&self) -> [f64; 3] {
        self.sigma.map(f64::from)
    }
}

/// Sign pattern of the reduced evolution equations for a class-A algebra.
pub fn reduce(alg: &BianchiAlgebra, kind: Kind) -> Result<EvolutionSystem, EvolutionError> {
    if !alg.is_class_a() {
        return Err(BianchiError::ClassB(alg.label).into());
    }
    let b = alg.b.map(|v| v as i8);
    let sigma = match kind {
        Kind::Hk => b,
        Kind::Hs => [b[0], b[1], -b[2]],
    };
    Ok(EvolutionSystem {
        sigma,
        source: Some((alg.label, kind)),
    })
}

/// Reduce by label (class-A labels only).
pub fn reduce_label(label: BianchiLabel, kind: Kind) -> Result<EvolutionSystem, EvolutionError> {
    reduce(&algebra_for(label)?, kind)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CorrespondencePair {
    pub hk: BianchiLabel,
    pub hs: BianchiLabel,
    pub sigma: [i8; 3],
    /// The two systems agree only after `σ → −σ`.
    pub sign_flipped: bool,
}

/// Pairs of non-abelian class-A groups whose hyper-Kähler system coincides
/// with the hyper-symplectic system of the partner, computed by comparing
/// reduced sign patterns (exact match preferred, else up to sign).
pub fn correspondence_table() -> Vec<CorrespondencePair> {
    let groups: Vec<BianchiLabel> = BianchiLabel::CLASS_A
        .into_iter()
        .filter(|&l| l != BianchiLabel::I)
        .collect();
    let mut out = Vec::new();
    for &hk in &groups {
        let s_hk = reduce_label(hk, Kind::Hk).expect("class A");
        let exact = groups
            .iter()
            .find(|&&hs| reduce_label(hs, Kind::Hs).expect("class A").sigma == s_hk.sigma);
        let pair = match exact {
            Some(&hs) => Some((hs, false)),
            None => groups
                .iter()
                .find(|&&hs| reduce_label(hs, Kind::Hs).expect("class A").sign_equivalent(&s_hk))
                .map(|&hs| (hs, true)),
        };
        if let Some((hs, sign_flipped)) = pair {
            out.push(CorrespondencePair {
                hk,
                hs,
                sigma: s_hk.sigma,
                sign_flipped,
            });
        }
    }
    out
}

/// `d/dt(f_j f_k) − w_i f f_i` for `i = 1,2,3`.
pub fn residual_weights(weights: [f64; 3], state: &FrameState) -> [f64; 3] {
    let f = state.f;
    let df = state.df;
    std::array::from_fn(|i| {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        df[j] * f[k] + f[j] * df[k] - weights[i] * state.gauge * f[i]
    })
}

pub fn residual(system: &impl OdeWeights, state: &FrameState) -> [f64; 3] {
    residual_weights(system.weights(), state)
}

/// `f_i' − f (f_j² + f_k² − f_i²) / (2 f_j f_k)`; the σ = (1,1,1) system
/// solved for the derivatives.
pub fn bgpp_residual(state: &FrameState) -> Result<[f64; 3], EvolutionError> {
    let f = state.f;
    if f.contains(&0.0) {
        return Err(EvolutionError::Singular("f_i"));
    }
    Ok(std::array::from_fn(|i| {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        state.df[i]
            - state.gauge * (f[j] * f[j] + f[k] * f[k] - f[i] * f[i]) / (2.0 * f[j] * f[k])
    }))
}

/// The rescaled su(2) system `d/dx(f₁f₂) = f₃, d/dx(f₁f₃) = f₂,
/// d/dx(f₂f₃) = λ² f₁` with unit gauge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContractionSystem {
    pub lambda: f64,
}

impl OdeWeights for ContractionSystem {
    fn weights(&self) -> [f64; 3] {
        [self.lambda * self.lambda, 1.0, 1.0]
    }
}

pub fn contraction_system(lambda: f64) -> Result<ContractionSystem, EvolutionError> {
    if !(lambda >= 0.0) {
        return Err(EvolutionError::NegativeLambda(lambda));
    }
    Ok(ContractionSystem { lambda })
}
