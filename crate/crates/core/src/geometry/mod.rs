//! Frame states along the evolution and everything built pointwise from them.
//!
//! A [`FrameState`] fixes `t`, the coefficients `f_i`, the gauge `f` and
//! their derivatives. It determines the orthonormal coframe
//! `θ = (f₁e¹, f₂e², f₃e³, f dt)` in which the metric is `η`, the
//! fundamental forms have constant coefficients and all structure functions
//! depend on `t` alone.

mod chart;
mod companion;
mod forms;
mod structures;

use nalgebra::{Matrix4, SymmetricEigen};
use serde::Serialize;
use thiserror::Error;

use crate::bianchi::{BianchiAlgebra, BianchiLabel};
use crate::evolution::{Kind, OdeWeights};
use crate::exterior::{ExteriorError, SignatureSpec};
use crate::jet::Jet;

pub use chart::{chart, metric_in_coordinates, Chart};
pub use companion::{conformal_companion, CompanionSample, ConformalCompanion, Reparam};
pub use forms::{
    d_fundamental, d_fundamental_frame, dtheta, frame_structure, frame_structure_jets,
    fundamental_forms, fundamental_forms_e,
};
pub use structures::{
    endomorphisms, frame_bracket, nijenhuis, structure_triple, Endo, StructureTriple,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("singular frame: {0} vanishes")]
    Singular(&'static str),
    #[error("non-finite frame data at t = {0}")]
    NonFinite(f64),
    #[error("{which}: identity violated by {defect:e}")]
    IdentityViolation { which: String, defect: f64 },
    #[error("no coordinate chart for Bianchi type {0}")]
    UnsupportedChart(BianchiLabel),
    #[error("chart for type {chart} does not match algebra of type {algebra}")]
    ChartMismatch {
        chart: BianchiLabel,
        algebra: BianchiLabel,
    },
    #[error("reparametrization is not strictly monotone near t = {0}")]
    NonMonotone(f64),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Exterior(#[from] ExteriorError),
}

/// Pointwise data of a diagonal evolution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FrameState {
    pub t: f64,
    pub f: [f64; 3],
    pub gauge: f64,
    pub df: [f64; 3],
    pub d2f: [f64; 3],
    pub dgauge: f64,
    pub kind: Kind,
    pub algebra: BianchiAlgebra,
}

impl FrameState {
    fn validate(self) -> Result<Self, GeometryError> {
        let all = self
            .f
            .iter()
            .chain(&self.df)
            .chain(&self.d2f)
            .chain([&self.gauge, &self.dgauge, &self.t]);
        if all.clone().any(|v| !v.is_finite()) {
            return Err(GeometryError::NonFinite(self.t));
        }
        const NAMES: [&str; 3] = ["f1", "f2", "f3"];
        if let Some(i) = self.f.iter().position(|v| *v == 0.0) {
            return Err(GeometryError::Singular(NAMES[i]));
        }
        if self.gauge == 0.0 {
            return Err(GeometryError::Singular("f"));
        }
        Ok(self)
    }

    /// State from jets of `f_i` and `f` (value, first and second derivative).
    pub fn from_jets(
        t: f64,
        f: [Jet; 3],
        gauge: Jet,
        kind: Kind,
        algebra: BianchiAlgebra,
    ) -> Result<Self, GeometryError> {
        FrameState {
            t,
            f: f.map(|j| j.v),
            gauge: gauge.v,
            df: f.map(|j| j.d1),
            d2f: f.map(|j| j.d2),
            dgauge: gauge.d1,
            kind,
            algebra,
        }
        .validate()
    }

    /// State on a solution of `system`, with `f_i'` and `f_i''` taken from
    /// the equations themselves:
    /// `f_i' = f (w_j f_j² + w_k f_k² − w_i f_i²) / (2 f_j f_k)`.
    #[allow(clippy::too_many_arguments)]
    pub fn from_system(
        system: &impl OdeWeights,
        t: f64,
        f: [f64; 3],
        gauge: f64,
        dgauge: f64,
        kind: Kind,
        algebra: BianchiAlgebra,
    ) -> Result<Self, GeometryError> {
        if let Some(i) = f.iter().position(|v| *v == 0.0) {
            return Err(GeometryError::Singular(["f1", "f2", "f3"][i]));
        }
        let w = system.weights();
        let rate = |fj: [Jet; 3], g: Jet| -> [Jet; 3] {
            std::array::from_fn(|i| {
                let (j, k) = ((i + 1) % 3, (i + 2) % 3);
                g * (w[j] * fj[j] * fj[j] + w[k] * fj[k] * fj[k] - w[i] * fj[i] * fj[i])
                    / (2.0 * fj[j] * fj[k])
            })
        };
        let df = rate(f.map(Jet::constant), Jet::constant(gauge)).map(|j| j.v);
        let d2f = rate(
            std::array::from_fn(|i| Jet::new(f[i], df[i], 0.0)),
            Jet::new(gauge, dgauge, 0.0),
        )
        .map(|j| j.d1);
        FrameState {
            t,
            f,
            gauge,
            df,
            d2f,
            dgauge,
            kind,
            algebra,
        }
        .validate()
    }

    /// `f_i` as jets (value, first, second derivative).
    pub fn f_jets(&self) -> [Jet; 3] {
        std::array::from_fn(|i| Jet::new(self.f[i], self.df[i], self.d2f[i]))
    }

    /// The gauge as a jet; its second derivative is never needed.
    pub fn gauge_jet(&self) -> Jet {
        Jet::new(self.gauge, self.dgauge, 0.0)
    }

    pub fn signature(&self) -> SignatureSpec {
        signature_of(self.kind)
    }

    /// Scale `f₁` (with its derivatives) by `1 + eps`; a smooth non-solution
    /// for any `eps ≠ 0`.
    pub fn perturbed(&self, eps: f64) -> Self {
        let mut s = *self;
        s.f[0] *= 1.0 + eps;
        s.df[0] *= 1.0 + eps;
        s.d2f[0] *= 1.0 + eps;
        s
    }

    /// Coframe scale factors `(f₁, f₂, f₃, f)`.
    pub fn scales(&self) -> [f64; 4] {
        [self.f[0], self.f[1], self.f[2], self.gauge]
    }
}

pub fn signature_of(kind: Kind) -> SignatureSpec {
    match kind {
        Kind::Hk => SignatureSpec::riemannian(),
        Kind::Hs => SignatureSpec::neutral(),
    }
}

/// `diag(f₁², f₂², ±f₃², ±f²)` on `(e¹, e², e³, dt)`, minus signs for HS.
pub fn frame_metric(state: &FrameState) -> [[f64; 4]; 4] {
    let eta = state.signature().eta;
    let s = state.scales();
    let mut g = [[0.0; 4]; 4];
    for i in 0..4 {
        g[i][i] = eta[i] * s[i] * s[i];
    }
    g
}

/// Numbers of positive and negative eigenvalues of a symmetric matrix.
pub fn signature_counts(m: &[[f64; 4]; 4]) -> (usize, usize) {
    let mat = Matrix4::from_fn(|i, j| m[i][j]);
    let eig = SymmetricEigen::new(mat).eigenvalues;
    let pos = eig.iter().filter(|v| **v > 0.0).count();
    let neg = eig.iter().filter(|v| **v < 0.0).count();
    (pos, neg)
}
