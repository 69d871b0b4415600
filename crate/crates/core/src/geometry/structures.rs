use serde::Serialize;

use super::forms::frame_structure;
use super::{FrameState, GeometryError};
use crate::evolution::Kind;
use crate::exterior::KForm;

/// Endomorphism of the tangent space on the frame `E_a` dual to `θᵃ`;
/// column `a` holds the components of the image of `E_a`.
pub type Endo = [[f64; 4]; 4];

/// `(J₁, J₂, J₃)` for HK, `(J, P₁, P₂)` for HS.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StructureTriple {
    pub kind: Kind,
    pub mats: [Endo; 3],
}

const IDENTITY_TOL: f64 = 1e-12;

fn mul(a: &Endo, b: &Endo) -> Endo {
    std::array::from_fn(|i| std::array::from_fn(|j| (0..4).map(|k| a[i][k] * b[k][j]).sum()))
}

fn scaled_identity(s: f64) -> Endo {
    std::array::from_fn(|i| std::array::from_fn(|j| if i == j { s } else { 0.0 }))
}

fn dist(a: &Endo, b: &Endo) -> f64 {
    (0..16).map(|m| (a[m / 4][m % 4] - b[m / 4][m % 4]).abs()).fold(0.0, f64::max)
}

fn neg(a: &Endo) -> Endo {
    a.map(|r| r.map(|v| -v))
}

/// `Aᵀ η A` for diagonal `η`.
fn pullback(a: &Endo, eta: [f64; 4]) -> Endo {
    std::array::from_fn(|i| std::array::from_fn(|j| (0..4).map(|k| a[k][i] * eta[k] * a[k][j]).sum()))
}

fn antisym(form: &KForm) -> Endo {
    let mut m = [[0.0; 4]; 4];
    for (idx, c) in form.components() {
        m[idx[0]][idx[1]] = c;
        m[idx[1]][idx[0]] = -c;
    }
    m
}

impl StructureTriple {
    /// Largest deviation from the (para)quaternionic relations and the
    /// (anti-)isometry conditions.
    pub fn identity_defect(&self, eta: [f64; 4]) -> f64 {
        let [a, b, c] = &self.mats;
        let g = scaled_identity(1.0);
        let eta_m: Endo = std::array::from_fn(|i| std::array::from_fn(|j| if i == j { eta[i] } else { 0.0 }));
        let checks: Vec<f64> = match self.kind {
            Kind::Hk => vec![
                dist(&mul(a, a), &neg(&g)),
                dist(&mul(b, b), &neg(&g)),
                dist(&mul(c, c), &neg(&g)),
                dist(&mul(a, b), c),
                dist(&mul(b, a), &neg(c)),
                dist(&pullback(a, eta), &eta_m),
                dist(&pullback(b, eta), &eta_m),
                dist(&pullback(c, eta), &eta_m),
            ],
            Kind::Hs => vec![
                dist(&mul(a, a), &neg(&g)),
                dist(&mul(b, b), &g),
                dist(&mul(c, c), &g),
                dist(&mul(a, b), c),
                dist(&mul(b, a), &neg(c)),
                dist(&pullback(a, eta), &eta_m),
                dist(&pullback(b, eta), &neg(&eta_m)),
                dist(&pullback(c, eta), &neg(&eta_m)),
            ],
        };
        checks.into_iter().fold(0.0, f64::max)
    }
}

/// Raise an index of each fundamental form: `F_s(X,Y) = g(J_s X, Y)` in the
/// Riemannian case and `Ω_s(X,Y) = g(X, J_s Y)` in the neutral one.
pub fn endomorphisms(state: &FrameState) -> Result<StructureTriple, GeometryError> {
    let triple = structure_triple(state);
    let defect = triple.identity_defect(state.signature().eta);
    if defect > IDENTITY_TOL {
        return Err(GeometryError::IdentityViolation {
            which: format!("{} structure triple", state.kind),
            defect,
        });
    }
    Ok(triple)
}

/// The triple without the identity check.
pub fn structure_triple(state: &FrameState) -> StructureTriple {
    let eta = state.signature().eta;
    let forms = super::fundamental_forms(state);
    let mats = forms.map(|form| {
        let f = antisym(&form);
        let mut j = [[0.0; 4]; 4];
        for a in 0..4 {
            for b in 0..4 {
                match state.kind {
                    Kind::Hk => j[b][a] = eta[b] * f[a][b],
                    Kind::Hs => j[a][b] = eta[a] * f[a][b],
                }
            }
        }
        j
    });
    StructureTriple {
        kind: state.kind,
        mats,
    }
}

/// `[E_a, E_b] = Σ_c br[a][b][c] E_c`.
pub fn frame_bracket(state: &FrameState) -> [[[f64; 4]; 4]; 4] {
    let c = frame_structure(state);
    std::array::from_fn(|a| std::array::from_fn(|b| std::array::from_fn(|k| c[k][a][b])))
}

/// Components `N[a][b][c]` of `N(E_a, E_b)` along `E_c`, where
/// `N(X,Y) = [AX,AY] − A[AX,Y] − A[X,AY] + A²[X,Y]`.
pub fn nijenhuis(state: &FrameState, endo: &Endo) -> [[[f64; 4]; 4]; 4] {
    let br = frame_bracket(state);
    let bracket = |x: [f64; 4], y: [f64; 4]| -> [f64; 4] {
        let mut out = [0.0; 4];
        for a in 0..4 {
            for b in 0..4 {
                let w = x[a] * y[b];
                if w != 0.0 {
                    for c in 0..4 {
                        out[c] += w * br[a][b][c];
                    }
                }
            }
        }
        out
    };
    let apply = |v: [f64; 4]| -> [f64; 4] {
        std::array::from_fn(|i| (0..4).map(|k| endo[i][k] * v[k]).sum())
    };
    let unit = |a: usize| -> [f64; 4] { std::array::from_fn(|i| if i == a { 1.0 } else { 0.0 }) };
    std::array::from_fn(|a| {
        std::array::from_fn(|b| {
            let (x, y) = (unit(a), unit(b));
            let (ax, ay) = (apply(x), apply(y));
            let t1 = bracket(ax, ay);
            let t2 = apply(bracket(ax, y));
            let t3 = apply(bracket(x, ay));
            let t4 = apply(apply(bracket(x, y)));
            std::array::from_fn(|c| t1[c] - t2[c] - t3[c] + t4[c])
        })
    })
}
