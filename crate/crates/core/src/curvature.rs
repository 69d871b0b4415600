//! Cartan curvature of the diagonal evolution metrics.
//!
//! Everything is computed in the orthonormal coframe `θ`, where the metric
//! is the constant `η` and the structure functions depend on `t` only. The
//! connection follows from the first structure equation by the usual cyclic
//! combination, its `t`-derivative from the jets of `f_i`, and curvature
//! from `Ω = dω + ω∧ω`.

use serde::Serialize;

use crate::evolution::residual_weights;
use crate::exterior::{hodge_matrix, KForm, TWO_FORM_BASIS};
use crate::geometry::{
    d_fundamental, dtheta, frame_structure_jets, nijenhuis, structure_triple, FrameState,
    GeometryError,
};
use crate::jet::Jet;

type Rank3 = [[[f64; 4]; 4]; 4];
pub type Rank4 = [[[[f64; 4]; 4]; 4]; 4];

/// `ωᵃ_b = Σ_c coeffs[a][b][c] θᶜ` together with `d/dt` of the coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct ConnectionForms {
    pub coeffs: Rank3,
    pub rates: Rank3,
}

impl ConnectionForms {
    pub fn forms(&self) -> [[KForm; 4]; 4] {
        std::array::from_fn(|a| std::array::from_fn(|b| KForm::one_form(self.coeffs[a][b])))
    }
}

/// Levi-Civita connection of the coframe: with `c_abc = η_a cᵃ_bc`,
/// `ω_abc = ½ (c_cab − c_abc − c_bca)` and `ωᵃ_bc = η_a ω_abc`.
pub fn connection(state: &FrameState) -> Result<ConnectionForms, GeometryError> {
    if let Some(i) = state.f.iter().position(|v| *v == 0.0) {
        return Err(GeometryError::Singular(["f1", "f2", "f3"][i]));
    }
    if state.gauge == 0.0 {
        return Err(GeometryError::Singular("f"));
    }
    let eta = state.signature().eta;
    let c = frame_structure_jets(state);
    let low = |a: usize, b: usize, d: usize| -> Jet { c[a][b][d] * eta[a] };
    let omega: [[[Jet; 4]; 4]; 4] = std::array::from_fn(|a| {
        std::array::from_fn(|b| {
            std::array::from_fn(|d| (low(d, a, b) - low(a, b, d) - low(b, d, a)) * (0.5 * eta[a]))
        })
    });
    Ok(ConnectionForms {
        coeffs: omega.map(|m| m.map(|r| r.map(|j| j.v))),
        rates: omega.map(|m| m.map(|r| r.map(|j| j.d1))),
    })
}

/// `Ωᵃ_b = dωᵃ_b + ωᵃ_c∧ωᶜ_b`, where `dωᵃ_b = Σ_c (ω̇ᵃ_bc / f) θ⁴∧θᶜ + ωᵃ_bc dθᶜ`.
pub fn curvature_forms(conn: &ConnectionForms, state: &FrameState) -> [[KForm; 4]; 4] {
    let dth = dtheta(state);
    let th4 = KForm::basis(&[3]).expect("valid slot");
    let w = conn.forms();
    std::array::from_fn(|a| {
        std::array::from_fn(|b| {
            let rate = KForm::one_form(conn.rates[a][b].map(|r| r / state.gauge));
            let mut out = th4.wedge(&rate).expect("degree 2");
            for (c, d) in dth.iter().enumerate() {
                let k = conn.coeffs[a][b][c];
                if k != 0.0 {
                    out += &(d * k);
                }
            }
            for c in 0..4 {
                out += &w[a][c].wedge(&w[c][b]).expect("degree 2");
            }
            out
        })
    })
}

/// `Rᵃ_bcd`, the coefficient of `θᶜ∧θᵈ` in `Ωᵃ_b`, antisymmetric in `(c,d)`.
pub fn riemann(state: &FrameState) -> Result<Rank4, GeometryError> {
    let conn = connection(state)?;
    let omega = curvature_forms(&conn, state);
    let mut r = [[[[0.0; 4]; 4]; 4]; 4];
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in (c + 1)..4 {
                    let v = omega[a][b].coeff(&[c, d]);
                    r[a][b][c][d] = v;
                    r[a][b][d][c] = -v;
                }
            }
        }
    }
    Ok(r)
}

/// `R_abcd = η_a Rᵃ_bcd`.
pub fn lower(state: &FrameState, r: &Rank4) -> Rank4 {
    let eta = state.signature().eta;
    std::array::from_fn(|a| r[a].map(|m| m.map(|row| row.map(|v| v * eta[a]))))
}

/// Ricci `R_bd = Σ_a Rᵃ_bad` from a Riemann tensor.
pub fn ricci_of(r: &Rank4) -> [[f64; 4]; 4] {
    std::array::from_fn(|b| std::array::from_fn(|d| (0..4).map(|a| r[a][b][a][d]).sum()))
}

pub fn ricci(state: &FrameState) -> Result<[[f64; 4]; 4], GeometryError> {
    Ok(ricci_of(&riemann(state)?))
}

pub fn scalar_curvature(state: &FrameState, ric: &[[f64; 4]; 4]) -> f64 {
    let eta = state.signature().eta;
    (0..4).map(|a| eta[a] * ric[a][a]).sum()
}

/// Weyl tensor `C_abcd` (all indices down).
pub fn weyl(state: &FrameState, r: &Rank4) -> Rank4 {
    let eta = state.signature().eta;
    let rl = lower(state, r);
    let ric = ricci_of(r);
    let s = scalar_curvature(state, &ric);
    let g = |a: usize, b: usize| if a == b { eta[a] } else { 0.0 };
    std::array::from_fn(|a| {
        std::array::from_fn(|b| {
            std::array::from_fn(|c| {
                std::array::from_fn(|d| {
                    rl[a][b][c][d]
                        - 0.5
                            * (g(a, c) * ric[b][d] - g(a, d) * ric[b][c] - g(b, c) * ric[a][d]
                                + g(b, d) * ric[a][c])
                        + s / 6.0 * (g(a, c) * g(b, d) - g(a, d) * g(b, c))
                })
            })
        })
    })
}

/// A 4-tensor antisymmetric in both pairs as an operator on 2-forms in the
/// basis `(12,13,14,23,24,34)`: `M[(ab),(cd)] = T_abcd η_c η_d`.
pub fn two_form_operator(state: &FrameState, t: &Rank4) -> [[f64; 6]; 6] {
    let eta = state.signature().eta;
    std::array::from_fn(|i| {
        let (a, b) = TWO_FORM_BASIS[i];
        std::array::from_fn(|j| {
            let (c, d) = TWO_FORM_BASIS[j];
            t[a][b][c][d] * eta[c] * eta[d]
        })
    })
}

fn mat_mul(a: &[[f64; 6]; 6], b: &[[f64; 6]; 6]) -> [[f64; 6]; 6] {
    std::array::from_fn(|i| std::array::from_fn(|j| (0..6).map(|k| a[i][k] * b[k][j]).sum()))
}

fn frobenius(m: &[[f64; 6]; 6]) -> f64 {
    m.iter().flatten().map(|v| v * v).sum::<f64>().sqrt()
}

/// Frobenius norms of the self-dual and anti-self-dual diagonal blocks of
/// the Weyl operator, `P± W P±` with `P± = (1 ± ⋆)/2`.
pub fn weyl_split(state: &FrameState) -> Result<(f64, f64), GeometryError> {
    let r = riemann(state)?;
    Ok(weyl_split_of(state, &r))
}

fn weyl_split_of(state: &FrameState, r: &Rank4) -> (f64, f64) {
    let w = two_form_operator(state, &weyl(state, r));
    let h = hodge_matrix(&state.signature());
    let proj = |sign: f64| -> [[f64; 6]; 6] {
        std::array::from_fn(|i| {
            std::array::from_fn(|j| 0.5 * (if i == j { 1.0 } else { 0.0 } + sign * h[i][j]))
        })
    };
    let (p, m) = (proj(1.0), proj(-1.0));
    (
        frobenius(&mat_mul(&p, &mat_mul(&w, &p))),
        frobenius(&mat_mul(&m, &mat_mul(&w, &m))),
    )
}

/// Thresholds for the per-sample checks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    pub residual: f64,
    #[serde(rename = "dF")]
    pub d_f: f64,
    pub ricci: f64,
    pub weyl_sd: f64,
    pub nijenhuis: f64,
    pub identities: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            residual: 1e-10,
            d_f: 1e-12,
            ricci: 1e-8,
            weyl_sd: 1e-8,
            nijenhuis: 1e-10,
            identities: 1e-12,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PassFlags {
    pub residual: bool,
    #[serde(rename = "dF")]
    pub d_f: bool,
    pub ricci: bool,
    pub weyl_sd: bool,
    pub nijenhuis: bool,
    pub identities: bool,
    pub signature: bool,
    pub all: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurvatureReport {
    pub t: f64,
    pub ricci_max_abs: f64,
    pub riemann_norm: f64,
    pub weyl_sd_norm: f64,
    pub weyl_asd_norm: f64,
    #[serde(rename = "dF_max_abs")]
    pub d_f_max_abs: f64,
    pub residual_max_abs: f64,
    pub nijenhuis_max_abs: f64,
    pub identity_defect: f64,
    /// `max |R_abcd − R_cdab|`.
    pub pair_symmetry_defect: f64,
    pub signature: (usize, usize),
    pub pass: PassFlags,
}

fn max_abs<'a>(it: impl IntoIterator<Item = &'a f64>) -> f64 {
    it.into_iter().fold(0.0, |m, v| m.max(v.abs()))
}

impl CurvatureReport {
    /// Run every pointwise check on `state`, taking the evolution residual
    /// against the system with the given weights.
    pub fn assess(
        state: &FrameState,
        weights: [f64; 3],
        tol: &Tolerances,
    ) -> Result<Self, GeometryError> {
        let r = riemann(state)?;
        let ric = ricci_of(&r);
        let rl = lower(state, &r);
        let (weyl_sd_norm, weyl_asd_norm) = weyl_split_of(state, &r);
        let riemann_norm = r.iter().flatten().flatten().flatten().map(|v| v * v).sum::<f64>().sqrt();
        let mut pair = 0.0f64;
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    for d in 0..4 {
                        pair = pair.max((rl[a][b][c][d] - rl[c][d][a][b]).abs());
                    }
                }
            }
        }
        let d_f_max_abs = d_fundamental(state)
            .iter()
            .map(KForm::max_abs)
            .fold(0.0, f64::max);
        let residual_max_abs = max_abs(&residual_weights(weights, state));
        let triple = structure_triple(state);
        let identity_defect = triple.identity_defect(state.signature().eta);
        let nijenhuis_max_abs = triple
            .mats
            .iter()
            .map(|m| max_abs(nijenhuis(state, m).iter().flatten().flatten()))
            .fold(0.0, f64::max);
        let signature = crate::geometry::signature_counts(&crate::geometry::frame_metric(state));
        let expected = match state.kind {
            crate::evolution::Kind::Hk => (4, 0),
            crate::evolution::Kind::Hs => (2, 2),
        };
        let ricci_max_abs = max_abs(ric.iter().flatten());
        let mut pass = PassFlags {
            residual: residual_max_abs < tol.residual,
            d_f: d_f_max_abs < tol.d_f,
            ricci: ricci_max_abs < tol.ricci,
            weyl_sd: weyl_sd_norm < tol.weyl_sd,
            nijenhuis: nijenhuis_max_abs < tol.nijenhuis,
            identities: identity_defect <= tol.identities,
            signature: signature == expected,
            all: false,
        };
        pass.all = pass.residual
            && pass.d_f
            && pass.ricci
            && pass.weyl_sd
            && pass.nijenhuis
            && pass.identities
            && pass.signature;
        Ok(CurvatureReport {
            t: state.t,
            ricci_max_abs,
            riemann_norm,
            weyl_sd_norm,
            weyl_asd_norm,
            d_f_max_abs,
            residual_max_abs,
            nijenhuis_max_abs,
            identity_defect,
            pair_symmetry_defect: pair,
            signature,
            pass,
        })
    }
}
