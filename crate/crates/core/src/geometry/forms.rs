use super::FrameState;
use crate::evolution::Kind;
use crate::exterior::KForm;
use crate::jet::Jet;

/// Structure functions `cᵃ_bc` of the orthonormal coframe,
/// `dθᵃ = −½ cᵃ_bc θᵇ∧θᶜ`, as jets in `t`.
///
/// Spatial entries are `f_i Cⁱ_jk / (f_j f_k)`; the time entries come from
/// `d(f_i eⁱ) ∋ f_i' dt∧eⁱ` and read `cⁱ_4i = −f_i' / (f f_i)`.
pub fn frame_structure_jets(state: &FrameState) -> [[[Jet; 4]; 4]; 4] {
    let big_c = state.algebra.structure_constants();
    let f = state.f_jets();
    let g = state.gauge_jet();
    let mut c = [[[Jet::constant(0.0); 4]; 4]; 4];
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                if big_c[i][j][k] != 0.0 {
                    c[i][j][k] = f[i] * big_c[i][j][k] / (f[j] * f[k]);
                }
            }
        }
        let dfi = Jet::new(f[i].d1, f[i].d2, 0.0);
        let rate = dfi / (g * f[i]);
        c[i][3][i] = -rate;
        c[i][i][3] = rate;
    }
    c
}

pub fn frame_structure(state: &FrameState) -> [[[f64; 4]; 4]; 4] {
    frame_structure_jets(state).map(|m| m.map(|r| r.map(|j| j.v)))
}

/// `dθᵃ` on the θ-basis.
pub fn dtheta(state: &FrameState) -> [KForm; 4] {
    let c = frame_structure(state);
    std::array::from_fn(|a| {
        let mut out = KForm::zero(2);
        for b in 0..4 {
            for d in (b + 1)..4 {
                out.set(&[b, d], -c[a][b][d]).expect("valid slots");
            }
        }
        out
    })
}

/// The three fundamental forms on the θ-basis: `F₁ = θ¹²+θ³⁴`,
/// `F₂ = θ¹³−θ²⁴`, `F₃ = θ²³+θ¹⁴`, and for HS `Ω₁ = −θ¹²+θ³⁴` in place of
/// `F₁`.
pub fn fundamental_forms(state: &FrameState) -> [KForm; 3] {
    fundamental_forms_for(state.kind)
}

pub(crate) fn fundamental_forms_for(kind: Kind) -> [KForm; 3] {
    let m = |idx: &[usize], c: f64| KForm::monomial(idx, c).expect("valid slots");
    let s12 = match kind {
        Kind::Hk => 1.0,
        Kind::Hs => -1.0,
    };
    [
        m(&[0, 1], s12) + m(&[2, 3], 1.0),
        m(&[0, 2], 1.0) - m(&[1, 3], 1.0),
        m(&[1, 2], 1.0) + m(&[0, 3], 1.0),
    ]
}

/// The fundamental forms on the invariant basis `(e¹, e², e³, dt)`, where
/// each coefficient carries the products `f_i f_j` or `f_i f`.
pub fn fundamental_forms_e(state: &FrameState) -> [KForm; 3] {
    fundamental_forms(state).map(|form| form.rescale_slots(state.scales()))
}

/// Exterior derivatives of the fundamental forms on the invariant basis,
/// assembled as `d(A(t) e^I) = A'(t) dt∧e^I + A(t) d(e^I)`: the spatial
/// part `f_i f_j d(eⁱʲ)` plus the `t`-part carrying the evolution.
pub fn d_fundamental(state: &FrameState) -> [KForm; 3] {
    let s = state.scales();
    let ds = [state.df[0], state.df[1], state.df[2], state.dgauge];
    let dt = KForm::basis(&[3]).expect("valid slot");
    fundamental_forms(state).map(|form| {
        let value = form.rescale_slots(s);
        let mut rate = KForm::zero(2);
        for (idx, c) in form.components() {
            let (a, b) = (idx[0], idx[1]);
            rate.set(&idx, c * (ds[a] * s[b] + s[a] * ds[b])).expect("valid slots");
        }
        let mut out = dt.wedge(&rate).expect("degree 3");
        out += &state.algebra.d_form(&value);
        out
    })
}

/// Same derivatives computed on the θ-basis from the frame structure
/// functions: `dF = Σ F_ab (dθᵃ∧θᵇ − θᵃ∧dθᵇ)`.
pub fn d_fundamental_frame(state: &FrameState) -> [KForm; 3] {
    let dth = dtheta(state);
    let theta: [KForm; 4] = std::array::from_fn(|a| KForm::basis(&[a]).expect("valid slot"));
    fundamental_forms(state).map(|form| {
        let mut out = KForm::zero(3);
        for (idx, c) in form.components() {
            let (a, b) = (idx[0], idx[1]);
            let term = dth[a].wedge(&theta[b]).expect("degree 3")
                - theta[a].wedge(&dth[b]).expect("degree 3");
            out += &(term * c);
        }
        out
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bianchi::{algebra_for, BianchiLabel};
    use crate::evolution::{named_solution, FamilyKind};
    use crate::geometry::FrameState;

    fn state(f: [f64; 3], g: f64, kind: Kind, label: BianchiLabel) -> FrameState {
        FrameState::from_jets(
            1.0,
            f.map(Jet::constant),
            Jet::constant(g),
            kind,
            algebra_for(label).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn invariant_basis_examples() {
        let [f1, _, _] = fundamental_forms_e(&state([1.0; 3], 1.0, Kind::Hk, BianchiLabel::IX));
        assert_eq!(f1.coeff(&[0, 1]), 1.0);
        assert_eq!(f1.coeff(&[2, 3]), 1.0);
        let [o1, _, _] = fundamental_forms_e(&state([1.0; 3], 1.0, Kind::Hs, BianchiLabel::IX));
        assert_eq!(o1.coeff(&[0, 1]), -1.0);
        assert_eq!(o1.coeff(&[2, 3]), 1.0);
        let [_, _, f3] =
            fundamental_forms_e(&state([2.0, 3.0, 5.0], 7.0, Kind::Hk, BianchiLabel::IX));
        assert_eq!(f3.coeff(&[1, 2]), 15.0);
        assert_eq!(f3.coeff(&[0, 3]), 14.0);
        assert_eq!(f3.components().len(), 2);
    }

    #[test]
    fn closed_on_eguchi_hanson_and_both_assemblies_agree() {
        let eh = named_solution(FamilyKind::EguchiHanson, [2.0, 0.0, 0.0]).unwrap();
        let alg = algebra_for(BianchiLabel::IX).unwrap();
        for &t in &[1.3, 1.9, 4.0] {
            let st = eh.state(t, Kind::Hk, alg).unwrap();
            let e = d_fundamental(&st);
            let th = d_fundamental_frame(&st);
            for s in 0..3 {
                assert!(e[s].max_abs() < 1e-12, "{:?}", e[s]);
                let back = th[s].rescale_slots(st.scales());
                assert!((&back - &e[s]).max_abs() < 1e-12);
            }
            let pert = d_fundamental(&st.perturbed(1e-2));
            assert!(pert.iter().map(KForm::max_abs).fold(0.0, f64::max) > 1e-3);
        }
    }

    #[test]
    fn class_b_spatial_part_survives() {
        let mut st = state([1.0; 3], 1.0, Kind::Hk, BianchiLabel::IX);
        st.algebra = algebra_for(BianchiLabel::V).unwrap();
        let d = d_fundamental(&st);
        // F₃ = e²³ + e¹∧dt, and d(e²³) = −2a e¹²³
        assert!((d[2].coeff(&[0, 1, 2]) + 2.0).abs() < 1e-15);
    }
}
