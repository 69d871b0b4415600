use serde::Serialize;

use super::{FrameState, GeometryError};
use crate::bianchi::BianchiLabel;

/// Left-invariant coframe `eⁱ = E[i][μ] dc^μ` written in coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Chart {
    pub label: BianchiLabel,
}

pub fn chart(label: BianchiLabel) -> Result<Chart, GeometryError> {
    use BianchiLabel::*;
    match label {
        I | II | VI0 | VII0 | VIII | IX => Ok(Chart { label }),
        other => Err(GeometryError::UnsupportedChart(other)),
    }
}

impl Chart {
    pub fn coordinate_names(&self) -> [&'static str; 3] {
        use BianchiLabel::*;
        match self.label {
            IX | VIII => ["theta", "phi", "psi"],
            VI0 | VII0 => ["phi", "x", "y"],
            _ => ["x", "y", "z"],
        }
    }

    /// Rows are `e¹, e², e³`; columns the coordinate differentials.
    pub fn matrix(&self, c: [f64; 3]) -> [[f64; 3]; 3] {
        use BianchiLabel::*;
        match self.label {
            IX => {
                // Euler angles (θ, φ, ψ)
                let (st, ct) = c[0].sin_cos();
                let (sp, cp) = c[2].sin_cos();
                [[sp, -cp * st, 0.0], [cp, sp * st, 0.0], [0.0, ct, 1.0]]
            }
            VIII => {
                let (st, ct) = c[0].sin_cos();
                let (sh, ch) = (c[2].sinh(), c[2].cosh());
                [[0.0, -ct, 1.0], [sh, ch * st, 0.0], [ch, sh * st, 0.0]]
            }
            II => [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.5 * c[1], -0.5 * c[0], 1.0]],
            VII0 => {
                let (s, co) = c[0].sin_cos();
                [[1.0, 0.0, 0.0], [0.0, s, -co], [0.0, co, s]]
            }
            VI0 => {
                let (sh, ch) = (c[0].sinh(), c[0].cosh());
                [[1.0, 0.0, 0.0], [0.0, sh, ch], [0.0, ch, sh]]
            }
            _ => [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
        }
    }
}

/// The metric in coordinates `(t, c¹, c², c³)`.
pub fn metric_in_coordinates(
    state: &FrameState,
    chart: &Chart,
    coords: [f64; 3],
) -> Result<[[f64; 4]; 4], GeometryError> {
    if chart.label != state.algebra.label {
        return Err(GeometryError::ChartMismatch {
            chart: chart.label,
            algebra: state.algebra.label,
        });
    }
    let e = chart.matrix(coords);
    let eta = state.signature().eta;
    let s = state.scales();
    let mut g = [[0.0; 4]; 4];
    g[0][0] = eta[3] * s[3] * s[3];
    for mu in 0..3 {
        for nu in mu..3 {
            let v = (0..3).map(|i| eta[i] * s[i] * s[i] * e[i][mu] * e[i][nu]).sum();
            g[mu + 1][nu + 1] = v;
            g[nu + 1][mu + 1] = v;
        }
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bianchi::algebra_for;
    use crate::evolution::{named_solution, FamilyKind, Kind};
    use crate::geometry::signature_counts;
    use crate::jet::Jet;
    use proptest::prelude::*;

    #[test]
    fn euler_angle_example() {
        let m = chart(BianchiLabel::IX).unwrap().matrix([std::f64::consts::FRAC_PI_2, 0.0, 0.0]);
        let want = [[0.0, -1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 1.0]];
        for i in 0..3 {
            for j in 0..3 {
                assert!((m[i][j] - want[i][j]).abs() < 1e-15);
            }
        }
        let h = chart(BianchiLabel::II).unwrap().matrix([2.0, 4.0, 9.0]);
        assert_eq!(h[2], [2.0, -1.0, 1.0]);
        assert!(chart(BianchiLabel::V).is_err());
    }

    #[test]
    fn heisenberg_metric_at_origin() {
        let alg = algebra_for(BianchiLabel::II).unwrap();
        let gh = named_solution(FamilyKind::HeisenbergGh, [0.0; 3]).unwrap();
        let ch = chart(BianchiLabel::II).unwrap();
        let g = metric_in_coordinates(&gh.state(4.0, Kind::Hk, alg).unwrap(), &ch, [0.0; 3]).unwrap();
        let want = [4.0, 4.0, 4.0, 0.25];
        for i in 0..4 {
            for j in 0..4 {
                let w = if i == j { want[i] } else { 0.0 };
                assert!((g[i][j] - w).abs() < 1e-14);
            }
        }
        let hs = gh.clone().with_flip(true);
        let g = metric_in_coordinates(&hs.state(1.0, Kind::Hs, alg).unwrap(), &ch, [0.0; 3]).unwrap();
        assert_eq!([g[0][0], g[1][1], g[2][2], g[3][3]], [-1.0, 1.0, 1.0, -1.0]);
        let ix = algebra_for(BianchiLabel::IX).unwrap();
        let wrong = gh.state(1.0, Kind::Hk, ix).unwrap();
        assert!(matches!(
            metric_in_coordinates(&wrong, &ch, [0.0; 3]),
            Err(GeometryError::ChartMismatch { .. })
        ));
    }

    fn det3(m: [[f64; 4]; 4]) -> f64 {
        let mat = nalgebra::Matrix4::from_fn(|i, j| m[i][j]);
        mat.determinant()
    }

    #[test]
    fn flat_ix_determinant() {
        let alg = algebra_for(BianchiLabel::IX).unwrap();
        let t: f64 = 1.4;
        let st = FrameState::from_jets(
            t,
            [Jet::new(t / 2.0, 0.5, 0.0); 3],
            Jet::constant(1.0),
            Kind::Hk,
            alg,
        )
        .unwrap();
        let th = 0.7;
        let g = metric_in_coordinates(&st, &chart(BianchiLabel::IX).unwrap(), [th, 0.3, 1.1]).unwrap();
        let want = (t / 2.0).powi(6) * th.sin().powi(2);
        assert!((det3(g) - want).abs() < 1e-13);
    }

    /// `deⁱ` from finite differences of the chart against `−½ Cⁱ_jk eʲ∧eᵏ`.
    fn structure_defect(label: BianchiLabel, c: [f64; 3]) -> f64 {
        let ch = chart(label).unwrap();
        let cc = algebra_for(label).unwrap().structure_constants();
        let e = ch.matrix(c);
        let h = 1e-6;
        let de: Vec<[[f64; 3]; 3]> = (0..3)
            .map(|k| {
                let mut p = c;
                let mut m = c;
                p[k] += h;
                m[k] -= h;
                let (ep, em) = (ch.matrix(p), ch.matrix(m));
                std::array::from_fn(|i| std::array::from_fn(|j| (ep[i][j] - em[i][j]) / (2.0 * h)))
            })
            .collect();
        let mut worst = 0.0f64;
        for i in 0..3 {
            for k in 0..3 {
                for j in 0..3 {
                    let lhs = de[k][i][j] - de[j][i][k];
                    let mut rhs = 0.0;
                    for m in 0..3 {
                        for n in 0..3 {
                            rhs -= cc[i][m][n] * e[m][k] * e[n][j];
                        }
                    }
                    worst = worst.max((lhs - rhs).abs());
                }
            }
        }
        worst
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(20))]
        #[test]
        fn charts_reproduce_structure_equations(
            a in 0.2f64..2.9, b in -3.0f64..3.0, c in -1.5f64..1.5
        ) {
            use BianchiLabel::*;
            for label in [I, II, VI0, VII0, VIII, IX] {
                prop_assert!(structure_defect(label, [a, b, c]) < 1e-8, "{label}");
            }
        }

        #[test]
        fn coordinate_metric_keeps_signature(t in 1.1f64..3.0, a in 0.2f64..2.9, b in -3.0f64..3.0) {
            let alg = algebra_for(BianchiLabel::IX).unwrap();
            let eh = named_solution(FamilyKind::EguchiHanson, [1.0, 0.0, 0.0]).unwrap();
            let g = metric_in_coordinates(
                &eh.state(t, Kind::Hk, alg).unwrap(),
                &chart(BianchiLabel::IX).unwrap(),
                [a, b, 0.3],
            ).unwrap();
            for i in 0..4 { for j in 0..4 { prop_assert_eq!(g[i][j], g[j][i]); } }
            prop_assert_eq!(signature_counts(&g), (4, 0));
        }
    }
}
