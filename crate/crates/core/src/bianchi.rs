//! Three-dimensional real Lie algebras in Bianchi normal form.
//!
//! An algebra is stored by its diagonal data `(a, b₁, b₂, b₃)` with
//! `de¹ = −b₁e²³`, `de² = −a e¹² − b₂e³¹`, `de³ = −b₃e¹² + a e³¹`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exterior::KForm;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BianchiError {
    #[error("unknown Bianchi label `{0}` (expected one of I, II, VI0, VII0, VIII, IX, V, IV, VIIa, III, VIa)")]
    UnknownLabel(String),
    #[error("Bianchi type {0} needs its parameter a")]
    MissingParameter(BianchiLabel),
    #[error("parameter a = {a} is outside the range of Bianchi type {label}")]
    BadParameter { label: BianchiLabel, a: f64 },
    #[error("Bianchi type {0} is of class B; closed fundamental forms with left-invariant evolution require a Bianchi type A group")]
    ClassB(BianchiLabel),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BianchiLabel {
    I,
    II,
    VI0,
    VII0,
    VIII,
    IX,
    V,
    IV,
    VIIa,
    III,
    VIa,
}

impl BianchiLabel {
    pub const ALL: [BianchiLabel; 11] = [
        BianchiLabel::I,
        BianchiLabel::II,
        BianchiLabel::VI0,
        BianchiLabel::VII0,
        BianchiLabel::VIII,
        BianchiLabel::IX,
        BianchiLabel::V,
        BianchiLabel::IV,
        BianchiLabel::VIIa,
        BianchiLabel::III,
        BianchiLabel::VIa,
    ];

    pub const CLASS_A: [BianchiLabel; 6] = [
        BianchiLabel::I,
        BianchiLabel::II,
        BianchiLabel::VI0,
        BianchiLabel::VII0,
        BianchiLabel::VIII,
        BianchiLabel::IX,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            BianchiLabel::I => "I",
            BianchiLabel::II => "II",
            BianchiLabel::VI0 => "VI0",
            BianchiLabel::VII0 => "VII0",
            BianchiLabel::VIII => "VIII",
            BianchiLabel::IX => "IX",
            BianchiLabel::V => "V",
            BianchiLabel::IV => "IV",
            BianchiLabel::VIIa => "VIIa",
            BianchiLabel::III => "III",
            BianchiLabel::VIa => "VIa",
        }
    }

    /// Families carrying a free type-B parameter.
    pub fn is_parametric(&self) -> bool {
        matches!(self, BianchiLabel::VIIa | BianchiLabel::VIa)
    }

    /// Common name of the simply connected group, where there is one.
    pub fn group_name(&self) -> &'static str {
        match self {
            BianchiLabel::I => "abelian R^3",
            BianchiLabel::II => "Heisenberg (Nil)",
            BianchiLabel::VI0 => "Lorentzian motions E(1,1)",
            BianchiLabel::VII0 => "Euclidean motions E(2)",
            BianchiLabel::VIII => "SU(1,1)",
            BianchiLabel::IX => "SU(2)",
            _ => "",
        }
    }
}

impl fmt::Display for BianchiLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BianchiLabel {
    type Err = BianchiError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        BianchiLabel::ALL
            .into_iter()
            .find(|l| l.as_str() == s)
            .ok_or_else(|| BianchiError::UnknownLabel(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BianchiAlgebra {
    pub label: BianchiLabel,
    pub a: f64,
    pub b: [f64; 3],
}

/// Structure constants of a non-parametric label.
pub fn algebra_for(label: BianchiLabel) -> Result<BianchiAlgebra, BianchiError> {
    use BianchiLabel::*;
    let (a, b) = match label {
        I => (0.0, [0.0, 0.0, 0.0]),
        II => (0.0, [0.0, 0.0, 1.0]),
        VI0 => (0.0, [0.0, 1.0, -1.0]),
        VII0 => (0.0, [0.0, 1.0, 1.0]),
        VIII => (0.0, [1.0, 1.0, -1.0]),
        IX => (0.0, [1.0, 1.0, 1.0]),
        V => (1.0, [0.0, 0.0, 0.0]),
        IV => (1.0, [0.0, 0.0, 1.0]),
        III => (1.0, [0.0, 1.0, -1.0]),
        VIIa | VIa => return Err(BianchiError::MissingParameter(label)),
    };
    Ok(BianchiAlgebra { label, a, b })
}

/// Members of the one-parameter families VIIₐ (a > 0) and VIₐ (0 < a ≠ 1).
pub fn parametric_algebra(label: BianchiLabel, a: f64) -> Result<BianchiAlgebra, BianchiError> {
    let b = match label {
        BianchiLabel::VIIa if a > 0.0 => [0.0, 1.0, 1.0],
        BianchiLabel::VIa if a > 0.0 && a != 1.0 => [0.0, 1.0, -1.0],
        BianchiLabel::VIIa | BianchiLabel::VIa => {
            return Err(BianchiError::BadParameter { label, a })
        }
        _ => return algebra_for(label),
    };
    Ok(BianchiAlgebra { label, a, b })
}

/// Parse a label string and look up its row.
pub fn algebra_for_str(label: &str) -> Result<BianchiAlgebra, BianchiError> {
    algebra_for(label.parse()?)
}

/// True iff the algebra is unimodular (class A).
pub fn admit_class_a(alg: &BianchiAlgebra) -> bool {
    alg.a == 0.0
}

impl BianchiAlgebra {
    pub fn is_class_a(&self) -> bool {
        admit_class_a(self)
    }

    /// Structure constants `C[i][j][k]` with `deⁱ = −½ Cⁱⱼₖ eʲ∧eᵏ`,
    /// antisymmetric in the last two indices.
    pub fn structure_constants(&self) -> [[[f64; 3]; 3]; 3] {
        let mut c = [[[0.0; 3]; 3]; 3];
        let mut put = |i: usize, j: usize, k: usize, v: f64| {
            c[i][j][k] = v;
            c[i][k][j] = -v;
        };
        put(0, 1, 2, self.b[0]);
        put(1, 0, 1, self.a);
        put(1, 2, 0, self.b[1]);
        put(2, 0, 1, self.b[2]);
        put(2, 2, 0, -self.a);
        c
    }

    /// `deⁱ` for `i = 0,1,2` as 2-forms on the `(e¹,e²,e³,dt)` basis.
    pub fn d_basis(&self) -> [KForm; 3] {
        let c = self.structure_constants();
        std::array::from_fn(|i| {
            let mut out = KForm::zero(2);
            for j in 0..3 {
                for k in (j + 1)..3 {
                    out.set(&[j, k], -c[i][j][k]).expect("valid slots");
                }
            }
            out
        })
    }

    /// Exterior derivative of a left-invariant form on the `(e¹,e²,e³,dt)`
    /// basis with constant coefficients; `dt` is closed.
    pub fn d_form(&self, form: &KForm) -> KForm {
        let de = self.d_basis();
        let mut out = KForm::zero((form.degree() + 1).min(crate::exterior::DIM));
        if form.degree() >= crate::exterior::DIM {
            return out;
        }
        for (idx, coeff) in form.components() {
            // Leibniz: d(e^{i1}∧…∧e^{ik}) = Σ_p (−1)^p e^{i1}∧…∧de^{ip}∧…∧e^{ik}
            for p in 0..idx.len() {
                if idx[p] == 3 {
                    continue;
                }
                let mut term = KForm::scalar(if p % 2 == 0 { coeff } else { -coeff });
                for (q, &slot) in idx.iter().enumerate() {
                    let factor = if q == p {
                        de[slot].clone()
                    } else {
                        KForm::basis(&[slot]).expect("valid slot")
                    };
                    term = term.wedge(&factor).expect("degree within bounds");
                }
                out += &term;
            }
        }
        out
    }
}

/// Coefficients of a 2-form on `(e²³, e³¹, e¹²)`.
pub type SpatialTwoForm = [f64; 3];

/// `d(c₁e¹ + c₂e² + c₃e³)` on the basis `(e²³, e³¹, e¹²)`.
pub fn d_one_form(alg: &BianchiAlgebra, coeffs: [f64; 3]) -> SpatialTwoForm {
    let form = KForm::one_form([coeffs[0], coeffs[1], coeffs[2], 0.0]);
    let d = alg.d_form(&form);
    [d.coeff(&[1, 2]), d.coeff(&[2, 0]), d.coeff(&[0, 1])]
}
