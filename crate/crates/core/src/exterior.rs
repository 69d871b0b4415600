//! Graded exterior algebra over a fixed 4-dimensional coframe.
//!
//! Basis slots are numbered `0..4`. In the orthonormal frame these are
//! `θ¹, θ², θ³, θ⁴ = f dt`; in the invariant frame they are `e¹, e², e³, dt`.
//! A monomial is stored by the bitmask of its (strictly increasing) index set,
//! so canonical ordering of keys holds by construction.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use thiserror::Error;

pub const DIM: usize = 4;
const BLADES: usize = 1 << DIM;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExteriorError {
    #[error("wedge of degrees {0} and {1} exceeds dimension {DIM}")]
    DegreeOverflow(usize, usize),
    #[error("operation defined on 2-forms only, got degree {0}")]
    UnsupportedDegree(usize),
    #[error("invalid basis index tuple {0:?}")]
    InvalidIndex(Vec<usize>),
    #[error("cannot add forms of degree {0} and {1}")]
    DegreeMismatch(usize, usize),
}

/// Sign of the permutation sorting `idx` (which must be distinct).
fn sort_sign(idx: &[usize]) -> f64 {
    let mut sign = 1.0;
    for i in 0..idx.len() {
        for j in (i + 1)..idx.len() {
            if idx[i] > idx[j] {
                sign = -sign;
            }
        }
    }
    sign
}

fn mask_indices(mask: usize) -> Vec<usize> {
    (0..DIM).filter(|i| mask & (1 << i) != 0).collect()
}

/// Sign picked up when moving the monomial `a` past the monomial `b`
/// to form the sorted product `a ∧ b` (masks disjoint).
fn wedge_sign(a: usize, b: usize) -> f64 {
    let mut inversions = 0;
    for i in mask_indices(a) {
        inversions += mask_indices(b).into_iter().filter(|&j| j < i).count();
    }
    if inversions % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// A homogeneous differential form with constant coefficients.
#[derive(Clone, PartialEq)]
pub struct KForm {
    degree: usize,
    coeffs: [f64; BLADES],
}

impl KForm {
    pub fn zero(degree: usize) -> Self {
        assert!(degree <= DIM, "degree {degree} > {DIM}");
        Self {
            degree,
            coeffs: [0.0; BLADES],
        }
    }

    /// The monomial `θ^{i₁} ∧ … ∧ θ^{i_k}`; unsorted tuples pick up the sign
    /// of the sorting permutation.
    pub fn basis(idx: &[usize]) -> Result<Self, ExteriorError> {
        Self::monomial(idx, 1.0)
    }

    pub fn monomial(idx: &[usize], coeff: f64) -> Result<Self, ExteriorError> {
        let mut mask = 0usize;
        for &i in idx {
            if i >= DIM || mask & (1 << i) != 0 {
                return Err(ExteriorError::InvalidIndex(idx.to_vec()));
            }
            mask |= 1 << i;
        }
        let mut out = Self::zero(idx.len());
        out.coeffs[mask] = sort_sign(idx) * coeff;
        Ok(out)
    }

    /// Build a 1-form from its four components.
    pub fn one_form(c: [f64; DIM]) -> Self {
        let mut out = Self::zero(1);
        for (i, v) in c.into_iter().enumerate() {
            out.coeffs[1 << i] = v;
        }
        out
    }

    pub fn scalar(v: f64) -> Self {
        let mut out = Self::zero(0);
        out.coeffs[0] = v;
        out
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Coefficient of the monomial with the given indices (sign-adjusted if
    /// the tuple is not increasing; zero for repeated indices).
    pub fn coeff(&self, idx: &[usize]) -> f64 {
        if idx.len() != self.degree {
            return 0.0;
        }
        let mut mask = 0usize;
        for &i in idx {
            if i >= DIM || mask & (1 << i) != 0 {
                return 0.0;
            }
            mask |= 1 << i;
        }
        sort_sign(idx) * self.coeffs[mask]
    }

    pub fn set(&mut self, idx: &[usize], value: f64) -> Result<(), ExteriorError> {
        if idx.len() != self.degree {
            return Err(ExteriorError::InvalidIndex(idx.to_vec()));
        }
        let sign = Self::monomial(idx, 1.0)?;
        let mask = idx.iter().fold(0usize, |acc, &i| acc | (1 << i));
        self.coeffs[mask] = sign.coeffs[mask] * value;
        Ok(())
    }

    /// Nonzero components keyed by strictly increasing index tuples, in
    /// lexicographic order of the tuples.
    pub fn components(&self) -> Vec<(Vec<usize>, f64)> {
        let mut out: Vec<(Vec<usize>, f64)> = (0..BLADES)
            .filter(|&m| m.count_ones() as usize == self.degree && self.coeffs[m] != 0.0)
            .map(|m| (mask_indices(m), self.coeffs[m]))
            .collect();
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |acc, c| acc.max(c.abs()))
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.max_abs() <= tol
    }

    pub fn wedge(&self, other: &KForm) -> Result<KForm, ExteriorError> {
        let degree = self.degree + other.degree;
        if degree > DIM {
            return Err(ExteriorError::DegreeOverflow(self.degree, other.degree));
        }
        let mut out = KForm::zero(degree);
        for a in 0..BLADES {
            let ca = self.coeffs[a];
            if ca == 0.0 {
                continue;
            }
            for b in 0..BLADES {
                let cb = other.coeffs[b];
                if cb == 0.0 || a & b != 0 {
                    continue;
                }
                out.coeffs[a | b] += wedge_sign(a, b) * ca * cb;
            }
        }
        Ok(out)
    }

    pub fn try_add(&self, other: &KForm) -> Result<KForm, ExteriorError> {
        if self.degree != other.degree {
            return Err(ExteriorError::DegreeMismatch(self.degree, other.degree));
        }
        let mut out = self.clone();
        for (o, c) in out.coeffs.iter_mut().zip(other.coeffs.iter()) {
            *o += c;
        }
        Ok(out)
    }

    /// Hodge star of a 2-form: `⋆(θᵃ∧θᵇ) = orientation · ε_c ε_d θᶜ∧θᵈ` with
    /// `(a,b,c,d)` an even permutation of the four slots.
    pub fn hodge(&self, sig: &SignatureSpec) -> Result<KForm, ExteriorError> {
        if self.degree != 2 {
            return Err(ExteriorError::UnsupportedDegree(self.degree));
        }
        let mut out = KForm::zero(2);
        for (m, &c) in self.coeffs.iter().enumerate() {
            if c == 0.0 || m.count_ones() != 2 {
                continue;
            }
            let ab = mask_indices(m);
            let cd = mask_indices((BLADES - 1) & !m);
            let perm = [ab[0], ab[1], cd[0], cd[1]];
            let s = sort_sign(&perm) * sig.orientation * sig.eta[cd[0]] * sig.eta[cd[1]];
            out.coeffs[(BLADES - 1) & !m] += s * c;
        }
        Ok(out)
    }

    /// Split a 2-form into its self-dual and anti-self-dual parts `(α ± ⋆α)/2`.
    pub fn sd_asd_split(&self, sig: &SignatureSpec) -> Result<(KForm, KForm), ExteriorError> {
        let star = self.hodge(sig)?;
        let mut plus = KForm::zero(2);
        let mut minus = KForm::zero(2);
        for m in 0..BLADES {
            plus.coeffs[m] = 0.5 * (self.coeffs[m] + star.coeffs[m]);
            minus.coeffs[m] = 0.5 * (self.coeffs[m] - star.coeffs[m]);
        }
        Ok((plus, minus))
    }

    /// Induced inner product on 2-forms: `⟨θᵃᵇ, θᶜᵈ⟩ = ε_a ε_b δ`.
    pub fn inner(&self, other: &KForm, sig: &SignatureSpec) -> Result<f64, ExteriorError> {
        if self.degree != 2 || other.degree != 2 {
            return Err(ExteriorError::UnsupportedDegree(self.degree.max(other.degree)));
        }
        Ok((0..BLADES)
            .filter(|m| m.count_ones() == 2)
            .map(|m| {
                let ab = mask_indices(m);
                sig.eta[ab[0]] * sig.eta[ab[1]] * self.coeffs[m] * other.coeffs[m]
            })
            .sum())
    }

    /// Rescale each monomial by the product of per-slot factors; used to
    /// change between the orthonormal and invariant coframes.
    pub fn rescale_slots(&self, factors: [f64; DIM]) -> KForm {
        let mut out = self.clone();
        for (m, c) in out.coeffs.iter_mut().enumerate() {
            let s: f64 = mask_indices(m).into_iter().map(|i| factors[i]).product();
            *c *= s;
        }
        out
    }
}

impl fmt::Debug for KForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "KForm<{}>{{", self.degree)?;
        for (i, (idx, c)) in self.components().into_iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            let name: String = idx.iter().map(|i| char::from(b'1' + *i as u8)).collect();
            write!(f, "{name}: {c}")?;
        }
        write!(f, "}}")
    }
}

impl Add for &KForm {
    type Output = KForm;
    fn add(self, o: &KForm) -> KForm {
        self.try_add(o).expect("degree mismatch in KForm addition")
    }
}

impl Add for KForm {
    type Output = KForm;
    fn add(self, o: KForm) -> KForm {
        &self + &o
    }
}

impl AddAssign<&KForm> for KForm {
    fn add_assign(&mut self, o: &KForm) {
        assert_eq!(self.degree, o.degree, "degree mismatch in KForm addition");
        for (a, b) in self.coeffs.iter_mut().zip(o.coeffs.iter()) {
            *a += b;
        }
    }
}

impl Sub for &KForm {
    type Output = KForm;
    fn sub(self, o: &KForm) -> KForm {
        self + &(-o)
    }
}

impl Sub for KForm {
    type Output = KForm;
    fn sub(self, o: KForm) -> KForm {
        &self - &o
    }
}

impl Neg for &KForm {
    type Output = KForm;
    fn neg(self) -> KForm {
        self * -1.0
    }
}

impl Neg for KForm {
    type Output = KForm;
    fn neg(self) -> KForm {
        &self * -1.0
    }
}

impl Mul<f64> for &KForm {
    type Output = KForm;
    fn mul(self, s: f64) -> KForm {
        let mut out = self.clone();
        out.coeffs.iter_mut().for_each(|c| *c *= s);
        out
    }
}

impl Mul<f64> for KForm {
    type Output = KForm;
    fn mul(self, s: f64) -> KForm {
        &self * s
    }
}

/// Diagonal metric signature of the orthonormal coframe plus orientation
/// (the sign of `θ¹∧θ²∧θ³∧θ⁴`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignatureSpec {
    pub eta: [f64; DIM],
    pub orientation: f64,
}

impl SignatureSpec {
    /// `(+,+,+,+)`, positively oriented.
    pub const fn riemannian() -> Self {
        Self {
            eta: [1.0, 1.0, 1.0, 1.0],
            orientation: 1.0,
        }
    }

    /// `(+,+,−,−)`, negatively oriented.
    pub const fn neutral() -> Self {
        Self {
            eta: [1.0, 1.0, -1.0, -1.0],
            orientation: -1.0,
        }
    }
}

/// The six basis 2-forms in the fixed order `(12,13,14,23,24,34)`.
pub const TWO_FORM_BASIS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Matrix of the Hodge star on 2-forms in the `TWO_FORM_BASIS` ordering;
/// column `j` holds the coefficients of `⋆` applied to basis element `j`.
pub fn hodge_matrix(sig: &SignatureSpec) -> [[f64; 6]; 6] {
    let mut m = [[0.0; 6]; 6];
    for (j, &(a, b)) in TWO_FORM_BASIS.iter().enumerate() {
        let star = KForm::basis(&[a, b])
            .and_then(|f| f.hodge(sig))
            .expect("basis 2-form");
        for (i, &(c, d)) in TWO_FORM_BASIS.iter().enumerate() {
            m[i][j] = star.coeff(&[c, d]);
        }
    }
    m
}
