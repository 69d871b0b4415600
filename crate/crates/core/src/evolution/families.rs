//! Closed-form solution families of the reduced systems.
//!
//! The four "auxiliary variable" families share one shape: with three
//! positive factors `u₁, u₂, u₃` (affine in `x` or constant),
//!
//! ```text
//! f_i = (u_j u_k / u_i)^{1/4},   f = h(x) x'(t),   h = ½ (u₁u₂u₃)^{-1/4}
//! ```
//!
//! so that `(f_j f_k)² = u_i`. Named particular solutions are evaluated
//! exactly as printed in their own variables. Every evaluation goes through
//! [`Jet`] arithmetic so first and second `t`-derivatives come out exact.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{EvolutionError, EvolutionSystem, Kind};
use crate::bianchi::BianchiAlgebra;
use crate::geometry::{FrameState, GeometryError};
use crate::jet::Jet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyKind {
    /// σ = (1,1,1); params `(a₁, a₂, a₃)`, domain `x > max aᵢ`.
    GeneralPpp,
    /// σ = (1,1,−1); params `(a₁, a₂, a₃)`, domain `max(a₁,a₂) < x < a₃`.
    GeneralPpm,
    /// σ = (0,0,1); params `(a, b, c)` in the variable `r`.
    #[serde(rename = "general-00p")]
    General00p,
    /// σ = (0,1,1); params `(a₁, a₂, a₃)` with `a₁ > 0`.
    #[serde(rename = "general-0pp")]
    General0pp,
    /// σ = (0,1,−1); params `(a₁, a₂, a₃)` with `a₁ > 0`, `a₂ < x < a₃`.
    #[serde(rename = "general-0pm")]
    General0pm,
    EguchiHanson,
    BgppTriaxial,
    HeisenbergGh,
    /// Biaxial su(1,1) solution `f₁ = f₂ = ½(a − t⁴)^{1/4}`.
    Su11Biaxial,
    Vii0Vacuum,
    Vi0Vacuum,
    /// σ = (0,0,0): constant frame, unit gauge.
    Flat,
}

impl FamilyKind {
    pub const ALL: [FamilyKind; 12] = [
        FamilyKind::GeneralPpp,
        FamilyKind::GeneralPpm,
        FamilyKind::General00p,
        FamilyKind::General0pp,
        FamilyKind::General0pm,
        FamilyKind::EguchiHanson,
        FamilyKind::BgppTriaxial,
        FamilyKind::HeisenbergGh,
        FamilyKind::Su11Biaxial,
        FamilyKind::Vii0Vacuum,
        FamilyKind::Vi0Vacuum,
        FamilyKind::Flat,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            FamilyKind::GeneralPpp => "general-ppp",
            FamilyKind::GeneralPpm => "general-ppm",
            FamilyKind::General00p => "general-00p",
            FamilyKind::General0pp => "general-0pp",
            FamilyKind::General0pm => "general-0pm",
            FamilyKind::EguchiHanson => "eguchi-hanson",
            FamilyKind::BgppTriaxial => "bgpp-triaxial",
            FamilyKind::HeisenbergGh => "heisenberg-gh",
            FamilyKind::Su11Biaxial => "su11-biaxial",
            FamilyKind::Vii0Vacuum => "vii0-vacuum",
            FamilyKind::Vi0Vacuum => "vi0-vacuum",
            FamilyKind::Flat => "flat",
        }
    }

    /// Canonical sign pattern solved by the family (before any `f₃` flip).
    pub fn sigma(&self) -> [i8; 3] {
        match self {
            FamilyKind::GeneralPpp | FamilyKind::EguchiHanson | FamilyKind::BgppTriaxial => {
                [1, 1, 1]
            }
            FamilyKind::GeneralPpm | FamilyKind::Su11Biaxial => [1, 1, -1],
            FamilyKind::General00p | FamilyKind::HeisenbergGh => [0, 0, 1],
            FamilyKind::General0pp | FamilyKind::Vii0Vacuum => [0, 1, 1],
            FamilyKind::General0pm | FamilyKind::Vi0Vacuum => [0, 1, -1],
            FamilyKind::Flat => [0, 0, 0],
        }
    }

    pub fn is_general(&self) -> bool {
        matches!(
            self,
            FamilyKind::GeneralPpp
                | FamilyKind::GeneralPpm
                | FamilyKind::General00p
                | FamilyKind::General0pp
                | FamilyKind::General0pm
        )
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FamilyKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FamilyKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| {
                let names: Vec<_> = FamilyKind::ALL.iter().map(|k| k.as_str()).collect();
                format!("unknown family `{s}` (expected one of {})", names.join(", "))
            })
    }
}

/// How the auxiliary variable `x` (or `r`) depends on `t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum EvalVariable {
    /// `x(t) = t`.
    Identity,
    /// `x(t) = (s t)⁴` on `t > 0`.
    Quartic { scale: f64 },
}

impl EvalVariable {
    /// Jets of `x(t)` and `x'(t)`.
    fn jets(&self, t: f64) -> (Jet, Jet) {
        match *self {
            EvalVariable::Identity => (Jet::variable(t), Jet::constant(1.0)),
            EvalVariable::Quartic { scale } => {
                let s4 = scale.powi(4);
                (
                    Jet::new(s4 * t.powi(4), 4.0 * s4 * t.powi(3), 12.0 * s4 * t * t),
                    Jet::new(4.0 * s4 * t.powi(3), 12.0 * s4 * t * t, 24.0 * s4 * t),
                )
            }
        }
    }

    /// Map an `x`-interval to the `t`-interval it comes from.
    fn t_interval(&self, lo: f64, hi: f64) -> (f64, f64) {
        match *self {
            EvalVariable::Identity => (lo, hi),
            EvalVariable::Quartic { scale } => {
                let inv = |x: f64| {
                    if x <= 0.0 {
                        0.0
                    } else if x.is_infinite() {
                        f64::INFINITY
                    } else {
                        x.powf(0.25) / scale
                    }
                };
                (inv(lo), inv(hi))
            }
        }
    }
}

/// One evaluation of a family: `f_i` and the gauge `f` as jets in `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FamilyPoint {
    pub t: f64,
    pub f: [Jet; 3],
    pub gauge: Jet,
}

impl FamilyPoint {
    pub fn values(&self) -> ([f64; 3], f64) {
        (self.f.map(|j| j.v), self.gauge.v)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolutionFamily {
    pub kind: FamilyKind,
    pub params: [f64; 3],
    pub variable: EvalVariable,
    /// Replace `f₃` by `−f₃`, turning a solution of `σ` into one of `−σ`.
    pub flip_f3: bool,
    /// Open `t`-interval on which the family is evaluated.
    pub domain: (f64, f64),
}

struct Factor {
    name: &'static str,
    value: f64,
}

fn f(name: &'static str, value: f64) -> Factor {
    Factor { name, value }
}

impl SolutionFamily {
    fn build(
        kind: FamilyKind,
        params: [f64; 3],
        variable: EvalVariable,
        seed: Option<f64>,
    ) -> Result<Self, EvolutionError> {
        let mut fam = SolutionFamily {
            kind,
            params,
            variable,
            flip_f3: false,
            domain: (f64::NEG_INFINITY, f64::INFINITY),
        };
        fam.domain = fam.compute_domain(seed)?;
        Ok(fam)
    }

    /// Sign pattern actually solved, including the `f₃` flip.
    pub fn sigma(&self) -> [i8; 3] {
        let s = self.kind.sigma();
        if self.flip_f3 {
            s.map(|v| -v)
        } else {
            s
        }
    }

    pub fn system(&self) -> EvolutionSystem {
        EvolutionSystem::from_sigma(self.sigma())
    }

    pub fn with_flip(mut self, flip: bool) -> Self {
        self.flip_f3 = flip;
        self
    }

    /// Re-express a general family in another auxiliary variable.
    pub fn with_variable(self, variable: EvalVariable, seed: f64) -> Result<Self, EvolutionError> {
        let flip = self.flip_f3;
        Ok(Self::build(self.kind, self.params, variable, Some(seed))?.with_flip(flip))
    }

    pub fn contains(&self, t: f64) -> bool {
        t > self.domain.0 && t < self.domain.1
    }

    fn empty(&self, reason: impl Into<String>) -> EvolutionError {
        EvolutionError::EmptyDomain {
            family: self.kind,
            reason: reason.into(),
        }
    }

    /// Positivity conditions at `t`, evaluated on plain values.
    fn factors(&self, t: f64) -> Vec<Factor> {
        let [p0, p1, p2] = self.params;
        let x = self.variable.jets(t).0.v;
        match self.kind {
            FamilyKind::GeneralPpp => vec![f("x - a1", x - p0), f("x - a2", x - p1), f("x - a3", x - p2)],
            FamilyKind::GeneralPpm => vec![f("x - a1", x - p0), f("x - a2", x - p1), f("a3 - x", p2 - x)],
            FamilyKind::General0pp => vec![f("a1", p0), f("x - a2", x - p1), f("x - a3", x - p2)],
            FamilyKind::General0pm => vec![f("a1", p0), f("x - a2", x - p1), f("a3 - x", p2 - x)],
            FamilyKind::General00p => {
                let k = 1.5 * (p0 * p1).abs().powf(0.25);
                vec![f("a", p0), f("b", p1), f("3/2 (ab)^(1/4) r + c", k * x + p2)]
            }
            FamilyKind::EguchiHanson => vec![f("t", t), f("t^4 - a", t.powi(4) - p0)],
            FamilyKind::BgppTriaxial => vec![
                f("t", t),
                f("t^4 - a^4", t.powi(4) - p0.powi(4)),
                f("t^4 - b^4", t.powi(4) - p1.powi(4)),
                f("t^4 - c^4", t.powi(4) - p2.powi(4)),
            ],
            FamilyKind::HeisenbergGh => vec![f("t", t)],
            FamilyKind::Su11Biaxial => vec![f("t", t), f("a - t^4", p0 - t.powi(4))],
            FamilyKind::Vii0Vacuum => vec![
                f("A e^t + B e^-t", p0 * t.exp() + p1 * (-t).exp()),
                f("A e^t - B e^-t", p0 * t.exp() - p1 * (-t).exp()),
            ],
            FamilyKind::Vi0Vacuum => vec![
                f("a cos t + b sin t", p0 * t.cos() + p1 * t.sin()),
                f("a sin t - b cos t", p0 * t.sin() - p1 * t.cos()),
            ],
            FamilyKind::Flat => vec![],
        }
    }

    fn first_violation(&self, t: f64) -> Option<String> {
        self.factors(t)
            .into_iter()
            .find(|fa| !(fa.value > 0.0))
            .map(|fa| fa.name.to_string())
    }

    /// Maximal open interval (containing `seed` where a choice exists) on
    /// which every factor is positive.
    fn compute_domain(&self, seed: Option<f64>) -> Result<(f64, f64), EvolutionError> {
        let [p0, p1, p2] = self.params;
        let inf = f64::INFINITY;
        let (lo, hi) = match self.kind {
            FamilyKind::GeneralPpp => self.variable.t_interval(p0.max(p1).max(p2), inf),
            FamilyKind::GeneralPpm => self.variable.t_interval(p0.max(p1), p2),
            FamilyKind::General0pp => {
                if !(p0 > 0.0) {
                    return Err(self.empty("a1 must be > 0"));
                }
                self.variable.t_interval(p1.max(p2), inf)
            }
            FamilyKind::General0pm => {
                if !(p0 > 0.0) {
                    return Err(self.empty("a1 must be > 0"));
                }
                self.variable.t_interval(p1, p2)
            }
            FamilyKind::General00p => {
                if !(p0 > 0.0 && p1 > 0.0) {
                    return Err(self.empty("a and b must be > 0"));
                }
                let k = 1.5 * (p0 * p1).powf(0.25);
                self.variable.t_interval(-p2 / k, inf)
            }
            FamilyKind::EguchiHanson => {
                if p0 > 0.0 {
                    (p0.powf(0.25), inf)
                } else {
                    (0.0, inf)
                }
            }
            FamilyKind::BgppTriaxial => (p0.abs().max(p1.abs()).max(p2.abs()), inf),
            FamilyKind::HeisenbergGh => (0.0, inf),
            FamilyKind::Su11Biaxial => {
                if !(p0 > 0.0) {
                    return Err(self.empty("a must be > 0"));
                }
                (0.0, p0.powf(0.25))
            }
            FamilyKind::Vii0Vacuum => {
                if !(p0 > 0.0) {
                    return Err(self.empty("A must be > 0"));
                }
                if p1 == 0.0 {
                    (f64::NEG_INFINITY, inf)
                } else {
                    (0.5 * (p1 / p0).abs().ln(), inf)
                }
            }
            FamilyKind::Vi0Vacuum => {
                let r0 = p0.hypot(p1);
                if !(r0 > 0.0) {
                    return Err(self.empty("a and b must not both vanish"));
                }
                let t0 = p1.atan2(p0);
                // branch t − t₀ ∈ (2πk, 2πk + π/2) containing the seed
                let k = match seed {
                    Some(s) => ((s - t0) / (2.0 * PI)).floor(),
                    None => 0.0,
                };
                let lo = t0 + 2.0 * PI * k;
                (lo, lo + FRAC_PI_2)
            }
            FamilyKind::Flat => (f64::NEG_INFINITY, inf),
        };
        if !(lo < hi) {
            return Err(self.empty(format!("interval ({lo}, {hi}) is empty")));
        }
        if let Some(s) = seed {
            if !(s > lo && s < hi) {
                let factor = self
                    .first_violation(s)
                    .unwrap_or_else(|| format!("t - {lo}) and ({hi} - t"));
                return Err(EvolutionError::SeedOutside {
                    family: self.kind,
                    seed: s,
                    factor,
                });
            }
        }
        Ok((lo, hi))
    }

    /// Evaluate `(f₁, f₂, f₃, f)` and their `t`-derivatives at `t`.
    pub fn eval(&self, t: f64) -> Result<FamilyPoint, EvolutionError> {
        if let Some(factor) = self.first_violation(t) {
            return Err(EvolutionError::Domain {
                family: self.kind,
                t,
                factor,
            });
        }
        if !self.contains(t) {
            return Err(EvolutionError::Domain {
                family: self.kind,
                t,
                factor: format!("(t - {}) and ({} - t)", self.domain.0, self.domain.1),
            });
        }
        let [p0, p1, p2] = self.params;
        let tj = Jet::variable(t);
        let q = |u: Jet| u.powf(0.25);
        let triple = |u: [Jet; 3]| -> [Jet; 3] {
            std::array::from_fn(|i| {
                let (j, k) = ((i + 1) % 3, (i + 2) % 3);
                q(u[j]) * q(u[k]) / q(u[i])
            })
        };
        let (mut fs, gauge) = match self.kind {
            FamilyKind::GeneralPpp
            | FamilyKind::GeneralPpm
            | FamilyKind::General0pp
            | FamilyKind::General0pm => {
                let (x, dx) = self.variable.jets(t);
                let u = match self.kind {
                    FamilyKind::GeneralPpp => [x - p0, x - p1, x - p2],
                    FamilyKind::GeneralPpm => [x - p0, x - p1, p2 - x],
                    FamilyKind::General0pp => [Jet::constant(p0), x - p1, x - p2],
                    _ => [Jet::constant(p0), x - p1, p2 - x],
                };
                let h = 0.5 * (u[0] * u[1] * u[2]).powf(-0.25);
                (triple(u), h * dx)
            }
            FamilyKind::General00p => {
                let (r, dr) = self.variable.jets(t);
                let ab4 = (p0 * p1).powf(0.25);
                let big_r = r * (1.5 * ab4) + p2;
                let c13 = big_r.powf(1.0 / 3.0);
                (
                    [
                        c13 * (p1 / p0).powf(0.25),
                        c13 * (p0 / p1).powf(0.25),
                        ab4 * c13.recip(),
                    ],
                    dr,
                )
            }
            FamilyKind::EguchiHanson => {
                let w = tj.powf(4.0) - p0;
                (
                    [tj * 0.5, tj * 0.5, w.sqrt() / (tj * 2.0)],
                    (tj.powf(4.0) / w).sqrt(),
                )
            }
            FamilyKind::BgppTriaxial => {
                let t4 = tj.powf(4.0);
                let u = [t4 - p0.powi(4), t4 - p1.powi(4), t4 - p2.powi(4)];
                let gauge = 2.0 * tj.powf(3.0) / (q(u[0]) * q(u[1]) * q(u[2]));
                (triple(u), gauge)
            }
            FamilyKind::HeisenbergGh => {
                let s = tj.sqrt();
                ([s, s, s.recip()], s)
            }
            FamilyKind::Su11Biaxial => {
                let w = p0 - tj.powf(4.0);
                (
                    [q(w) * 0.5, q(w) * 0.5, tj * tj * 0.5 / q(w)],
                    tj / q(w),
                )
            }
            FamilyKind::Vii0Vacuum => {
                let plus = p0 * tj.exp() + p1 * (-tj).exp();
                let minus = p0 * tj.exp() - p1 * (-tj).exp();
                let gauge = 0.5 * plus.sqrt() * minus.sqrt();
                let f3 = minus.sqrt() / plus.sqrt();
                ([gauge, f3.recip(), f3], gauge)
            }
            FamilyKind::Vi0Vacuum => {
                let cc = p0 * tj.cos() + p1 * tj.sin();
                let ss = p0 * tj.sin() - p1 * tj.cos();
                let gauge = cc.sqrt() * ss.sqrt();
                let f3 = ss.sqrt() / cc.sqrt();
                ([gauge, f3.recip(), f3], gauge)
            }
            FamilyKind::Flat => ([Jet::constant(1.0); 3], Jet::constant(1.0)),
        };
        if self.flip_f3 {
            fs[2] = -fs[2];
        }
        let point = FamilyPoint { t, f: fs, gauge };
        if !(point.f.iter().all(Jet::is_finite) && point.gauge.is_finite())
            || point.f.iter().any(|j| j.v == 0.0)
            || point.gauge.v == 0.0
        {
            return Err(EvolutionError::Domain {
                family: self.kind,
                t,
                factor: "f_i f".to_string(),
            });
        }
        Ok(point)
    }

    /// Frame state at `t` for the given algebra and kind.
    pub fn state(
        &self,
        t: f64,
        kind: Kind,
        algebra: BianchiAlgebra,
    ) -> Result<FrameState, StateError> {
        let p = self.eval(t)?;
        Ok(FrameState::from_jets(t, p.f, p.gauge, kind, algebra)?)
    }
}

/// Failure to build a frame state from a family.
#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum StateError {
    #[error(transparent)]
    Evolution(#[from] EvolutionError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// General solution of a reduced system, matched on the canonical sign
/// pattern. `params` are `(a₁, a₂, a₃)`, or `(a, b, c)` for `σ = (0,0,1)`;
/// `seed` selects the domain component.
pub fn closed_form(
    system: &EvolutionSystem,
    params: [f64; 3],
    seed: f64,
) -> Result<SolutionFamily, EvolutionError> {
    let (canon, flip) = system.canonical();
    let kind = match canon {
        [0, 0, 0] => FamilyKind::Flat,
        [1, 1, 1] => FamilyKind::GeneralPpp,
        [1, 1, -1] => FamilyKind::GeneralPpm,
        [0, 0, 1] => FamilyKind::General00p,
        [0, 1, 1] => FamilyKind::General0pp,
        [0, 1, -1] => FamilyKind::General0pm,
        other => return Err(EvolutionError::NoClosedForm(other)),
    };
    Ok(SolutionFamily::build(kind, params, EvalVariable::Identity, Some(seed))?.with_flip(flip))
}

/// A family by name on its stated domain. General families use `x(t) = t`
/// and take the domain component to the right of the largest root.
pub fn named_solution(kind: FamilyKind, params: [f64; 3]) -> Result<SolutionFamily, EvolutionError> {
    SolutionFamily::build(kind, params, EvalVariable::Identity, None)
}

/// A general family in an explicit auxiliary variable.
pub fn general_with_variable(
    kind: FamilyKind,
    params: [f64; 3],
    variable: EvalVariable,
    seed: Option<f64>,
) -> Result<SolutionFamily, EvolutionError> {
    SolutionFamily::build(kind, params, variable, seed)
}
