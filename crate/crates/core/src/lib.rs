//! Hyper-Kähler and hyper-symplectic 4-metrics of Bianchi type A.
//!
//! A diagonal evolution `eⁱ(t) = f_i(t) eⁱ` of a left-invariant coframe on a
//! three-dimensional Lie group produces a closed triple of fundamental
//! 2-forms exactly when `d/dt(f_j f_k) = σ_i f f_i`, with the sign pattern
//! `σ` read off from the structure constants. This crate builds those
//! systems, evaluates and integrates their solutions, and certifies the
//! resulting metrics through their forms, complex structures and curvature.

pub mod bianchi;
pub mod curvature;
pub mod evolution;
pub mod export;
pub mod exterior;
pub mod geometry;
pub mod jet;
pub mod json;
pub mod verify;

pub use bianchi::{algebra_for, BianchiAlgebra, BianchiLabel};
pub use curvature::{CurvatureReport, Tolerances};
pub use evolution::{EvolutionSystem, FamilyKind, Kind, SolutionFamily};
pub use exterior::{KForm, SignatureSpec};
pub use geometry::FrameState;
