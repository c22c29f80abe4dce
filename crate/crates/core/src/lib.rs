//! Möbius and Ptolemy geometry on the extended Euclidean space and the
//! Heisenberg group with the Cygan metric.
//!
//! The crate covers cross-ratio triples and metric inversions, space
//! inversions and model automorphisms, Busemann functions and slopes,
//! zigzag curves, and the hyperbolic filling with its distance `ρ`.

pub mod automorphism;
pub mod error;
pub mod filling;
pub mod geodesy;
pub mod mobius;
pub mod model;
pub mod numeric;
pub mod point;
pub mod zigzag;

pub use automorphism::{homothety, s_inversion_apply, shift, Automorphism, Generator, SpaceInversion};
pub use error::{Error, Result};
pub use mobius::{
    crt, distance, is_admissible, metric_inversion, ptolemy_check, ptolemy_equality_residual, same_sphere,
    scalar_cross_ratio, CrossRatioTriple, MetricRep, Quadruple,
};
pub use model::{is_ptolemy_circle, ptolemy_line, Curve, Model, OrientedLine, PtolemyCircle};
pub use point::MPoint;
