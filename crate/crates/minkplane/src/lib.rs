//! Flat Minkowski planes over strongly hyperbolic functions.
//!
//! A flat Minkowski plane lives on the torus S¹ × S¹; its circles are graphs
//! of homeomorphisms of S¹. This crate builds the negative half of such a
//! plane from a pair of strongly hyperbolic functions (and the positive half
//! from a second pair via the mirror x ↦ −x), then provides:
//!
//! * [`torus`] — extended-real coordinates, parallelism, cyclic orientation,
//!   and admissible-position classification of point triples;
//! * [`functions`] — the strongly hyperbolic function catalog and a numerical
//!   checker for the defining conditions;
//! * [`circles`] — circle objects of both halves, evaluation, membership,
//!   tangent slopes, and the Φ∞ group action (x, y) ↦ (x + b, ay + c);
//! * [`roots`] — root structure of the difference functions that bound
//!   circle-pair intersection counts;
//! * [`incidence`] — join / intersect / touch solvers and a randomized
//!   axiom checker;
//! * [`classify`] — normalisation, group-dimension and Klein-Kroll typing,
//!   and the isomorphism test modulo the eight coordinate changes;
//! * [`json`] — parsing of plane / circle / point spec files;
//! * [`render`] — SVG output in the square torus chart;
//! * [`acceptance`] — the reproducible acceptance-suite runner.

pub mod acceptance;
pub mod circles;
pub mod classify;
pub mod functions;
pub mod incidence;
pub mod json;
pub mod render;
pub mod rng;
pub mod roots;
mod sampling;
mod solve;
pub mod torus;

pub use circles::{Circle, PlaneSpec};
pub use functions::{CheckReport, CheckerConfig, ShFunction};
pub use incidence::{intersect, join, touch, IntersectionSet, JoinSolution};
pub use torus::{ExtendedReal, Half, TorusPoint};
