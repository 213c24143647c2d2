//! Numerical toolkit for flat globally hyperbolic spacetimes.
//!
//! Isometries of Minkowski space and their classification, achronal domains of
//! single isometries, the Penrose boundary of light-like hyperplanes, regular
//! convex domains with their cosmological time, limit sets of Kleinian holonomies,
//! cocycle spaces, model spacetimes and a mean-curvature estimator.

pub mod achronal;
pub mod classify;
pub mod curvature;
pub mod cohomology;
pub mod dedup;
pub mod domain;
pub mod error;
pub mod holonomy;
pub mod linalg;
pub mod lp;
pub mod mink;
pub mod models;
pub mod penrose;
pub mod qp;
pub mod samples;

pub use error::{Error, Result};
pub use mink::{causal_character, mink_product, CausalCharacter, CausalKind, Isometry, MinkVector, TimeOrientation};
