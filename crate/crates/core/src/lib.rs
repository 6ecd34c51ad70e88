//! Numerical workbench for Reeb-flow dynamics on contact three-manifolds.
//!
//! The crate bundles five cooperating toolkits:
//!
//! * [`model`] - orbit/surface vocabulary (rotation numbers, intersection
//!   numbers) and the frequency-vs-area inequality evaluator;
//! * [`ellipsoid`] - the closed-form ellipsoid-boundary fixture with its two
//!   core orbits, constant-slope surfaces, and disk page;
//! * [`flow`] - adaptive Runge-Kutta integration of chart vector fields with
//!   section-event detection and periodic-orbit refinement;
//! * [`inflation`] - the boundary-tube normal form, the conormal-straightening
//!   isotopy, and the exponential inflation of a contact form in a slab over a
//!   surface, with its deformed Reeb fields, volumes, and budgets;
//! * [`spectrum`] - orbit-set action spectra with Weyl-law diagnostics and the
//!   disjoint-union composition rule;
//! * [`calabi`] - flux, action functions, the Calabi invariant, and mean-action
//!   experiments for area-preserving disk and annulus maps.
//!
//! [`verify`] packages the cross-module acceptance checks consumed by the CLI
//! and by the integration test suite.

pub mod calabi;
pub mod ellipsoid;
pub mod error;
pub mod flow;
pub mod inflation;
mod linalg;
pub mod model;
pub mod quad;
pub mod report;
pub mod spectrum;
pub mod verify;

pub use error::{Error, Result};
