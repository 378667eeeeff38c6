//! Morphology-driven upper bounds on the computational capacity of a growing
//! slime mould.
//!
//! The analysis chain runs from plate images (or a pre-extracted morphology
//! table) through growth-curve fits to four Margolus–Levitin style operation
//! counts:
//!
//! * [`ingest`] segments scanner images and loads morphology CSV files.
//! * [`morphometry`] measures area, perimeter, circularity and box-counting
//!   dimension.
//! * [`growthfit`] fits logistic and two-phase logistic growth models.
//! * [`ness`] locates the non-equilibrium steady state and fits late-time
//!   linear tails of cumulative bounds.
//! * [`bounds`] evaluates the hydrodynamic, chemical, kinetic-energy and
//!   quantum-optical bounds, and aggregates them over groups.
//! * [`oscillators`] holds the mean-energy theory behind the macroscopic
//!   speed limit, ring normal modes and the characteristic time scale.
//! * [`scaling`] performs the allometric regression against body mass.
//! * [`pipeline`] wires everything into the `segment`, `analyze`, `synth`
//!   and `oscillators` commands.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod error;
pub mod growthfit;
pub mod ingest;
pub mod morphometry;
pub mod ness;
pub mod oscillators;
pub mod pipeline;
pub mod quadrature;
pub mod scaling;
pub mod stats;
pub mod units;

pub use error::{Error, Result};
