#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0.0)` also rejects NaN
//! # nhqb
//!
//! Time-optimal ("brachistochrone") evolution of two-level systems governed by
//! non-Hermitian Hamiltonians.
//!
//! The crate is organised around the effective 2×2 generator
//! `H = λ₀/2 · 1 + Ω·σ/2` with a complex vector `Ω = (X, Y, Z)`:
//!
//! - [`hamiltonian`]: construction, complex spherical chart, bi-orthogonal
//!   eigensystem, diabolic/exceptional degeneracy classification.
//! - [`evolution`]: closed-form propagation of adjoint state pairs and complex
//!   Bloch vectors, plus an adaptive Runge–Kutta oracle that integrates the
//!   Schrödinger equation and its adjoint directly.
//! - [`brachistochrone`]: optimal phases, evolution and passage times in every
//!   regime, and a cross-check of each closed form against the oracle.
//! - [`geometry`]: complex Fubini–Study line element, path lengths, the
//!   hyperboloid chart of the PT-symmetric family, evolution speed.
//! - [`dissipative`]: the driven two-level system with level decay, its
//!   rotating-frame generator, tunneling probabilities and passage times.
//!
//! Every multivalued function uses the principal branch; see [`cmath`].

#![forbid(unsafe_code)]

pub mod brachistochrone;
pub mod cmath;
pub mod csv;
pub mod dissipative;
mod error;
pub mod evolution;
pub mod geometry;
pub mod hamiltonian;
pub mod ode;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;

pub use brachistochrone::{BoundaryStates, PassageTimeResult, Regime, SpinFlipTimes};
pub use dissipative::{RabiRegime, RabiSystem, TunnelingProbabilities};
pub use evolution::{AdjointStatePair, BlochVector, StateCoefficients};
pub use geometry::{ChartPoint, MetricSample, PTParams};
pub use hamiltonian::{Degeneracy, EffectiveHamiltonian, EigenSystem, SphericalParams, SplitForm};
