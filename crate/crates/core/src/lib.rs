//! Interference patterns of strongly driven two-level (flux-qubit) systems.
//!
//! The crate evaluates the incoherent transition rates of a qubit driven by
//! `ε(t) = ε₀ + A cos ωt`:
//!
//! * tunnelling-induced Landau-Zener-Stückelberg rates (Lorentzian and
//!   Gaussian line shapes),
//! * bath-induced relaxation rates for Ohmic, single-mode and
//!   phenomenological baths,
//! * rates through the effective couplings created by a weak second tone,
//!
//! solves the two-state rate equations built from them, checks the closed
//! forms against brute-force oracles, and sweeps `ε₀ × A` grids into
//! population maps.
//!
//! Every energy-like quantity is an angular frequency in rad/ns (`ħ = k_B = 1`),
//! times are in ns. Conversions from the `X/2π in GHz`, mK and μs conventions
//! live in [`params`].

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dynamics;
pub mod error;
pub mod io;
pub mod oracle;
pub mod params;
pub mod rates;
pub mod specfun;
pub mod spectral;
pub mod sweep;

pub use error::{Error, Result};

/// Crate version recorded in output provenance.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
