//! Brute-force checks of the closed-form rates.
//!
//! * [`check_relax_rate`]: the relaxation rate as a τ-integral of the
//!   phase-averaged drive factor against the bath correlation function, with
//!   no Bessel functions involved.
//! * [`check_lzs_rate`], [`check_roii_rate`]: Bloch equations of the driven
//!   qubit with pure dephasing, the rate read off the decay of `ρ₀₀ - 1/2`.

mod bloch;
mod relax;

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};

pub use bloch::{check_lzs_rate, check_roii_rate, BlochDecay, BLOCH_TOL};
pub use relax::{check_relax_rate, kernel_points, phase_averaged_kernel, relax_oracle_g10, RelaxGrid};

/// Floor of the relative-error denominator.
pub const REL_ERROR_FLOOR: f64 = 1e-30;

/// `|a - b| / max(|a|, |b|, 1e-30)`.
pub fn relative_error(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(REL_ERROR_FLOOR)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleReport {
    pub quantity: String,
    pub closed_form: f64,
    pub oracle: f64,
    pub relative_error: f64,
    pub rel_tol: f64,
    pub passed: bool,
    pub parameters: BTreeMap<String, f64>,
    pub tolerances: BTreeMap<String, f64>,
    pub notes: Vec<String>,
}

impl OracleReport {
    fn new(quantity: &str, closed_form: f64, oracle: f64, rel_tol: f64) -> Self {
        let relative_error = relative_error(closed_form, oracle);
        Self {
            quantity: quantity.to_string(),
            closed_form,
            oracle,
            relative_error,
            rel_tol,
            passed: relative_error <= rel_tol,
            parameters: BTreeMap::new(),
            tolerances: BTreeMap::new(),
            notes: Vec::new(),
        }
    }

    fn param(mut self, key: &str, value: f64) -> Self {
        self.parameters.insert(key.to_string(), value);
        self
    }

    fn tol(mut self, key: &str, value: f64) -> Self {
        self.tolerances.insert(key.to_string(), value);
        self
    }
}

fn check_rel_tol(rel_tol: f64) -> Result<()> {
    if !(rel_tol > 0.0 && rel_tol < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "oracle tolerance {rel_tol} must lie in (0, 1)"
        )));
    }
    Ok(())
}
