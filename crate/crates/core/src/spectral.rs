//! Bath spectral densities `S(ω′)` and the quantities derived from them.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{BathParams, Validate, ValidationReport};
use crate::specfun::{integrate_adaptive, integrate_adaptive_panels};

pub const DEFAULT_IR_CUT: f64 = 1e-3;
pub const DEFAULT_UV_CUT: f64 = 10.0;

/// Smallest |τ| (ns) used when sizing the correlation-function band.
pub const CORRELATION_T_FLOOR: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SpectralModel {
    /// `α ω′ e^{-|ω′|/ω_c} / (1 - e^{-ω′/T})`.
    OhmicCutoff(BathParams),
    /// A single bath mode at `ω_c` carrying weight `α ω_c`.
    DeltaMode(BathParams),
    /// Flat spectrum of height `s0`.
    White { s0: f64 },
    /// `amplitude / ω′` on `ir_cut <= ω′ <= uv_cut`, zero elsewhere.
    OneOverF { amplitude: f64, ir_cut: f64, uv_cut: f64 },
}

impl SpectralModel {
    pub fn one_over_f(amplitude: f64) -> Self {
        SpectralModel::OneOverF {
            amplitude,
            ir_cut: DEFAULT_IR_CUT,
            uv_cut: DEFAULT_UV_CUT,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            SpectralModel::OhmicCutoff(_) => "ohmic_cutoff",
            SpectralModel::DeltaMode(_) => "delta_mode",
            SpectralModel::White { .. } => "white",
            SpectralModel::OneOverF { .. } => "one_over_f",
        }
    }
}

impl Validate for SpectralModel {
    fn validate(&self) -> ValidationReport {
        let mut r = ValidationReport::default();
        let mut push = |field: &'static str, message: &str| {
            r.violations.push(crate::params::Violation {
                field,
                message: message.to_string(),
            })
        };
        match self {
            SpectralModel::OhmicCutoff(b) | SpectralModel::DeltaMode(b) => return b.validate(),
            SpectralModel::White { s0 } => {
                if !(s0.is_finite() && *s0 >= 0.0) {
                    push("s0", "must be finite and >= 0");
                }
            }
            SpectralModel::OneOverF {
                amplitude,
                ir_cut,
                uv_cut,
            } => {
                if !(amplitude.is_finite() && *amplitude >= 0.0) {
                    push("amplitude", "must be finite and >= 0");
                }
                if !(ir_cut.is_finite() && *ir_cut > 0.0) {
                    push("ir_cut", "must be finite and > 0");
                }
                if !(uv_cut.is_finite() && uv_cut > ir_cut) {
                    push("uv_cut", "must be finite and > ir_cut");
                }
            }
        }
        r
    }
}

/// Ohmic spectral density with its `ω′ → 0` and `T → 0` limits.
pub fn ohmic(b: &BathParams, w: f64) -> f64 {
    let cutoff = (-w.abs() / b.omega_c).exp();
    if b.temperature <= 0.0 {
        return if w > 0.0 { b.alpha * w * cutoff } else { 0.0 };
    }
    if w == 0.0 {
        return b.alpha * b.temperature;
    }
    // ω′/(1 - e^{-ω′/T}) written with expm1 so S(-ω′) = e^{-ω′/T} S(ω′) holds to rounding
    b.alpha * w * cutoff / -(-w / b.temperature).exp_m1()
}

/// Pointwise `S(ω′)`.
pub fn s_eval(model: &SpectralModel, omega_prime: f64) -> Result<f64> {
    model.validate().into_result()?;
    match *model {
        SpectralModel::OhmicCutoff(b) => Ok(ohmic(&b, omega_prime)),
        SpectralModel::DeltaMode(_) => Err(Error::UnsupportedQuery(
            "delta_mode has no pointwise value; use resonant_weight".into(),
        )),
        SpectralModel::White { s0 } => Ok(s0),
        SpectralModel::OneOverF {
            amplitude,
            ir_cut,
            uv_cut,
        } => Ok(if (ir_cut..=uv_cut).contains(&omega_prime) {
            amplitude / omega_prime
        } else {
            0.0
        }),
    }
}

/// `(ω_c, α ω_c)` for the delta-mode bath, `None` otherwise.
pub fn resonant_weight(model: &SpectralModel) -> Option<(f64, f64)> {
    match model {
        SpectralModel::DeltaMode(b) => Some((b.omega_c, b.alpha * b.omega_c)),
        _ => None,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CorrelationSample {
    pub tau: f64,
    pub value: Complex64,
}

/// Half-width of the frequency band used for `C(τ)`.
pub fn correlation_band(b: &BathParams, tau: f64) -> f64 {
    40.0 * b.omega_c.max(b.temperature) + 50.0 / tau.abs().max(CORRELATION_T_FLOOR)
}

/// Bath correlation function `C(τ) = ∫ dω′ e^{-iω′τ} S(ω′)`.
pub fn correlation(model: &SpectralModel, tau: f64, rel_tol: f64) -> Result<Complex64> {
    if !(1e-12..=1e-4).contains(&rel_tol) {
        return Err(Error::InvalidParameter(format!(
            "correlation tolerance {rel_tol} outside [1e-12, 1e-4]"
        )));
    }
    if !tau.is_finite() {
        return Err(Error::InvalidParameter(format!("tau {tau} is not finite")));
    }
    model.validate().into_result()?;
    let b = match model {
        SpectralModel::OhmicCutoff(b) => *b,
        SpectralModel::White { .. } => {
            return Err(Error::UnsupportedQuery(
                "white-noise correlation is a delta function; use white_kernel_weight".into(),
            ))
        }
        other => {
            return Err(Error::UnsupportedQuery(format!(
                "correlation is not available for {}",
                other.kind()
            )))
        }
    };
    let w = correlation_band(&b, tau);
    let panels = ((w * tau.abs()) / PI).ceil() as usize + 8;
    let f = |x: f64| Complex64::from_polar(ohmic(&b, x), -x * tau);
    // split at the kink of e^{-|ω′|/ω_c}
    let neg = integrate_adaptive_panels(f, -w, 0.0, panels, rel_tol)?;
    let pos = integrate_adaptive_panels(f, 0.0, w, panels, rel_tol)?;
    Ok(neg.value + pos.value)
}

pub fn correlation_sample(model: &SpectralModel, tau: f64, rel_tol: f64) -> Result<CorrelationSample> {
    Ok(CorrelationSample {
        tau,
        value: correlation(model, tau, rel_tol)?,
    })
}

/// Weight `2π s0` of the white-noise kernel `C(τ) = 2π s0 δ(τ)`.
pub fn white_kernel_weight(s0: f64) -> f64 {
    TAU * s0
}

/// `Γ₂ = π S(0)` for white low-frequency noise.
pub fn gamma2_white(s0: f64) -> Result<f64> {
    if !(s0.is_finite() && s0 >= 0.0) {
        return Err(Error::InvalidParameter(format!("s0 {s0} must be >= 0")));
    }
    Ok(PI * s0)
}

fn one_over_f_parts(model: &SpectralModel) -> Result<(f64, f64, f64)> {
    model.validate().into_result()?;
    match *model {
        SpectralModel::OneOverF {
            amplitude,
            ir_cut,
            uv_cut,
        } => Ok((amplitude, ir_cut, uv_cut)),
        ref other => Err(Error::UnsupportedQuery(format!(
            "expected a one_over_f model, got {}",
            other.kind()
        ))),
    }
}

// geometric panels resolve the 1/ω′ growth towards the infrared cut
fn log_panels(ir: f64, uv: f64) -> Vec<(f64, f64)> {
    let n = ((uv / ir).log2().ceil() as usize).max(1);
    let r = (uv / ir).powf(1.0 / n as f64);
    (0..n)
        .map(|k| {
            let lo = ir * r.powi(k as i32);
            let hi = if k + 1 == n { uv } else { ir * r.powi(k as i32 + 1) };
            (lo, hi)
        })
        .collect()
}

/// `Γ₂ = sqrt(∫ S dω′)` over the model's support.
pub fn gamma2_lowfreq(model: &SpectralModel) -> Result<f64> {
    let (a, ir, uv) = one_over_f_parts(model)?;
    if a == 0.0 {
        return Ok(0.0);
    }
    let mut total = 0.0;
    for (lo, hi) in log_panels(ir, uv) {
        total += integrate_adaptive(|x: f64| a / x, lo, hi, 1e-13)?.value;
    }
    Ok(total.sqrt())
}

/// Polaron shift `ε_p(t) = ∫ dω′ (S(ω′)/ω′)(1 - cos ω′t)`.
pub fn polaron_shift(model: &SpectralModel, t: f64) -> Result<f64> {
    let (a, ir, uv) = one_over_f_parts(model)?;
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::InvalidParameter(format!("time {t} must be >= 0")));
    }
    if a == 0.0 || t == 0.0 {
        return Ok(0.0);
    }
    // 1 - cos x = 2 sin²(x/2) avoids cancellation at small ω′t
    let f = |x: f64| {
        let s = (0.5 * x * t).sin();
        2.0 * a * s * s / (x * x)
    };
    let mut total = 0.0;
    for (lo, hi) in log_panels(ir, uv) {
        let panels = ((hi - lo) * t / PI).ceil() as usize + 1;
        total += integrate_adaptive_panels(f, lo, hi, panels, 1e-11)?.value;
    }
    Ok(total)
}
