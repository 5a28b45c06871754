//! Parameter records, unit conversions and validation.
//!
//! Internally every energy-like quantity (Δ, ε₀, Γ₂, A, ω, ω_c, T, rates) is an
//! angular frequency in rad/ns and every time is in ns. Figure captions quote
//! frequencies as `X/2π` in GHz, temperatures in mK and times in μs; the
//! functions here convert at that boundary.

use std::f64::consts::TAU;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Boltzmann constant over Planck constant, GHz/K (CODATA 2018, exact).
pub const KB_OVER_H_GHZ_PER_K: f64 = 20.836619123;

/// `X/2π` in GHz to X in rad/ns (1 GHz is one cycle per ns).
pub fn freq_from_caption(value_ghz_over_2pi: f64) -> Result<f64> {
    if !value_ghz_over_2pi.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "frequency {value_ghz_over_2pi} GHz is not finite"
        )));
    }
    Ok(TAU * value_ghz_over_2pi)
}

/// Inverse of [`freq_from_caption`].
pub fn freq_to_caption(value_rad_per_ns: f64) -> f64 {
    value_rad_per_ns / TAU
}

/// Temperature in mK to the energy `k_B T/ħ` in rad/ns.
pub fn temp_from_millikelvin(t_mk: f64) -> Result<f64> {
    if !t_mk.is_finite() || t_mk < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "temperature {t_mk} mK must be finite and non-negative"
        )));
    }
    Ok(TAU * KB_OVER_H_GHZ_PER_K * t_mk * 1e-3)
}

pub fn temp_to_millikelvin(t_rad_per_ns: f64) -> f64 {
    t_rad_per_ns / (TAU * KB_OVER_H_GHZ_PER_K * 1e-3)
}

/// Microseconds to ns.
pub fn time_from_microseconds(t_us: f64) -> Result<f64> {
    if !t_us.is_finite() || t_us < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "time {t_us} us must be finite and non-negative"
        )));
    }
    Ok(t_us * 1e3)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Unit {
    GhzOver2Pi,
    RadPerNs,
    MilliKelvin,
    Microsecond,
    Nanosecond,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Dimension {
    Energy,
    Time,
}

impl Unit {
    fn dimension(self) -> Dimension {
        match self {
            Unit::GhzOver2Pi | Unit::RadPerNs | Unit::MilliKelvin => Dimension::Energy,
            Unit::Microsecond | Unit::Nanosecond => Dimension::Time,
        }
    }

    // factor taking one of `self` to the canonical unit (rad/ns or ns)
    fn to_canonical(self) -> f64 {
        match self {
            Unit::GhzOver2Pi => TAU,
            Unit::RadPerNs => 1.0,
            Unit::MilliKelvin => TAU * KB_OVER_H_GHZ_PER_K * 1e-3,
            Unit::Microsecond => 1e3,
            Unit::Nanosecond => 1.0,
        }
    }
}

impl fmt::Display for Unit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Unit::GhzOver2Pi => "GHz (X/2pi)",
            Unit::RadPerNs => "rad/ns",
            Unit::MilliKelvin => "mK",
            Unit::Microsecond => "us",
            Unit::Nanosecond => "ns",
        };
        f.write_str(s)
    }
}

/// A magnitude tagged with its unit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnitValue {
    pub magnitude: f64,
    pub unit: Unit,
}

impl UnitValue {
    pub fn new(magnitude: f64, unit: Unit) -> Self {
        Self { magnitude, unit }
    }

    /// Value in the canonical unit of its dimension (rad/ns or ns).
    pub fn canonical(&self) -> f64 {
        self.magnitude * self.unit.to_canonical()
    }

    pub fn convert(&self, to: Unit) -> Result<UnitValue> {
        if self.unit.dimension() != to.dimension() {
            return Err(Error::InvalidParameter(format!(
                "cannot convert {} to {}",
                self.unit, to
            )));
        }
        if self.unit == to {
            return Ok(*self);
        }
        Ok(UnitValue::new(self.canonical() / to.to_canonical(), to))
    }
}

/// Qubit: tunnel splitting Δ, static detuning ε₀, dephasing rate Γ₂ (rad/ns).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QubitParams {
    pub delta: f64,
    pub eps0: f64,
    pub gamma2: f64,
}

/// Strong drive `A cos ωt`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DriveField {
    pub amp: f64,
    pub omega: f64,
}

impl DriveField {
    /// Bessel argument `A/ω`.
    pub fn ratio(&self) -> f64 {
        self.amp / self.omega
    }
}

/// Weak second tone `Ã cos ω̃t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeakField {
    pub amp_tilde: f64,
    pub omega_tilde: f64,
}

impl WeakField {
    pub fn ratio(&self) -> f64 {
        self.amp_tilde / self.omega_tilde
    }
}

/// Bath coupling α, transverse strength φ, cutoff ω_c and temperature T.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BathParams {
    pub alpha: f64,
    pub phi: f64,
    pub omega_c: f64,
    pub temperature: f64,
}

impl BathParams {
    /// Relaxation prefactor `φ²/4`.
    pub fn transverse_weight(&self) -> f64 {
        self.phi * self.phi / 4.0
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub field: &'static str,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

/// All violated invariants of a parameter record; empty means usable.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn len(&self) -> usize {
        self.violations.len()
    }

    fn check(&mut self, ok: bool, field: &'static str, message: impl Into<String>) {
        if !ok {
            self.violations.push(Violation {
                field,
                message: message.into(),
            });
        }
    }

    fn finite(&mut self, value: f64, field: &'static str) -> bool {
        let ok = value.is_finite();
        self.check(ok, field, format!("{value} is not finite"));
        ok
    }

    pub fn into_result(self) -> Result<()> {
        if self.is_empty() {
            return Ok(());
        }
        let msg = self
            .violations
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join("; ");
        Err(Error::InvalidParameter(msg))
    }
}

pub trait Validate {
    fn validate(&self) -> ValidationReport;
}

impl Validate for QubitParams {
    fn validate(&self) -> ValidationReport {
        let mut r = ValidationReport::default();
        if r.finite(self.delta, "delta") {
            r.check(self.delta >= 0.0, "delta", "must be >= 0");
        }
        r.finite(self.eps0, "eps0");
        if r.finite(self.gamma2, "gamma2") {
            r.check(self.gamma2 >= 0.0, "gamma2", "must be >= 0");
        }
        r
    }
}

impl Validate for DriveField {
    fn validate(&self) -> ValidationReport {
        let mut r = ValidationReport::default();
        if r.finite(self.amp, "amp") {
            r.check(self.amp >= 0.0, "amp", "must be >= 0");
        }
        if r.finite(self.omega, "omega") {
            r.check(self.omega > 0.0, "omega", "must be > 0");
        }
        r
    }
}

impl Validate for WeakField {
    fn validate(&self) -> ValidationReport {
        let mut r = ValidationReport::default();
        let a = r.finite(self.amp_tilde, "amp_tilde");
        let w = r.finite(self.omega_tilde, "omega_tilde");
        if a {
            r.check(self.amp_tilde >= 0.0, "amp_tilde", "must be >= 0");
        }
        if w {
            r.check(self.omega_tilde > 0.0, "omega_tilde", "must be > 0");
        }
        if a && w {
            r.check(
                self.amp_tilde < self.omega_tilde,
                "amp_tilde",
                "weak tone requires amp_tilde < omega_tilde",
            );
        }
        r
    }
}

impl Validate for BathParams {
    fn validate(&self) -> ValidationReport {
        let mut r = ValidationReport::default();
        if r.finite(self.alpha, "alpha") {
            r.check(self.alpha >= 0.0, "alpha", "must be >= 0");
        }
        if r.finite(self.phi, "phi") {
            r.check(self.phi >= 0.0, "phi", "must be >= 0");
        }
        if r.finite(self.omega_c, "omega_c") {
            r.check(self.omega_c > 0.0, "omega_c", "must be > 0");
        }
        if r.finite(self.temperature, "temperature") {
            r.check(self.temperature >= 0.0, "temperature", "must be >= 0");
        }
        r
    }
}
