//! Two-state rate equations `dρ₀₀/dt = (W₁₀ + Γ₁₀) ρ₁₁ - (W₀₁ + Γ₀₁) ρ₀₀`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rates::RateSet;

/// Largest excursion outside `[0, 1]` that is clamped silently.
pub const CLAMP_LIMIT: f64 = 1e-10;
/// Relative tolerance under which `W₁₀` and `W₀₁` count as equal.
pub const SYMMETRIC_W_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PopulationState {
    pub p00: f64,
    pub p11: f64,
    pub time: f64,
}

impl PopulationState {
    /// Builds a state from `p00`, clamping rounding-level excursions.
    pub fn new(p00: f64, time: f64) -> Result<Self> {
        let p = clamp_population(p00)?;
        Ok(Self {
            p00: p,
            p11: 1.0 - p,
            time,
        })
    }
}

fn clamp_population(p: f64) -> Result<f64> {
    if !p.is_finite() || !(-CLAMP_LIMIT..=1.0 + CLAMP_LIMIT).contains(&p) {
        return Err(Error::Integration(format!(
            "population {p} outside [0, 1] beyond the clamp limit"
        )));
    }
    Ok(p.clamp(0.0, 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StationaryBranch {
    /// `W₁₀ = W₀₁`: `(W₁₀ + Γ₁₀)/(Γ₁₀ + 2W₁₀ + Γ₀₁)`.
    Symmetric,
    /// General balance `(W₁₀ + Γ₁₀)/(W₁₀ + W₀₁ + Γ₁₀ + Γ₀₁)`.
    GeneralBalance,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Stationary {
    pub p00: f64,
    /// Relaxation rate `R` towards `p00`.
    pub rate: f64,
    pub branch: StationaryBranch,
}

fn symmetric_w(r: &RateSet) -> bool {
    (r.w10 - r.w01).abs() <= SYMMETRIC_W_TOL * r.w10.max(r.w01)
}

/// Stationary `ρ₀₀` and the rate `R` at which it is approached.
pub fn stationary_with_branch(r: &RateSet) -> Result<Stationary> {
    r.check()?;
    if r.total() <= 0.0 {
        return Err(Error::UndefinedStationary);
    }
    let (rate, branch) = if symmetric_w(r) {
        (r.g10 + 2.0 * r.w10 + r.g01, StationaryBranch::Symmetric)
    } else {
        (r.total(), StationaryBranch::GeneralBalance)
    };
    Ok(Stationary {
        p00: clamp_population((r.w10 + r.g10) / rate)?,
        rate,
        branch,
    })
}

/// Stationary `ρ₀₀`.
pub fn stationary(r: &RateSet) -> Result<f64> {
    stationary_with_branch(r).map(|s| s.p00)
}

/// Stationary `ρ₀₀ = Γ₁₀/(Γ₁₀ + Γ₀₁)` without tunnelling.
pub fn stationary_rii(g10: f64, g01: f64) -> Result<f64> {
    if !(g10.is_finite() && g01.is_finite() && g10 >= 0.0 && g01 >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "rates ({g10}, {g01}) must be finite and >= 0"
        )));
    }
    let sum = g10 + g01;
    if sum <= 0.0 {
        return Err(Error::UndefinedStationary);
    }
    clamp_population(g10 / sum)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "p00", rename_all = "snake_case")]
pub enum InitialPopulation {
    /// `ρ₀₀(0) = tanh(ε₀/2T)`.
    PaperTanh,
    /// `ρ₀₀(0) = 1/(1 + e^{ε₀/T})`.
    Boltzmann,
    Custom(f64),
}

impl InitialPopulation {
    pub fn p00(&self, eps0: f64, temperature: f64) -> Result<f64> {
        if !(temperature.is_finite() && temperature >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "temperature {temperature} must be >= 0"
            )));
        }
        let p = match *self {
            InitialPopulation::PaperTanh => {
                if eps0 < 0.0 {
                    return Err(Error::InvalidParameter(format!(
                        "tanh initial population is negative at eps0 = {eps0}"
                    )));
                }
                if eps0 == 0.0 {
                    0.0
                } else {
                    (eps0 / (2.0 * temperature)).tanh()
                }
            }
            InitialPopulation::Boltzmann => {
                if temperature == 0.0 {
                    match eps0.partial_cmp(&0.0) {
                        Some(std::cmp::Ordering::Greater) => 0.0,
                        Some(std::cmp::Ordering::Less) => 1.0,
                        _ => 0.5,
                    }
                } else {
                    1.0 / (1.0 + (eps0 / temperature).exp())
                }
            }
            InitialPopulation::Custom(p) => p,
        };
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidParameter(format!(
                "initial population {p} outside [0, 1]"
            )));
        }
        Ok(p)
    }
}

/// `ρ₀₀(t) = p∞ + (ρ₀₀(0) - p∞) e^{-Rt}`.
pub fn transient(
    rates: &RateSet,
    eps0: f64,
    temperature: f64,
    t: f64,
    init: InitialPopulation,
) -> Result<PopulationState> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::InvalidParameter(format!("time {t} must be >= 0")));
    }
    rates.check()?;
    let p0 = init.p00(eps0, temperature)?;
    if rates.total() <= 0.0 {
        return PopulationState::new(p0, t);
    }
    let s = stationary_with_branch(rates)?;
    PopulationState::new(s.p00 + (p0 - s.p00) * (-s.rate * t).exp(), t)
}

/// Time-dependent rates for [`integrate_rate_ode`].
pub trait RateSchedule {
    fn rates_at(&self, t: f64) -> RateSet;
}

impl<F: Fn(f64) -> RateSet> RateSchedule for F {
    fn rates_at(&self, t: f64) -> RateSet {
        self(t)
    }
}

impl RateSchedule for RateSet {
    fn rates_at(&self, _t: f64) -> RateSet {
        *self
    }
}

const MAX_SUBSTEPS: u64 = 100_000_000;

fn derivative(r: &RateSet, p: f64) -> f64 {
    (r.w10 + r.g10) * (1.0 - p) - (r.w01 + r.g01) * p
}

/// Fixed-step RK4 solution of the rate equation sampled on `t_grid`.
///
/// The step never exceeds the grid spacing or `1/(100 R_max)`, with `R_max`
/// the largest total rate seen at the ends and midpoint of each interval.
pub fn integrate_rate_ode<S: RateSchedule>(schedule: &S, p0: f64, t_grid: &[f64]) -> Result<Vec<PopulationState>> {
    if !(0.0..=1.0).contains(&p0) {
        return Err(Error::InvalidParameter(format!("p0 {p0} outside [0, 1]")));
    }
    let Some(&t_start) = t_grid.first() else {
        return Ok(Vec::new());
    };
    let checked = |t: f64| -> Result<RateSet> {
        let r = schedule.rates_at(t);
        r.check().map(|_| r)
    };
    let mut out = Vec::with_capacity(t_grid.len());
    checked(t_start)?;
    out.push(PopulationState::new(p0, t_start)?);
    let mut p = p0;
    for pair in t_grid.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        if !(b > a) || !b.is_finite() {
            return Err(Error::InvalidParameter("time grid must be strictly increasing".into()));
        }
        let span = b - a;
        let r_max = [a, 0.5 * (a + b), b]
            .iter()
            .map(|&t| checked(t).map(|r| r.total()))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        let h_max = if r_max > 0.0 { span.min(0.01 / r_max) } else { span };
        let steps = (span / h_max).ceil();
        if !(steps.is_finite() && steps as u64 <= MAX_SUBSTEPS) {
            return Err(Error::Integration(format!(
                "step size underflow on [{a}, {b}]: {steps} substeps"
            )));
        }
        let steps = (steps as u64).max(1);
        let h = span / steps as f64;
        for k in 0..steps {
            let t = a + k as f64 * h;
            let r1 = schedule.rates_at(t);
            let rm = schedule.rates_at(t + 0.5 * h);
            let r2 = schedule.rates_at(t + h);
            let k1 = derivative(&r1, p);
            let k2 = derivative(&rm, p + 0.5 * h * k1);
            let k3 = derivative(&rm, p + 0.5 * h * k2);
            let k4 = derivative(&r2, p + h * k3);
            p += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        let state = PopulationState::new(p, b)?;
        p = state.p00;
        out.push(state);
    }
    Ok(out)
}
