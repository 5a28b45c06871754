//! Closed-form incoherent transition rates and the resonance predictor.
//!
//! Every sum over photon sidebands `n` runs over `|n| <= n_max` with
//! `n_max = truncation_order(A, ω)`. The tunnelling rate is written with
//! `(ε₀ + nω)`; summing over all `n` of both signs makes this identical to the
//! `(ε₀ - nω)` form.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{BathParams, DriveField, QubitParams, Validate, WeakField};
use crate::specfun::bessel_row;
use crate::spectral::{gamma2_lowfreq, ohmic, polaron_shift, SpectralModel};

/// Ratio `ω̃/ω` below which the weak-tone rates are flagged.
pub const ROII_MIN_FREQ_RATIO: f64 = 5.0;

/// `⌈A/ω⌉ + max(20, ⌈5 (A/ω)^{1/3}⌉)`.
pub fn truncation_order(amp: f64, omega: f64) -> usize {
    let z = (amp / omega).abs();
    z.ceil() as usize + 20usize.max((5.0 * z.cbrt()).ceil() as usize)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// `|1⟩ → |0⟩`
    OneToZero,
    /// `|0⟩ → |1⟩`
    ZeroToOne,
}

impl Direction {
    fn signed(self, eps0: f64) -> f64 {
        match self {
            Direction::OneToZero => eps0,
            Direction::ZeroToOne => -eps0,
        }
    }
}

/// Squared Bessel weights `J_n²(A/ω)` for one drive.
#[derive(Debug, Clone, PartialEq)]
pub struct Sidebands {
    omega: f64,
    n_max: usize,
    weights: Vec<f64>,
}

impl Sidebands {
    pub fn new(d: &DriveField) -> Result<Self> {
        d.validate().into_result()?;
        let n_max = truncation_order(d.amp, d.omega);
        let row = bessel_row(d.ratio(), n_max)?;
        Ok(Self {
            omega: d.omega,
            n_max,
            weights: row.values().iter().map(|j| j * j).collect(),
        })
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// `J_n²(A/ω)`; zero beyond `n_max`.
    pub fn weight(&self, n: i64) -> f64 {
        if n.unsigned_abs() as usize > self.n_max {
            return 0.0;
        }
        self.weights[(n + self.n_max as i64) as usize]
    }

    /// `(n, J_n², nω)` for every kept sideband.
    pub fn iter(&self) -> impl Iterator<Item = (i64, f64, f64)> + '_ {
        let n_max = self.n_max as i64;
        self.weights.iter().enumerate().map(move |(k, &w)| {
            let n = k as i64 - n_max;
            (n, w, n as f64 * self.omega)
        })
    }
}

/// The four incoherent rates at one operating point (1/ns).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct RateSet {
    pub w10: f64,
    pub w01: f64,
    pub g10: f64,
    pub g01: f64,
    /// Sideband truncation order used; zero when no sum was needed.
    pub n_max: usize,
}

impl RateSet {
    pub fn total(&self) -> f64 {
        self.w10 + self.w01 + self.g10 + self.g01
    }

    /// Rates of two independent channels add.
    pub fn combine(&self, other: &RateSet) -> RateSet {
        RateSet {
            w10: self.w10 + other.w10,
            w01: self.w01 + other.w01,
            g10: self.g10 + other.g10,
            g01: self.g01 + other.g01,
            n_max: self.n_max.max(other.n_max),
        }
    }

    pub fn check(&self) -> Result<()> {
        for (name, v) in [
            ("w10", self.w10),
            ("w01", self.w01),
            ("g10", self.g10),
            ("g01", self.g01),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "rate {name} = {v} must be finite and >= 0"
                )));
            }
        }
        Ok(())
    }
}

fn require_gamma2(q: &QubitParams) -> Result<()> {
    q.validate().into_result()?;
    if q.gamma2 <= 0.0 {
        return Err(Error::InvalidParameter(
            "gamma2 must be > 0 for Lorentzian rates".into(),
        ));
    }
    Ok(())
}

fn lorentzian_sum(eps: f64, gamma2: f64, sb: &Sidebands, shift: f64) -> f64 {
    let g2 = gamma2 * gamma2;
    sb.iter()
        .map(|(_, w, nw)| {
            let d = eps + nw + shift;
            w * gamma2 / (d * d + g2)
        })
        .sum()
}

/// Lorentzian tunnelling rate with precomputed sidebands.
pub fn w_rate_lorentzian_with(q: &QubitParams, sb: &Sidebands, direction: Direction) -> f64 {
    let eps = direction.signed(q.eps0);
    0.5 * q.delta * q.delta * lorentzian_sum(eps, q.gamma2, sb, 0.0)
}

/// `W = (Δ²/2) Σ_n Γ₂ J_n²(A/ω) / ((ε₀ + nω)² + Γ₂²)`, with `W₀₁(ε₀) = W₁₀(-ε₀)`.
pub fn w_rate_lorentzian(q: &QubitParams, d: &DriveField, direction: Direction) -> Result<f64> {
    require_gamma2(q)?;
    let sb = Sidebands::new(d)?;
    Ok(w_rate_lorentzian_with(q, &sb, direction))
}

/// Low-frequency noise parameters entering the Gaussian line shape at time `t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianNoise {
    pub gamma2: f64,
    pub polaron_shift: f64,
}

impl GaussianNoise {
    pub fn from_model(model: &SpectralModel, t: f64) -> Result<Self> {
        let gamma2 = gamma2_lowfreq(model)?;
        if gamma2 <= 0.0 {
            return Err(Error::InvalidParameter(
                "Gaussian rate needs a 1/f spectrum with nonzero weight".into(),
            ));
        }
        Ok(Self {
            gamma2,
            polaron_shift: polaron_shift(model, t)?,
        })
    }
}

/// Gaussian tunnelling rate with precomputed sidebands and noise parameters.
pub fn w_rate_gaussian_with(delta: f64, eps0: f64, sb: &Sidebands, noise: &GaussianNoise, direction: Direction) -> f64 {
    let eps = direction.signed(eps0);
    let g = noise.gamma2;
    let prefactor = (PI / 8.0).sqrt() * delta * delta / g;
    let sum: f64 = sb
        .iter()
        .map(|(_, w, nw)| {
            let d = eps + nw + noise.polaron_shift;
            w * (-d * d / (2.0 * g * g)).exp()
        })
        .sum();
    prefactor * sum
}

/// `√(π/8) (Δ²/Γ₂) Σ_n J_n²(A/ω) exp(-(ε₀ + nω + ε_p(t))² / 2Γ₂²)` with
/// `Γ₂` and `ε_p(t)` taken from the 1/f model; `q.gamma2` is not used.
pub fn w_rate_gaussian(
    q: &QubitParams,
    d: &DriveField,
    model: &SpectralModel,
    t: f64,
    direction: Direction,
) -> Result<f64> {
    q.validate().into_result()?;
    let noise = GaussianNoise::from_model(model, t)?;
    let sb = Sidebands::new(d)?;
    Ok(w_rate_gaussian_with(q.delta, q.eps0, &sb, &noise, direction))
}

/// Ohmic relaxation rates `(Γ₁₀, Γ₀₁)` with precomputed sidebands.
pub fn relax_rates_ohmic_with(b: &BathParams, sb: &Sidebands, eps0: f64) -> (f64, f64) {
    let weight = b.transverse_weight();
    let mut g10 = 0.0;
    let mut g01 = 0.0;
    for (_, w, nw) in sb.iter() {
        g01 += w * ohmic(b, eps0 - nw);
        g10 += w * ohmic(b, -eps0 - nw);
    }
    (weight * g10, weight * g01)
}

/// `Γ₀₁ = (φ²/4) Σ_n J_n²(A/ω) S(ε₀ - nω)` and `Γ₁₀(ε₀) = Γ₀₁(-ε₀)` for the
/// Ohmic bath. Returns `(Γ₁₀, Γ₀₁)`.
pub fn relax_rates_ohmic(b: &BathParams, d: &DriveField, eps0: f64) -> Result<(f64, f64)> {
    b.validate().into_result()?;
    if !eps0.is_finite() {
        return Err(Error::InvalidParameter(format!("eps0 {eps0} is not finite")));
    }
    let sb = Sidebands::new(d)?;
    Ok(relax_rates_ohmic_with(b, &sb, eps0))
}

/// Default resonance-matching tolerance for the delta-mode bath.
pub fn default_match_tol(omega: f64) -> f64 {
    omega / 1e3
}

fn delta_match(target: f64, sb: &Sidebands, tol: f64, label: &str) -> Result<f64> {
    let mut hit: Option<(i64, f64)> = None;
    for (n, w, nw) in sb.iter() {
        if (target - nw).abs() <= tol {
            if let Some((m, _)) = hit {
                return Err(Error::AmbiguousResonance(format!(
                    "{label}: sidebands n={m} and n={n} both within {tol} of the resonance"
                )));
            }
            hit = Some((n, w));
        }
    }
    Ok(hit.map_or(0.0, |(_, w)| w))
}

/// Delta-mode relaxation rates with precomputed sidebands.
pub fn relax_rates_delta_with(b: &BathParams, sb: &Sidebands, eps0: f64, match_tol: f64) -> Result<(f64, f64)> {
    let scale = b.transverse_weight() * b.alpha * b.omega_c;
    let g01 = delta_match(eps0 - b.omega_c, sb, match_tol, "g01")?;
    let g10 = delta_match(eps0 + b.omega_c, sb, match_tol, "g10")?;
    Ok((scale * g10, scale * g01))
}

/// Single-mode bath: `Γ₀₁ = (φ²αω_c/4) J_n²(A/ω)` when `|ε₀ - ω_c - nω| <= match_tol`
/// for some `n`, and `Γ₁₀` likewise at `ε₀ + ω_c - nω`. Returns `(Γ₁₀, Γ₀₁)`.
pub fn relax_rates_delta(b: &BathParams, d: &DriveField, eps0: f64, match_tol: f64) -> Result<(f64, f64)> {
    b.validate().into_result()?;
    if !(match_tol > 0.0 && match_tol.is_finite()) {
        return Err(Error::InvalidParameter(format!("match_tol {match_tol} must be > 0")));
    }
    if !eps0.is_finite() {
        return Err(Error::InvalidParameter(format!("eps0 {eps0} is not finite")));
    }
    let sb = Sidebands::new(d)?;
    relax_rates_delta_with(b, &sb, eps0, match_tol)
}

/// Constant upward rate with the downward rate fixed by detailed balance:
/// `(Γ₀₁ e^{-ε₀/T}, Γ₀₁)`.
pub fn relax_rates_phenomenological(gamma01: f64, eps0: f64, temperature: f64) -> Result<(f64, f64)> {
    if !(gamma01.is_finite() && gamma01 >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "gamma01 {gamma01} must be finite and >= 0"
        )));
    }
    if !(temperature.is_finite() && temperature > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "temperature {temperature} must be > 0"
        )));
    }
    let g10 = gamma01 * (-eps0 / temperature).exp();
    if !g10.is_finite() {
        return Err(Error::UnsupportedRange(format!(
            "e^(-eps0/T) overflows at eps0 = {eps0}, T = {temperature}"
        )));
    }
    Ok((g10, gamma01))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RoiiCoupling {
    /// Both effective couplings.
    Both,
    /// Only the coupling at `ε₀ = ω̃`: the `(ε₀ + nω - ω̃)` Lorentzians.
    APrimeOnly,
    /// Only the coupling at `ε₀ = -ω̃`: the `(ε₀ + nω + ω̃)` Lorentzians.
    BPrimeOnly,
}

/// Weak-tone rate with precomputed sidebands. Both directions share this value.
pub fn roii_rates_with(q: &QubitParams, sb: &Sidebands, wf: &WeakField, which: RoiiCoupling) -> f64 {
    let j1 = crate::specfun::bessel_j(1, wf.ratio()).unwrap_or(0.0);
    let prefactor = 0.5 * q.delta * q.delta * j1 * j1;
    let a_prime = || prefactor * lorentzian_sum(q.eps0, q.gamma2, sb, -wf.omega_tilde);
    let b_prime = || prefactor * lorentzian_sum(q.eps0, q.gamma2, sb, wf.omega_tilde);
    match which {
        RoiiCoupling::APrimeOnly => a_prime(),
        RoiiCoupling::BPrimeOnly => b_prime(),
        RoiiCoupling::Both => a_prime() + b_prime(),
    }
}

/// Rate through the two effective couplings created by the weak tone:
/// `(Δ² J₁²(Ã/ω̃)/2) Σ_n Γ₂ J_n²(A/ω) [L(ε₀ + nω + ω̃) + L(ε₀ + nω - ω̃)]`
/// with `L(x) = 1/(x² + Γ₂²)`. `W₁₀ = W₀₁`.
pub fn roii_rates(q: &QubitParams, d: &DriveField, wf: &WeakField, which: RoiiCoupling) -> Result<f64> {
    require_gamma2(q)?;
    wf.validate().into_result()?;
    if wf.ratio() > crate::specfun::MAX_ABS_ARG {
        return Err(Error::UnsupportedRange("weak-tone ratio too large".into()));
    }
    let sb = Sidebands::new(d)?;
    Ok(roii_rates_with(q, &sb, wf, which))
}

/// Warning text when `ω̃ < 5ω`.
pub fn roii_regime_warning(d: &DriveField, wf: &WeakField) -> Option<String> {
    (wf.omega_tilde < ROII_MIN_FREQ_RATIO * d.omega).then(|| {
        format!(
            "weak-tone frequency {:.4} rad/ns is below {}x the drive frequency {:.4} rad/ns",
            wf.omega_tilde, ROII_MIN_FREQ_RATIO, d.omega
        )
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum ResonanceMode {
    /// Relaxation-induced, bath mode at `omega_c`.
    Rii { omega_c: f64 },
    /// Weak-tone induced, tone at `omega_tilde`.
    Roii { omega_tilde: f64 },
}

impl ResonanceMode {
    fn offset(&self) -> f64 {
        match *self {
            ResonanceMode::Rii { omega_c } => omega_c,
            ResonanceMode::Roii { omega_tilde } => omega_tilde,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Resonance {
    pub n: i64,
    pub eps0: f64,
}

/// Phases per period and resonant detunings inside a window.
///
/// In RII mode `resonant_detunings_from_1to0` holds `ε₀ = nω - ω_c` and
/// `resonant_detunings_from_0to1` holds `ε₀ = nω + ω_c`. In ROII mode they
/// hold the `nω - ω̃` and `nω + ω̃` branches.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResonanceReport {
    pub mode: ResonanceMode,
    pub omega: f64,
    pub window: (f64, f64),
    pub theta_a: f64,
    pub theta_b: f64,
    pub resonant_detunings_from_1to0: Vec<Resonance>,
    pub resonant_detunings_from_0to1: Vec<Resonance>,
    pub n_range: (i64, i64),
}

fn branch(omega: f64, offset: f64, lo: f64, hi: f64) -> (Vec<Resonance>, i64, i64) {
    let n_lo = ((lo - offset) / omega).floor() as i64 - 1;
    let n_hi = ((hi - offset) / omega).ceil() as i64 + 1;
    let list = (n_lo..=n_hi)
        .map(|n| Resonance {
            n,
            eps0: n as f64 * omega + offset,
        })
        .filter(|r| r.eps0 >= lo && r.eps0 <= hi)
        .collect();
    (list, n_lo, n_hi)
}

/// `θ_A = 2π(ε₀ + ω_c)/ω`, `θ_B = 2π(-ε₀ + ω_c)/ω` at the window midpoint, and
/// every resonance `ε₀ = nω ∓ ω_c` (or `nω ∓ ω̃`) inside `[lo, hi]`.
pub fn resonance_report(d: &DriveField, mode: ResonanceMode, window: (f64, f64)) -> Result<ResonanceReport> {
    d.validate().into_result()?;
    let (lo, hi) = window;
    if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
        return Err(Error::InvalidParameter(format!(
            "window [{lo}, {hi}] must be finite and ordered"
        )));
    }
    let off = mode.offset();
    let mid = 0.5 * (lo + hi);
    let (down, a0, a1) = branch(d.omega, -off, lo, hi);
    let (up, b0, b1) = branch(d.omega, off, lo, hi);
    Ok(ResonanceReport {
        mode,
        omega: d.omega,
        window,
        theta_a: TAU * (mid + off) / d.omega,
        theta_b: TAU * (-mid + off) / d.omega,
        resonant_detunings_from_1to0: down,
        resonant_detunings_from_0to1: up,
        n_range: (a0.min(b0), a1.max(b1)),
    })
}
