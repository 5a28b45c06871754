use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::Serialize;

use super::{check_rel_tol, OracleReport};
use crate::error::{Error, Result};
use crate::params::{BathParams, DriveField, Validate};
use crate::rates::relax_rates_ohmic;
use crate::spectral::ohmic;

// Gaussian τ-window width in units of 1/min(ω_c, ω)
const WINDOW_SCALE: f64 = 600.0;
// window support in standard deviations
const WINDOW_SPAN: f64 = 7.0;
// largest FFT length accepted
const MAX_LOG2_N: u32 = 24;

/// Trapezoid points per drive period for the phase average at `z = A/ω`.
pub fn kernel_points(z: f64) -> usize {
    2 * (2.0 * z.abs()).ceil() as usize + 48
}

/// `g(τ) = (ω/2π) ∫₀^{2π/ω} dt exp(i z [sin ω(t + τ) - sin ωt])`, averaged with
/// the periodic trapezoid rule.
pub fn phase_averaged_kernel(z: f64, omega: f64, taus: &[f64]) -> Vec<Complex64> {
    let m = kernel_points(z);
    let phases: Vec<(f64, f64)> = (0..m).map(|k| (TAU * k as f64 / m as f64).sin_cos()).collect();
    taus.par_iter()
        .with_min_len(1024)
        .map(|&tau| {
            let (s, c) = (omega * tau).sin_cos();
            let mut acc = Complex64::new(0.0, 0.0);
            for &(sp, cp) in &phases {
                // sin(φ + ωτ) - sin φ
                let diff = sp * c + cp * s - sp;
                acc += Complex64::from_polar(1.0, z * diff);
            }
            acc / m as f64
        })
        .collect()
}

/// Discretization used by the relaxation oracle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RelaxGrid {
    /// τ step (ns).
    pub h: f64,
    /// Number of τ samples (power of two).
    pub n: usize,
    /// Gaussian window width (ns).
    pub sigma: f64,
    /// Frequency band the samples resolve without aliasing (rad/ns).
    pub band: f64,
    /// Imaginary part of the τ-integral (should vanish).
    pub imaginary: f64,
}

/// `Γ₁₀ = (φ²/4)(1/2π) ∫ dτ e^{iε₀τ} g(τ) C(-τ)` with `C(-τ) = ∫ dω′ e^{iω′τ} S(ω′)`.
///
/// The τ-integral runs under a Gaussian window of width `600/min(ω_c, ω)`;
/// `C(-τ)` on the τ grid comes from one FFT of `S` sampled at `2π/(N h)`.
pub fn relax_oracle_g10(b: &BathParams, d: &DriveField, eps0: f64) -> Result<(f64, RelaxGrid)> {
    b.validate().into_result()?;
    d.validate().into_result()?;
    if !eps0.is_finite() {
        return Err(Error::InvalidParameter(format!("eps0 {eps0} is not finite")));
    }
    let w_s = 10.0 * b.omega_c.max(b.temperature);
    let band = w_s + eps0.abs() + d.amp + 15.0 * d.omega;
    let h = TAU / (1.2 * band);
    let sigma = WINDOW_SCALE / b.omega_c.min(d.omega);
    let span = 2.0 * WINDOW_SPAN * sigma / h;
    let log2 = span.log2().ceil().max(4.0) as u32;
    if log2 > MAX_LOG2_N {
        return Err(Error::UnsupportedRange(format!(
            "relaxation oracle needs 2^{log2} samples; truncation not reached"
        )));
    }
    let n = 1usize << log2;
    let dw = TAU / (n as f64 * h);
    let signed = |k: usize| if k < n / 2 { k as f64 } else { k as f64 - n as f64 };

    let mut corr: Vec<Complex64> = (0..n).map(|k| Complex64::new(ohmic(b, signed(k) * dw), 0.0)).collect();
    FftPlanner::new().plan_fft_inverse(n).process(&mut corr);

    let taus: Vec<f64> = (0..n).map(|j| signed(j) * h).collect();
    let g = phase_averaged_kernel(d.ratio(), d.omega, &taus);
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..n {
        let tau = taus[j];
        let window = (-0.5 * (tau / sigma).powi(2)).exp();
        acc += Complex64::from_polar(window, eps0 * tau) * g[j] * corr[j];
    }
    let integral = acc * (h * dw) / TAU;
    let weight = b.transverse_weight();
    Ok((
        weight * integral.re,
        RelaxGrid {
            h,
            n,
            sigma,
            band,
            imaginary: weight * integral.im,
        },
    ))
}

/// Compares the Ohmic `Γ₁₀` against the Bessel-free τ-domain evaluation.
pub fn check_relax_rate(b: &BathParams, d: &DriveField, eps0: f64, rel_tol: f64) -> Result<OracleReport> {
    check_rel_tol(rel_tol)?;
    let (closed, _) = relax_rates_ohmic(b, d, eps0)?;
    let (oracle, grid) = relax_oracle_g10(b, d, eps0)?;
    let mut report = OracleReport::new("g10", closed, oracle, rel_tol)
        .param("alpha", b.alpha)
        .param("phi", b.phi)
        .param("omega_c", b.omega_c)
        .param("temperature", b.temperature)
        .param("amp", d.amp)
        .param("omega", d.omega)
        .param("eps0", eps0)
        .tol("tau_step_ns", grid.h)
        .tol("tau_samples", grid.n as f64)
        .tol("window_sigma_ns", grid.sigma)
        .tol("band_rad_per_ns", grid.band)
        .tol("phase_points", kernel_points(d.ratio()) as f64);
    report.notes.push(format!(
        "tau integral under a Gaussian window of width {:.6e} ns in place of a |C| threshold; imaginary part {:.3e}",
        grid.sigma, grid.imaginary
    ));
    Ok(report)
}
