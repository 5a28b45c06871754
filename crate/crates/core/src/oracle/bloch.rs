use std::f64::consts::TAU;

use serde::Serialize;

use super::{check_rel_tol, OracleReport};
use crate::error::{Error, Result};
use crate::params::{DriveField, QubitParams, Validate, WeakField};
use crate::rates::{roii_rates, w_rate_lorentzian, Direction, RoiiCoupling, ROII_MIN_FREQ_RATIO};

/// Local error tolerance of the adaptive integrator.
pub const BLOCH_TOL: f64 = 1e-10;
// decay of |ρ₀₀ - 1/2| (in e-folds) at which sampling stops
const TARGET_EFOLDS: f64 = 2.0;
// hard limit on the simulated time (ns)
const MAX_TIME: f64 = 1e6;
// fit quality: rms log residual relative to the fitted log decay
const MAX_FIT_RESIDUAL: f64 = 0.05;

type State = [f64; 3];

/// Longitudinal drive `ε(t) = ε₀ + A cos ωt + Ã cos ω̃t`.
#[derive(Debug, Clone, Copy)]
struct Drive {
    eps0: f64,
    amp: f64,
    omega: f64,
    amp_tilde: f64,
    omega_tilde: f64,
}

impl Drive {
    fn eps(&self, t: f64) -> f64 {
        self.eps0 + self.amp * (self.omega * t).cos() + self.amp_tilde * (self.omega_tilde * t).cos()
    }
}

// Bloch vector of H = -(Δ/2)σx - (ε/2)σz with dephasing Γ₂ on the coherences:
// ṙ = Ω × r - Γ₂(x, y, 0), Ω = (-Δ, 0, -ε)
fn rhs(delta: f64, gamma2: f64, drive: &Drive, t: f64, r: &State) -> State {
    let eps = drive.eps(t);
    let [x, y, z] = *r;
    [eps * y - gamma2 * x, -eps * x + delta * z - gamma2 * y, -delta * y]
}

// Dormand-Prince 5(4) tableau
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

struct Integrator {
    delta: f64,
    gamma2: f64,
    drive: Drive,
    h: f64,
    h_max: f64,
    steps: u64,
}

impl Integrator {
    /// Advances `r` from `t0` to exactly `t1`.
    fn advance(&mut self, r: &mut State, t0: f64, t1: f64) -> Result<()> {
        let mut t = t0;
        while t < t1 {
            let proposal = self.h.min(self.h_max);
            let landing = proposal >= t1 - t;
            let mut h = if landing { t1 - t } else { proposal };
            loop {
                let mut k = [[0.0; 3]; 7];
                for s in 0..7 {
                    let mut y = *r;
                    for (j, kj) in k.iter().enumerate().take(s) {
                        for i in 0..3 {
                            y[i] += h * A[s][j] * kj[i];
                        }
                    }
                    k[s] = rhs(self.delta, self.gamma2, &self.drive, t + C[s] * h, &y);
                }
                let mut next = *r;
                let mut err: f64 = 0.0;
                for i in 0..3 {
                    let mut d5 = 0.0;
                    let mut d4 = 0.0;
                    for s in 0..7 {
                        d5 += B5[s] * k[s][i];
                        d4 += B4[s] * k[s][i];
                    }
                    next[i] += h * d5;
                    let scale = BLOCH_TOL * (1.0 + r[i].abs().max(next[i].abs()));
                    err = err.max((h * (d5 - d4)).abs() / scale);
                }
                self.steps += 1;
                let factor = if err == 0.0 {
                    5.0
                } else {
                    (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
                };
                if err <= 1.0 {
                    *r = next;
                    if landing && h == t1 - t {
                        t = t1;
                    } else {
                        t += h;
                        self.h = h * factor;
                    }
                    break;
                }
                h *= factor;
                if h < 1e-12 * t1.max(1.0) {
                    return Err(Error::Integration(format!("step size underflow at t = {t}")));
                }
            }
        }
        Ok(())
    }
}

/// Stroboscopic record of `z = ρ₁₁ - ρ₀₀`, sampled every drive period.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlochDecay {
    pub times: Vec<f64>,
    pub z: Vec<f64>,
    /// Largest Bloch-vector length seen (≤ 1 for a physical state).
    pub max_norm: f64,
    pub steps: u64,
}

fn simulate(q: &QubitParams, drive: Drive) -> Result<BlochDecay> {
    let period = TAU / drive.omega;
    let fit_start = 5.0 / q.gamma2;
    let min_end = fit_start + 3.0 * period;
    let mut integ = Integrator {
        delta: q.delta,
        gamma2: q.gamma2,
        drive,
        h: period / 100.0,
        h_max: period / 8.0,
        steps: 0,
    };
    let mut r: State = [0.0, 0.0, 1.0];
    let mut out = BlochDecay {
        times: vec![0.0],
        z: vec![1.0],
        max_norm: 1.0,
        steps: 0,
    };
    let mut k = 0u64;
    loop {
        let (t0, t1) = (k as f64 * period, (k + 1) as f64 * period);
        integ.advance(&mut r, t0, t1)?;
        k += 1;
        let norm = (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt();
        out.max_norm = out.max_norm.max(norm);
        out.times.push(t1);
        out.z.push(r[2]);
        if t1 >= min_end {
            let decayed = (1.0 / r[2].abs().max(1e-300)).ln() >= TARGET_EFOLDS;
            let frozen = q.delta == 0.0;
            if decayed || frozen || t1 >= MAX_TIME {
                break;
            }
        }
    }
    out.steps = integ.steps;
    Ok(out)
}

// least-squares slope of ln|z| against t over samples with t >= start
fn fit_rate(decay: &BlochDecay, start: f64) -> Result<(f64, f64)> {
    let pts: Vec<(f64, f64)> = decay
        .times
        .iter()
        .zip(&decay.z)
        .filter(|(t, z)| **t >= start && z.abs() > 1e-12)
        .map(|(t, z)| (*t, z.abs().ln()))
        .collect();
    if pts.len() < 4 {
        return Err(Error::OracleInconclusive(format!(
            "only {} samples in the fit window",
            pts.len()
        )));
    }
    let n = pts.len() as f64;
    let mt = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mt).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mt) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let rms = (pts.iter().map(|p| (p.1 - my - slope * (p.0 - mt)).powi(2)).sum::<f64>() / n).sqrt();
    let drop = (slope * (pts[pts.len() - 1].0 - pts[0].0)).abs();
    let relative = if drop > 0.0 { rms / drop } else { 0.0 };
    if rms > 1e-9 && relative > MAX_FIT_RESIDUAL {
        return Err(Error::OracleInconclusive(format!(
            "log-linear fit residual {relative:.3e} of the fitted decay"
        )));
    }
    Ok((-slope, relative))
}

fn run(q: &QubitParams, drive: Drive) -> Result<(f64, BlochDecay, f64)> {
    let decay = simulate(q, drive)?;
    if decay.max_norm > 1.0 + 1e-8 {
        return Err(Error::Integration(format!(
            "Bloch vector left the unit ball: |r| = {}",
            decay.max_norm
        )));
    }
    let (r, resid) = fit_rate(&decay, 5.0 / q.gamma2)?;
    // ρ₀₀ - 1/2 decays at W₁₀ + W₀₁ = 2W
    Ok((0.5 * r.max(0.0), decay, resid))
}

fn annotate(mut report: OracleReport, q: &QubitParams, decay: &BlochDecay, resid: f64) -> OracleReport {
    report = report
        .param("delta", q.delta)
        .param("eps0", q.eps0)
        .param("gamma2", q.gamma2)
        .tol("integrator_local_error", BLOCH_TOL)
        .tol("fit_start_ns", 5.0 / q.gamma2)
        .tol("fit_end_ns", decay.times.last().copied().unwrap_or(0.0))
        .tol("fit_relative_residual", resid)
        .tol("max_bloch_norm", decay.max_norm);
    if q.gamma2 < 5.0 * q.delta {
        report
            .notes
            .push("gamma2 is not much larger than delta; the rate picture is marginal".into());
    }
    report
}

fn validate(q: &QubitParams, d: &DriveField) -> Result<()> {
    q.validate().into_result()?;
    d.validate().into_result()?;
    if q.gamma2 <= 0.0 {
        return Err(Error::InvalidParameter("gamma2 must be > 0".into()));
    }
    Ok(())
}

/// Compares the Lorentzian tunnelling rate with the decay of the driven Bloch
/// equations sampled once per drive period.
pub fn check_lzs_rate(q: &QubitParams, d: &DriveField, rel_tol: f64) -> Result<OracleReport> {
    check_rel_tol(rel_tol)?;
    validate(q, d)?;
    let closed = w_rate_lorentzian(q, d, Direction::OneToZero)?;
    let drive = Drive {
        eps0: q.eps0,
        amp: d.amp,
        omega: d.omega,
        amp_tilde: 0.0,
        omega_tilde: 0.0,
    };
    let (oracle, decay, resid) = run(q, drive)?;
    let report = OracleReport::new("w10", closed, oracle, rel_tol)
        .param("amp", d.amp)
        .param("omega", d.omega);
    Ok(annotate(report, q, &decay, resid))
}

/// As [`check_lzs_rate`] with the weak tone added to the drive, against the
/// weak-tone rate with both couplings.
pub fn check_roii_rate(q: &QubitParams, d: &DriveField, wf: &WeakField, rel_tol: f64) -> Result<OracleReport> {
    check_rel_tol(rel_tol)?;
    validate(q, d)?;
    wf.validate().into_result()?;
    let closed = roii_rates(q, d, wf, RoiiCoupling::Both)?;
    let drive = Drive {
        eps0: q.eps0,
        amp: d.amp,
        omega: d.omega,
        amp_tilde: wf.amp_tilde,
        omega_tilde: wf.omega_tilde,
    };
    let (oracle, decay, resid) = run(q, drive)?;
    let mut report = OracleReport::new("w_roii", closed, oracle, rel_tol)
        .param("amp", d.amp)
        .param("omega", d.omega)
        .param("amp_tilde", wf.amp_tilde)
        .param("omega_tilde", wf.omega_tilde);
    if wf.omega_tilde < ROII_MIN_FREQ_RATIO * d.omega {
        report.notes.push(format!(
            "omega_tilde/omega = {:.3} is below {}",
            wf.omega_tilde / d.omega,
            ROII_MIN_FREQ_RATIO
        ));
    }
    Ok(annotate(report, q, &decay, resid))
}
