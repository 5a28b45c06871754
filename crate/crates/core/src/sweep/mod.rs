//! Deterministic `ε₀ × A` grid evaluation.
//!
//! Axes are given in caption units (`X/2π` in GHz); every other field of a
//! [`SweepSpec`] is in rad/ns and ns. Rows (fixed `ε₀`) are evaluated in
//! parallel and reassembled in order, so the output does not depend on the
//! worker count.

mod ridge;
mod scenario;

use std::f64::consts::TAU;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::{stationary_with_branch, transient, InitialPopulation, StationaryBranch};
use crate::error::{Error, Result};
use crate::params::{BathParams, DriveField, QubitParams, Validate, WeakField};
use crate::rates::{
    default_match_tol, relax_rates_delta_with, relax_rates_ohmic_with, relax_rates_phenomenological, roii_rates_with,
    w_rate_gaussian_with, w_rate_lorentzian_with, Direction, GaussianNoise, RateSet, RoiiCoupling, Sidebands,
};
use crate::spectral::SpectralModel;

pub use ridge::{ridge_locate, Ridge, RidgeKind};
pub use scenario::{scenario, scenario_names, DEFAULT_AXIS, DEFAULT_COUNT};

/// Evenly spaced axis in caption units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Axis {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl Axis {
    pub fn new(min: f64, max: f64, count: usize) -> Self {
        Self { min, max, count }
    }

    /// Caption value (GHz) at index `i`.
    pub fn value(&self, i: usize) -> f64 {
        if i + 1 == self.count {
            return self.max;
        }
        self.min + (self.max - self.min) * i as f64 / (self.count - 1) as f64
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.count).map(|i| self.value(i)).collect()
    }

    /// Cell spacing in caption units.
    pub fn step(&self) -> f64 {
        (self.max - self.min) / (self.count - 1) as f64
    }

    fn check(&self, name: &str) -> Result<()> {
        if self.count < 2 || !(self.min.is_finite() && self.max.is_finite() && self.min < self.max) {
            return Err(Error::InvalidParameter(format!(
                "{name} axis needs count >= 2 and finite min < max, got [{}, {}] x {}",
                self.min, self.max, self.count
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case", deny_unknown_fields)]
pub enum LzsChannel {
    Off,
    Lorentzian,
    /// 1/f noise line shape with the polaron shift taken at `t_ns`.
    Gaussian {
        amplitude: f64,
        ir_cut: f64,
        uv_cut: f64,
        t_ns: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case", deny_unknown_fields)]
pub enum RelaxChannel {
    Off,
    Ohmic,
    /// Single-mode bath; `match_tol` defaults to `ω/1000`.
    Delta {
        match_tol: Option<f64>,
    },
    /// Constant `Γ₀₁` with `Γ₁₀ = Γ₀₁ e^{-ε₀/T}`.
    Phenomenological {
        gamma01: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "state", rename_all = "snake_case", deny_unknown_fields)]
pub enum WeakChannel {
    Off,
    On { which: RoiiCoupling },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case", deny_unknown_fields)]
pub enum TimeMode {
    Stationary,
    Transient { t_ns: f64 },
}

/// Everything needed to evaluate one population map.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub name: Option<String>,
    /// `ε₀/2π` axis (GHz).
    pub eps_axis: Axis,
    /// `A/2π` axis (GHz).
    pub amp_axis: Axis,
    pub lzs: LzsChannel,
    pub relaxation: RelaxChannel,
    pub weak_field: WeakChannel,
    pub time_mode: TimeMode,
    pub init: InitialPopulation,
    /// Δ and Γ₂; `eps0` is ignored.
    pub qubit: QubitParams,
    /// Drive frequency ω (rad/ns).
    pub omega: f64,
    pub bath: BathParams,
    pub weak: WeakField,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        self.eps_axis.check("eps")?;
        self.amp_axis.check("amp")?;
        if self.lzs == LzsChannel::Off && self.relaxation == RelaxChannel::Off && self.weak_field == WeakChannel::Off {
            return Err(Error::InvalidParameter("every rate channel is off".into()));
        }
        if !(self.omega.is_finite() && self.omega > 0.0) {
            return Err(Error::InvalidParameter(format!("omega {} must be > 0", self.omega)));
        }
        if self.amp_axis.min < 0.0 {
            return Err(Error::InvalidParameter("amplitude axis must be >= 0".into()));
        }
        self.qubit.validate().into_result()?;
        match self.relaxation {
            RelaxChannel::Off => {}
            RelaxChannel::Ohmic | RelaxChannel::Delta { .. } => self.bath.validate().into_result()?,
            RelaxChannel::Phenomenological { gamma01 } => {
                if !(gamma01.is_finite() && gamma01 >= 0.0) {
                    return Err(Error::InvalidParameter(format!("gamma01 {gamma01} must be >= 0")));
                }
                if !(self.bath.temperature > 0.0) {
                    return Err(Error::InvalidParameter(
                        "phenomenological relaxation needs temperature > 0".into(),
                    ));
                }
            }
        }
        if let RelaxChannel::Delta { match_tol: Some(t) } = self.relaxation {
            if !(t > 0.0 && t.is_finite()) {
                return Err(Error::InvalidParameter(format!("match_tol {t} must be > 0")));
            }
        }
        if (matches!(self.lzs, LzsChannel::Lorentzian) || matches!(self.weak_field, WeakChannel::On { .. }))
            && !(self.qubit.gamma2 > 0.0)
        {
            return Err(Error::InvalidParameter("gamma2 must be > 0".into()));
        }
        if let WeakChannel::On { .. } = self.weak_field {
            self.weak.validate().into_result()?;
        }
        if let LzsChannel::Gaussian { t_ns, .. } = self.lzs {
            if !(t_ns.is_finite() && t_ns >= 0.0) {
                return Err(Error::InvalidParameter(format!("t_ns {t_ns} must be >= 0")));
            }
            self.noise_model().unwrap().validate().into_result()?;
        }
        if let TimeMode::Transient { t_ns } = self.time_mode {
            if !(t_ns.is_finite() && t_ns >= 0.0) {
                return Err(Error::InvalidParameter(format!("t_ns {t_ns} must be >= 0")));
            }
        }
        Ok(())
    }

    fn noise_model(&self) -> Option<SpectralModel> {
        match self.lzs {
            LzsChannel::Gaussian {
                amplitude,
                ir_cut,
                uv_cut,
                ..
            } => Some(SpectralModel::OneOverF {
                amplitude,
                ir_cut,
                uv_cut,
            }),
            _ => None,
        }
    }

    /// `ε₀` in rad/ns at row `i`.
    pub fn eps0(&self, i_eps: usize) -> f64 {
        TAU * self.eps_axis.value(i_eps)
    }

    /// Drive at column `j`.
    pub fn drive(&self, i_amp: usize) -> DriveField {
        DriveField {
            amp: TAU * self.amp_axis.value(i_amp),
            omega: self.omega,
        }
    }

    /// This sweep with only the weak-tone channel switched to `which`.
    pub fn with_coupling(&self, which: RoiiCoupling) -> SweepSpec {
        SweepSpec {
            weak_field: WeakChannel::On { which },
            ..self.clone()
        }
    }

    fn context(&self) -> Result<Context> {
        self.validate()?;
        let noise = match self.noise_model() {
            Some(m) => {
                let LzsChannel::Gaussian { t_ns, .. } = self.lzs else {
                    unreachable!()
                };
                Some(GaussianNoise::from_model(&m, t_ns)?)
            }
            None => None,
        };
        let columns = (0..self.amp_axis.count)
            .map(|j| Sidebands::new(&self.drive(j)).map_err(|e| e.to_string()))
            .collect();
        Ok(Context { noise, columns })
    }

    /// Rates of cell `(i_eps, i_amp)`.
    pub fn cell_rates(&self, i_eps: usize, i_amp: usize) -> Result<RateSet> {
        self.validate()?;
        let ctx = self.context()?;
        let sb = ctx.columns[i_amp].clone().map_err(Error::InvalidParameter)?;
        self.rates_with(&ctx, &sb, self.eps0(i_eps))
    }

    fn rates_with(&self, ctx: &Context, sb: &Sidebands, eps0: f64) -> Result<RateSet> {
        let mut r = RateSet {
            n_max: sb.n_max(),
            ..RateSet::default()
        };
        let q = QubitParams { eps0, ..self.qubit };
        match self.lzs {
            LzsChannel::Off => {}
            LzsChannel::Lorentzian => {
                r.w10 = w_rate_lorentzian_with(&q, sb, Direction::OneToZero);
                r.w01 = w_rate_lorentzian_with(&q, sb, Direction::ZeroToOne);
            }
            LzsChannel::Gaussian { .. } => {
                let noise = ctx.noise.as_ref().expect("noise prepared");
                r.w10 = w_rate_gaussian_with(q.delta, eps0, sb, noise, Direction::OneToZero);
                r.w01 = w_rate_gaussian_with(q.delta, eps0, sb, noise, Direction::ZeroToOne);
            }
        }
        if let WeakChannel::On { which } = self.weak_field {
            let w = roii_rates_with(&q, sb, &self.weak, which);
            r.w10 += w;
            r.w01 += w;
        }
        let (g10, g01) = match self.relaxation {
            RelaxChannel::Off => (0.0, 0.0),
            RelaxChannel::Ohmic => relax_rates_ohmic_with(&self.bath, sb, eps0),
            RelaxChannel::Delta { match_tol } => {
                let tol = match_tol.unwrap_or_else(|| default_match_tol(self.omega));
                relax_rates_delta_with(&self.bath, sb, eps0, tol)?
            }
            RelaxChannel::Phenomenological { gamma01 } => {
                relax_rates_phenomenological(gamma01, eps0, self.bath.temperature)?
            }
        };
        r.g10 = g10;
        r.g01 = g01;
        r.check()?;
        Ok(r)
    }

    fn population(&self, rates: &RateSet, eps0: f64) -> Result<(f64, StationaryBranch)> {
        match self.time_mode {
            TimeMode::Stationary => {
                let s = stationary_with_branch(rates)?;
                Ok((s.p00, s.branch))
            }
            TimeMode::Transient { t_ns } => {
                let branch = stationary_with_branch(rates)
                    .map(|s| s.branch)
                    .unwrap_or(StationaryBranch::Symmetric);
                let p = transient(rates, eps0, self.bath.temperature, t_ns, self.init)?;
                Ok((p.p00, branch))
            }
        }
    }
}

struct Context {
    noise: Option<GaussianNoise>,
    columns: Vec<std::result::Result<Sidebands, String>>,
}

/// A cell that could not be evaluated; its value is NaN.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellFailure {
    pub i_eps: usize,
    pub i_amp: usize,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub spec: Option<SweepSpec>,
    pub version: String,
    /// Largest sideband truncation order over the grid.
    pub n_max: usize,
    /// Cells whose stationary population used the general-balance branch.
    pub general_balance_cells: usize,
}

/// Population map `p00[i_eps][i_amp]`, row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PatternGrid {
    pub eps_axis: Axis,
    pub amp_axis: Axis,
    pub values: Vec<f64>,
    pub failures: Vec<CellFailure>,
    pub provenance: Provenance,
}

impl PatternGrid {
    /// A grid from raw values (row-major, `eps` outer), without a spec.
    pub fn from_values(eps_axis: Axis, amp_axis: Axis, values: Vec<f64>) -> Result<Self> {
        if values.len() != eps_axis.count * amp_axis.count {
            return Err(Error::InvalidParameter(format!(
                "{} values for a {}x{} grid",
                values.len(),
                eps_axis.count,
                amp_axis.count
            )));
        }
        Ok(Self {
            eps_axis,
            amp_axis,
            values,
            failures: Vec::new(),
            provenance: Provenance {
                spec: None,
                version: crate::VERSION.to_string(),
                n_max: 0,
                general_balance_cells: 0,
            },
        })
    }

    pub fn n_eps(&self) -> usize {
        self.eps_axis.count
    }

    pub fn n_amp(&self) -> usize {
        self.amp_axis.count
    }

    pub fn get(&self, i_eps: usize, i_amp: usize) -> f64 {
        self.values[i_eps * self.amp_axis.count + i_amp]
    }

    /// Populations along `ε₀` at amplitude index `i_amp`.
    pub fn eps_slice(&self, i_amp: usize) -> Vec<f64> {
        (0..self.n_eps()).map(|i| self.get(i, i_amp)).collect()
    }

    pub fn row(&self, i_eps: usize) -> &[f64] {
        let n = self.amp_axis.count;
        &self.values[i_eps * n..(i_eps + 1) * n]
    }
}

/// Worker count from the environment or the machine.
pub fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

/// Evaluates the grid on all available cores.
pub fn evaluate(spec: &SweepSpec) -> Result<PatternGrid> {
    evaluate_with_workers(spec, default_workers())
}

/// Evaluates the grid on `workers` threads; the result is identical for any count.
pub fn evaluate_with_workers(spec: &SweepSpec, workers: usize) -> Result<PatternGrid> {
    let ctx = spec.context()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Integration(format!("thread pool: {e}")))?;
    let n_amp = spec.amp_axis.count;
    type Row = Vec<std::result::Result<(f64, StationaryBranch), String>>;
    let rows: Vec<Row> = pool.install(|| {
        (0..spec.eps_axis.count)
            .into_par_iter()
            .map(|i| {
                let eps0 = spec.eps0(i);
                (0..n_amp)
                    .map(|j| {
                        let sb = ctx.columns[j].as_ref().map_err(|e| e.clone())?;
                        spec.rates_with(&ctx, sb, eps0)
                            .and_then(|r| spec.population(&r, eps0))
                            .map_err(|e| e.to_string())
                    })
                    .collect()
            })
            .collect()
    });

    let mut values = Vec::with_capacity(spec.eps_axis.count * n_amp);
    let mut failures = Vec::new();
    let mut general = 0;
    for (i, row) in rows.into_iter().enumerate() {
        for (j, cell) in row.into_iter().enumerate() {
            match cell {
                Ok((p, branch)) => {
                    if branch == StationaryBranch::GeneralBalance {
                        general += 1;
                    }
                    values.push(p);
                }
                Err(reason) => {
                    values.push(f64::NAN);
                    failures.push(CellFailure {
                        i_eps: i,
                        i_amp: j,
                        reason,
                    });
                }
            }
        }
    }
    let n_max = ctx
        .columns
        .iter()
        .filter_map(|c| c.as_ref().ok().map(Sidebands::n_max))
        .max()
        .unwrap_or(0);
    Ok(PatternGrid {
        eps_axis: spec.eps_axis,
        amp_axis: spec.amp_axis,
        values,
        failures,
        provenance: Provenance {
            spec: Some(spec.clone()),
            version: crate::VERSION.to_string(),
            n_max,
            general_balance_cells: general,
        },
    })
}

/// Fraction of evaluated cells with `p00 > threshold` at `ε₀ > 0`.
pub fn inverted_fraction(grid: &PatternGrid, threshold: f64) -> f64 {
    let mut total = 0usize;
    let mut inverted = 0usize;
    for i in 0..grid.n_eps() {
        if grid.eps_axis.value(i) <= 0.0 {
            continue;
        }
        for &p in grid.row(i) {
            if p.is_nan() {
                continue;
            }
            total += 1;
            if p > threshold {
                inverted += 1;
            }
        }
    }
    if total == 0 {
        0.0
    } else {
        inverted as f64 / total as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(name: &str, n: usize) -> SweepSpec {
        let mut s = scenario(name).unwrap();
        s.eps_axis = Axis::new(0.0, 4.0, n);
        s.amp_axis = Axis::new(0.0, 4.0, n);
        s
    }

    #[test]
    fn axis_values() {
        let a = Axis::new(0.0, 10.0, 401);
        assert_eq!(a.value(0), 0.0);
        assert_eq!(a.value(400), 10.0);
        assert!((a.step() - 0.025).abs() < 1e-15);
        assert!(Axis::new(0.0, 1.0, 1).check("x").is_err());
        assert!(Axis::new(1.0, 1.0, 3).check("x").is_err());
    }

    #[test]
    fn zero_tunnelling_cells_are_flagged() {
        let mut s = small("fig4a", 3);
        s.relaxation = RelaxChannel::Off;
        s.qubit.delta = 0.0;
        let g = evaluate_with_workers(&s, 2).unwrap();
        assert_eq!(g.failures.len(), 9);
        assert!(g.values.iter().all(|v| v.is_nan()));
        assert!(g.failures[0].reason.contains("undefined"));
    }

    #[test]
    fn cells_are_independent() {
        let s = SweepSpec {
            eps_axis: Axis::new(0.3, 2.1, 2),
            amp_axis: Axis::new(0.5, 1.7, 2),
            ..scenario("fig4a").unwrap()
        };
        let g = evaluate_with_workers(&s, 3).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let one = SweepSpec {
                    eps_axis: Axis::new(s.eps_axis.value(i), s.eps_axis.value(i) + 1.0, 2),
                    amp_axis: Axis::new(s.amp_axis.value(j), s.amp_axis.value(j) + 1.0, 2),
                    ..s.clone()
                };
                let single = evaluate_with_workers(&one, 1).unwrap();
                assert_eq!(single.get(0, 0).to_bits(), g.get(i, j).to_bits());
            }
        }
    }

    #[test]
    fn worker_count_does_not_change_bits() {
        let s = small("fig4e", 17);
        let a = evaluate_with_workers(&s, 1).unwrap();
        let b = evaluate_with_workers(&s, 5).unwrap();
        let bits = |g: &PatternGrid| g.values.iter().map(|v| v.to_bits()).collect::<Vec<_>>();
        assert_eq!(bits(&a), bits(&b));
    }

    #[test]
    fn fig3a_has_inversion() {
        let s = small("fig3a", 41);
        let g = evaluate_with_workers(&s, 4).unwrap();
        assert!(g.failures.is_empty());
        assert!(inverted_fraction(&g, 0.5) > 0.0);
        assert!(g.values.iter().all(|v| (0.0..=1.0).contains(v)));
    }

    #[test]
    fn rate_mirror_per_cell() {
        // symmetric channels: W₀₁(ε₀) = W₁₀(-ε₀) cell by cell
        let mut s = scenario("fig7c").unwrap();
        s.eps_axis = Axis::new(-3.0, 3.0, 13);
        s.amp_axis = Axis::new(0.0, 3.0, 4);
        s.relaxation = RelaxChannel::Off;
        s.lzs = LzsChannel::Lorentzian;
        for i in 0..13 {
            for j in 0..4 {
                let r = s.cell_rates(i, j).unwrap();
                let m = s.cell_rates(12 - i, j).unwrap();
                assert!((r.w01 - m.w10).abs() <= 1e-14 * r.w01.max(m.w10));
            }
        }
    }

    #[test]
    fn invalid_specs_rejected() {
        let mut s = scenario("fig3a").unwrap();
        s.relaxation = RelaxChannel::Off;
        assert!(evaluate(&s).is_err());
        let mut s = scenario("fig3a").unwrap();
        s.eps_axis.count = 1;
        assert!(evaluate(&s).is_err());
    }
}
