use std::f64::consts::TAU;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use serde_json::{json, Value};

use eii_core::dynamics::{stationary_with_branch, transient as transient_at, InitialPopulation};
use eii_core::io::{parse_config, write_csv, write_heatmap, Colormap, ImageFormat, OutputConfig, RunConfig};
use eii_core::oracle::{check_lzs_rate, check_relax_rate, check_roii_rate, OracleReport};
use eii_core::params::{freq_from_caption, freq_to_caption, temp_from_millikelvin, time_from_microseconds};
use eii_core::params::{BathParams, DriveField, QubitParams, WeakField};
use eii_core::rates::{resonance_report, roii_regime_warning, RateSet, ResonanceMode, RoiiCoupling};
use eii_core::sweep::{
    default_workers, evaluate_with_workers, inverted_fraction, ridge_locate, scenario, scenario_names, Axis,
    LzsChannel, RelaxChannel, RidgeKind, SweepSpec, TimeMode, WeakChannel,
};
use eii_core::{Error, Result};

use crate::args::*;

pub fn exit_code(e: &Error) -> u8 {
    if matches!(e, Error::OracleInconclusive(_)) {
        3
    } else if e.is_validation() {
        2
    } else {
        1
    }
}

fn print_json(v: &impl serde::Serialize) -> Result<()> {
    let text = serde_json::to_string_pretty(v).map_err(|e| Error::Integration(format!("serialization: {e}")))?;
    emit(&format!("{text}\n"))
}

fn emit(text: &str) -> Result<()> {
    let mut out = std::io::stdout().lock();
    out.write_all(text.as_bytes())?;
    out.flush()?;
    Ok(())
}

fn ghz(v: f64) -> Result<f64> {
    freq_from_caption(v)
}

fn qubit(a: &QubitArgs, eps0_ghz: f64) -> Result<QubitParams> {
    Ok(QubitParams {
        delta: ghz(a.delta_ghz)?,
        eps0: ghz(eps0_ghz)?,
        gamma2: ghz(a.gamma2_ghz)?,
    })
}

fn drive(a: &DriveArgs) -> Result<DriveField> {
    Ok(DriveField {
        amp: ghz(a.amp_ghz)?,
        omega: ghz(a.omega_ghz)?,
    })
}

fn bath(a: &BathArgs) -> Result<BathParams> {
    Ok(BathParams {
        alpha: a.phi2alpha_ghz,
        phi: 1.0,
        omega_c: ghz(a.omegac_ghz)?,
        temperature: temp_from_millikelvin(a.temp_mk)?,
    })
}

fn weak(a: &WeakArgs) -> Result<WeakField> {
    Ok(WeakField {
        amp_tilde: ghz(a.weak_amp_ghz)?,
        omega_tilde: ghz(a.weak_omega_ghz)?,
    })
}

fn coupling(m: WeakModel) -> Option<RoiiCoupling> {
    match m {
        WeakModel::Off => None,
        WeakModel::Both => Some(RoiiCoupling::Both),
        WeakModel::APrime => Some(RoiiCoupling::APrimeOnly),
        WeakModel::BPrime => Some(RoiiCoupling::BPrimeOnly),
    }
}

/// A one-cell sweep at the point described by the flags.
fn point_spec(p: &PointArgs) -> Result<SweepSpec> {
    let d = drive(&p.drive)?;
    if p.drive.amp_ghz < 0.0 {
        return Err(Error::InvalidParameter("amp-ghz must be >= 0".into()));
    }
    let m = &p.model;
    let lzs = match m.lzs {
        LzsModel::Off => LzsChannel::Off,
        LzsModel::Lorentzian => LzsChannel::Lorentzian,
        LzsModel::Gaussian => LzsChannel::Gaussian {
            amplitude: m.noise_amplitude,
            ir_cut: ghz(m.noise_ir_ghz)?,
            uv_cut: ghz(m.noise_uv_ghz)?,
            t_ns: time_from_microseconds(m.noise_t_us)?,
        },
    };
    let relaxation = match m.relax {
        RelaxModel::Off => RelaxChannel::Off,
        RelaxModel::Ohmic => RelaxChannel::Ohmic,
        RelaxModel::Delta => RelaxChannel::Delta {
            match_tol: m.match_tol_ghz.map(ghz).transpose()?,
        },
        RelaxModel::Phenomenological => RelaxChannel::Phenomenological {
            gamma01: ghz(m.gamma01_ghz)?,
        },
    };
    let weak_field = coupling(m.weak).map_or(WeakChannel::Off, |which| WeakChannel::On { which });
    let mut spec = scenario("fig4a")?;
    spec.name = None;
    spec.eps_axis = Axis::new(p.eps0_ghz, p.eps0_ghz + 1.0, 2);
    spec.amp_axis = Axis::new(p.drive.amp_ghz, p.drive.amp_ghz + 1.0, 2);
    spec.lzs = lzs;
    spec.relaxation = relaxation;
    spec.weak_field = weak_field;
    spec.qubit = qubit(&p.qubit, 0.0)?;
    spec.omega = d.omega;
    spec.bath = bath(&p.bath)?;
    spec.weak = weak(&p.weak_field)?;
    spec.validate()?;
    Ok(spec)
}

fn rates_json(r: &RateSet) -> Value {
    json!({"w10": r.w10, "w01": r.w01, "g10": r.g10, "g01": r.g01})
}

fn point_rates(p: &PointArgs) -> Result<(SweepSpec, RateSet, Value, Vec<String>)> {
    let spec = point_spec(p)?;
    let total = spec.cell_rates(0, 0)?;
    let mut channels = serde_json::Map::new();
    if spec.lzs != LzsChannel::Off {
        let only = SweepSpec {
            relaxation: RelaxChannel::Off,
            weak_field: WeakChannel::Off,
            ..spec.clone()
        };
        let r = only.cell_rates(0, 0)?;
        channels.insert("lzs".into(), json!({"w10": r.w10, "w01": r.w01}));
    }
    if spec.weak_field != WeakChannel::Off {
        let only = SweepSpec {
            lzs: LzsChannel::Off,
            relaxation: RelaxChannel::Off,
            ..spec.clone()
        };
        let r = only.cell_rates(0, 0)?;
        channels.insert("weak_field".into(), json!({"w10": r.w10, "w01": r.w01}));
    }
    if spec.relaxation != RelaxChannel::Off {
        let only = SweepSpec {
            lzs: LzsChannel::Off,
            weak_field: WeakChannel::Off,
            ..spec.clone()
        };
        let r = only.cell_rates(0, 0)?;
        channels.insert("relaxation".into(), json!({"g10": r.g10, "g01": r.g01}));
    }
    let mut warnings = Vec::new();
    if spec.weak_field != WeakChannel::Off {
        if let Some(w) = roii_regime_warning(&spec.drive(0), &spec.weak) {
            warnings.push(w);
        }
    }
    Ok((spec, total, Value::Object(channels), warnings))
}

fn point_parameters(p: &PointArgs) -> Value {
    json!({
        "eps0_ghz": p.eps0_ghz,
        "delta_ghz": p.qubit.delta_ghz,
        "gamma2_ghz": p.qubit.gamma2_ghz,
        "amp_ghz": p.drive.amp_ghz,
        "omega_ghz": p.drive.omega_ghz,
        "phi2alpha": p.bath.phi2alpha_ghz,
        "omegac_ghz": p.bath.omegac_ghz,
        "temp_mk": p.bath.temp_mk,
        "weak_amp_ghz": p.weak_field.weak_amp_ghz,
        "weak_omega_ghz": p.weak_field.weak_omega_ghz,
        "gamma01_ghz": p.model.gamma01_ghz,
    })
}

fn value_name<T: clap::ValueEnum>(v: &T) -> Option<String> {
    v.to_possible_value().map(|p| p.get_name().to_string())
}

fn model_names(p: &PointArgs) -> Value {
    json!({
        "lzs": value_name(&p.model.lzs),
        "relaxation": value_name(&p.model.relax),
        "weak_field": value_name(&p.model.weak),
    })
}

pub fn rates(a: &RatesArgs) -> Result<ExitCode> {
    let (_, total, channels, warnings) = point_rates(&a.point)?;
    print_json(&json!({
        "parameters": point_parameters(&a.point),
        "models": model_names(&a.point),
        "units": "1/ns",
        "rates": rates_json(&total),
        "channels": channels,
        "n_max": total.n_max,
        "warnings": warnings,
    }))?;
    Ok(ExitCode::SUCCESS)
}

fn image_format(f: Format) -> ImageFormat {
    match f {
        Format::Pgm => ImageFormat::Pgm,
        Format::Png => ImageFormat::Png,
    }
}

fn resolve_run(a: &PatternArgs) -> Result<RunConfig> {
    let mut run = match (&a.scenario, &a.config) {
        (Some(name), _) => RunConfig {
            spec: scenario(name)?,
            output: OutputConfig::default(),
            clamp: (0.0, 1.0),
        },
        (None, Some(path)) => parse_config(&std::fs::read_to_string(path)?)?,
        (None, None) => return Err(Error::InvalidParameter("give --scenario or --config".into())),
    };
    if let Some((min, max, count)) = a.eps {
        run.spec.eps_axis = Axis::new(min, max, count);
    }
    if let Some((min, max, count)) = a.amp {
        run.spec.amp_axis = Axis::new(min, max, count);
    }
    if let Some(f) = a.format {
        run.output.format = image_format(f);
    }
    if let Some(c) = a.colormap {
        run.output.colormap = match c {
            Cmap::Gray => Colormap::Gray,
            Cmap::Viridis => Colormap::Viridis,
        };
    }
    if a.csv.is_some() {
        run.output.csv = a.csv.clone();
    }
    if a.heatmap.is_some() {
        run.output.heatmap = a.heatmap.clone();
    }
    run.spec.validate()?;
    Ok(run)
}

fn default_path(dir: &Path, name: &str, ext: &str) -> PathBuf {
    dir.join(format!("{name}.{ext}"))
}

pub fn pattern(a: &PatternArgs) -> Result<ExitCode> {
    let run = resolve_run(a)?;
    if let Some(w) = a.workers {
        if w == 0 {
            return Err(Error::InvalidParameter("workers must be >= 1".into()));
        }
    }
    let workers = a.workers.unwrap_or_else(default_workers);
    let name = run.spec.name.clone().unwrap_or_else(|| "pattern".into());
    let ext = match run.output.format {
        ImageFormat::Pgm => "pgm",
        ImageFormat::Png => "png",
    };
    let csv_path = run
        .output
        .csv
        .clone()
        .unwrap_or_else(|| default_path(&a.out_dir, &name, "csv"));
    let img_path = run
        .output
        .heatmap
        .clone()
        .unwrap_or_else(|| default_path(&a.out_dir, &name, ext));

    let start = Instant::now();
    let grid = evaluate_with_workers(&run.spec, workers)?;
    let wall = start.elapsed().as_secs_f64();
    for path in [&csv_path, &img_path] {
        if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
            std::fs::create_dir_all(parent)
                .map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", parent.display()))))?;
        }
    }
    write_csv(&grid, &csv_path)?;
    let stats = write_heatmap(&grid, &img_path, run.output.format, run.output.colormap, run.clamp)?;

    let finite = grid.values.iter().copied().filter(|v| !v.is_nan());
    let (min, max) = finite.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    emit(&format!(
        "{name}: {}x{} cells, min p00 {min}, max p00 {max}, inverted fraction {}, nan cells {}, clamped {}, wall {wall:.3} s, csv {}, heatmap {}\n",
        grid.n_eps(),
        grid.n_amp(),
        inverted_fraction(&grid, 0.5),
        grid.failures.len(),
        stats.clamped,
        csv_path.display(),
        img_path.display()
    ))?;
    if let Some(amp) = a.ridges_at_ghz {
        let j = ((amp - grid.amp_axis.min) / grid.amp_axis.step()).round();
        if !(0.0..grid.n_amp() as f64).contains(&j) {
            return Err(Error::InvalidParameter(format!("amplitude {amp} GHz outside the grid")));
        }
        let j = j as usize;
        let peaks = ridge_locate(&grid, j, RidgeKind::Peaks)?;
        let dips = ridge_locate(&grid, j, RidgeKind::Dips)?;
        let pos = |r: &[eii_core::sweep::Ridge]| r.iter().map(|r| r.eps0).collect::<Vec<_>>();
        let line = json!({
            "amp_ghz": grid.amp_axis.value(j),
            "peaks_eps0_ghz": pos(&peaks),
            "dips_eps0_ghz": pos(&dips),
        });
        emit(&format!("{line}\n"))?;
    }
    Ok(ExitCode::SUCCESS)
}

pub fn transient(a: &TransientArgs) -> Result<ExitCode> {
    if a.points < 2 {
        return Err(Error::InvalidParameter("points must be >= 2".into()));
    }
    let init = match (a.init, a.p0) {
        (Init::Custom, Some(p)) => InitialPopulation::Custom(p),
        (Init::Custom, None) => return Err(Error::InvalidParameter("--init custom needs --p0".into())),
        (_, Some(_)) => return Err(Error::InvalidParameter("--p0 only applies to --init custom".into())),
        (Init::PaperTanh, None) => InitialPopulation::PaperTanh,
        (Init::Boltzmann, None) => InitialPopulation::Boltzmann,
    };
    let (spec, rates, _, _) = point_rates(&a.point)?;
    let eps0 = spec.eps0(0);
    let t_end = match a.t_end_us {
        Some(t) => time_from_microseconds(t)?,
        None => {
            if !(a.t_end_relax.is_finite() && a.t_end_relax > 0.0) {
                return Err(Error::InvalidParameter("t-end-relax must be > 0".into()));
            }
            let r = stationary_with_branch(&rates)
                .map_err(|_| Error::InvalidParameter("total rate is zero; give --t-end-us".into()))?;
            a.t_end_relax / r.rate
        }
    };
    let temperature = spec.bath.temperature;
    // validate the initial state before printing anything
    init.p00(eps0, temperature)?;
    let mut out = String::from("t_us,p00\n");
    for k in 0..a.points {
        let t = if k + 1 == a.points {
            t_end
        } else {
            t_end * k as f64 / (a.points - 1) as f64
        };
        let p = transient_at(&rates, eps0, temperature, t, init)?;
        out.push_str(&format!("{},{}\n", t * 1e-3, p.p00));
    }
    emit(&out)?;
    Ok(ExitCode::SUCCESS)
}

pub fn resonances(a: &ResonancesArgs) -> Result<ExitCode> {
    let (d, mode, window) = match &a.scenario {
        Some(name) => {
            let s = scenario(name)?;
            let mode = match s.weak_field {
                WeakChannel::On { .. } => ResonanceMode::Roii {
                    omega_tilde: s.weak.omega_tilde,
                },
                WeakChannel::Off => ResonanceMode::Rii {
                    omega_c: s.bath.omega_c,
                },
            };
            let d = DriveField {
                amp: ghz(a.amp_ghz)?,
                omega: s.omega,
            };
            (d, mode, (TAU * s.eps_axis.min, TAU * s.eps_axis.max))
        }
        None => {
            let d = DriveField {
                amp: ghz(a.amp_ghz)?,
                omega: ghz(a.omega_ghz)?,
            };
            let mode = match a.mode {
                Mode::Rii => ResonanceMode::Rii {
                    omega_c: ghz(a.omegac_ghz)?,
                },
                Mode::Roii => ResonanceMode::Roii {
                    omega_tilde: ghz(a.weak_omega_ghz)?,
                },
            };
            (d, mode, (ghz(a.eps_min_ghz)?, ghz(a.eps_max_ghz)?))
        }
    };
    let report = resonance_report(&d, mode, window)?;
    let caption = |list: &[eii_core::rates::Resonance]| {
        list.iter()
            .map(|r| json!({"n": r.n, "eps0_ghz": freq_to_caption(r.eps0)}))
            .collect::<Vec<_>>()
    };
    print_json(&json!({
        "report": report,
        "units": "rad/ns",
        "caption_units": {
            "from_1to0": caption(&report.resonant_detunings_from_1to0),
            "from_0to1": caption(&report.resonant_detunings_from_0to1),
        },
    }))?;
    Ok(ExitCode::SUCCESS)
}

fn finish_oracle(kind: &str, result: Result<OracleReport>) -> Result<ExitCode> {
    match result {
        Ok(report) => {
            print_json(&report)?;
            Ok(if report.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Err(Error::OracleInconclusive(msg)) => {
            print_json(&json!({"quantity": kind, "status": "inconclusive", "message": msg}))?;
            Ok(ExitCode::from(3))
        }
        Err(e) => Err(e),
    }
}

pub fn oracle(a: &OracleArgs) -> Result<ExitCode> {
    match &a.kind {
        OracleKind::Relax(o) => {
            let b = bath(&o.bath)?;
            let d = drive(&o.drive)?;
            finish_oracle("g10", check_relax_rate(&b, &d, ghz(o.eps0_ghz)?, o.rel_tol))
        }
        OracleKind::Lzs(o) => {
            let q = qubit(&o.qubit, o.eps0_ghz)?;
            let d = drive(&o.drive)?;
            finish_oracle("w10", check_lzs_rate(&q, &d, o.rel_tol))
        }
        OracleKind::Roii(o) => {
            let q = qubit(&o.qubit, o.eps0_ghz)?;
            let d = drive(&o.drive)?;
            let w = weak(&o.weak_field)?;
            finish_oracle("w_roii", check_roii_rate(&q, &d, &w, o.rel_tol))
        }
    }
}

/// Nine significant digits, printed shortest.
fn short(v: f64) -> f64 {
    format!("{v:.8e}").parse().unwrap_or(v)
}

fn describe(s: &SweepSpec) -> String {
    let lzs = match s.lzs {
        LzsChannel::Off => "off",
        LzsChannel::Lorentzian => "lorentzian",
        LzsChannel::Gaussian { .. } => "gaussian",
    };
    let relax = match s.relaxation {
        RelaxChannel::Off => "off".to_string(),
        RelaxChannel::Ohmic => format!(
            "ohmic phi2alpha={} omegac={}GHz T={}mK",
            short(s.bath.alpha * s.bath.phi * s.bath.phi),
            short(freq_to_caption(s.bath.omega_c)),
            short(eii_core::params::temp_to_millikelvin(s.bath.temperature))
        ),
        RelaxChannel::Delta { .. } => "delta".to_string(),
        RelaxChannel::Phenomenological { gamma01 } => {
            format!("phenomenological gamma01={}GHz", short(freq_to_caption(gamma01)))
        }
    };
    let weak = match s.weak_field {
        WeakChannel::Off => "off",
        WeakChannel::On {
            which: RoiiCoupling::Both,
        } => "both",
        WeakChannel::On {
            which: RoiiCoupling::APrimeOnly,
        } => "a_prime",
        WeakChannel::On {
            which: RoiiCoupling::BPrimeOnly,
        } => "b_prime",
    };
    let time = match s.time_mode {
        TimeMode::Stationary => "stationary".to_string(),
        TimeMode::Transient { t_ns } => format!("transient t={}us", t_ns * 1e-3),
    };
    format!("lzs={lzs} relaxation={relax} weak_field={weak} {time}")
}

pub fn scenarios(a: &ScenariosArgs) -> Result<ExitCode> {
    match &a.show {
        Some(name) => print_json(&scenario(name)?)?,
        None => {
            for name in scenario_names() {
                emit(&format!("{name}  {}\n", describe(&scenario(name)?)))?;
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}
