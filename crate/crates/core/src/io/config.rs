//! JSON run configuration in caption units.
//!
//! ```json
//! {
//!   "scenario": "fig3a",
//!   "overrides": {"grid": {"eps": [0, 10, 101], "amp": [0, 10, 101]}},
//!   "output": {"csv": "fig3a.csv", "heatmap": "fig3a.pgm", "format": "pgm"}
//! }
//! ```
//!
//! Instead of `scenario`, a document may carry a complete `spec` with the same
//! keys as `overrides`. Frequencies are `X/2π` in GHz (`*_ghz`), temperatures
//! in mK (`temp_mk`) and times in μs (`*_us`).

use std::path::PathBuf;

use serde::Deserialize;

use crate::dynamics::InitialPopulation;
use crate::io::heatmap::{Colormap, ImageFormat};
use crate::params::{freq_from_caption, temp_from_millikelvin, time_from_microseconds};
use crate::rates::RoiiCoupling;
use crate::sweep::{scenario, Axis, LzsChannel, RelaxChannel, SweepSpec, TimeMode, WeakChannel};
use crate::Error;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum ConfigError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unknown key `{key}` at line {line}, column {column}")]
    UnknownKey { key: String, line: usize, column: usize },
    #[error("unit violation in `{field}`: {message}")]
    UnitViolation { field: String, message: String },
    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),
    #[error("invalid configuration: {0}")]
    Invalid(String),
}

/// A resolved run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub spec: SweepSpec,
    pub output: OutputConfig,
    pub clamp: (f64, f64),
}

#[derive(Debug, Clone, PartialEq, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub csv: Option<PathBuf>,
    pub heatmap: Option<PathBuf>,
    #[serde(default)]
    pub format: ImageFormat,
    #[serde(default)]
    pub colormap: Colormap,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    scenario: Option<String>,
    overrides: Option<SpecDoc>,
    spec: Option<SpecDoc>,
    #[serde(default)]
    output: OutputConfig,
    clamp: Option<[f64; 2]>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecDoc {
    name: Option<String>,
    grid: Option<GridDoc>,
    qubit: Option<QubitDoc>,
    omega_ghz: Option<f64>,
    bath: Option<BathDoc>,
    weak: Option<WeakDoc>,
    lzs: Option<LzsDoc>,
    relaxation: Option<RelaxDoc>,
    weak_field: Option<WeakFieldDoc>,
    time: Option<TimeDoc>,
    init: Option<InitialPopulation>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct GridDoc {
    eps: Option<[f64; 3]>,
    amp: Option<[f64; 3]>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct QubitDoc {
    delta_ghz: Option<f64>,
    gamma2_ghz: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct BathDoc {
    alpha: Option<f64>,
    phi: Option<f64>,
    omegac_ghz: Option<f64>,
    temp_mk: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct WeakDoc {
    amp_ghz: Option<f64>,
    omega_ghz: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
enum LzsDoc {
    Off,
    Lorentzian,
    Gaussian {
        amplitude: f64,
        ir_cut_ghz: f64,
        uv_cut_ghz: f64,
        t_us: f64,
    },
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
enum RelaxDoc {
    Off,
    Ohmic,
    Delta {
        #[serde(default)]
        match_tol_ghz: Option<f64>,
    },
    Phenomenological {
        gamma01_ghz: f64,
    },
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "snake_case")]
enum WeakFieldDoc {
    Off,
    Both,
    APrime,
    BPrime,
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
enum TimeDoc {
    Stationary,
    Transient { t_us: f64 },
}

fn unit(field: &str, e: Error) -> ConfigError {
    ConfigError::UnitViolation {
        field: field.to_string(),
        message: e.to_string(),
    }
}

fn freq(field: &str, v: f64) -> Result<f64, ConfigError> {
    freq_from_caption(v).map_err(|e| unit(field, e))
}

fn rate(field: &str, v: f64) -> Result<f64, ConfigError> {
    if v < 0.0 {
        return Err(ConfigError::UnitViolation {
            field: field.to_string(),
            message: format!("{v} GHz must be non-negative"),
        });
    }
    freq(field, v)
}

fn axis(field: &str, a: [f64; 3]) -> Result<Axis, ConfigError> {
    let [min, max, count] = a;
    if !(count.fract() == 0.0 && (2.0..=1e7).contains(&count)) {
        return Err(ConfigError::UnitViolation {
            field: field.to_string(),
            message: format!("count {count} must be an integer >= 2"),
        });
    }
    if !(min.is_finite() && max.is_finite() && min < max) {
        return Err(ConfigError::UnitViolation {
            field: field.to_string(),
            message: format!("range [{min}, {max}] GHz must be finite and increasing"),
        });
    }
    Ok(Axis::new(min, max, count as usize))
}

impl SpecDoc {
    fn apply(self, s: &mut SweepSpec) -> Result<(), ConfigError> {
        if let Some(name) = self.name {
            s.name = Some(name);
        }
        if let Some(g) = self.grid {
            if let Some(e) = g.eps {
                s.eps_axis = axis("grid.eps", e)?;
            }
            if let Some(a) = g.amp {
                s.amp_axis = axis("grid.amp", a)?;
            }
        }
        if let Some(q) = self.qubit {
            if let Some(v) = q.delta_ghz {
                s.qubit.delta = freq("qubit.delta_ghz", v)?;
            }
            if let Some(v) = q.gamma2_ghz {
                s.qubit.gamma2 = rate("qubit.gamma2_ghz", v)?;
            }
        }
        if let Some(v) = self.omega_ghz {
            s.omega = rate("omega_ghz", v)?;
        }
        if let Some(b) = self.bath {
            if let Some(v) = b.alpha {
                s.bath.alpha = v;
            }
            if let Some(v) = b.phi {
                s.bath.phi = v;
            }
            if let Some(v) = b.omegac_ghz {
                s.bath.omega_c = rate("bath.omegac_ghz", v)?;
            }
            if let Some(v) = b.temp_mk {
                s.bath.temperature = temp_from_millikelvin(v).map_err(|e| unit("bath.temp_mk", e))?;
            }
        }
        if let Some(w) = self.weak {
            if let Some(v) = w.amp_ghz {
                s.weak.amp_tilde = rate("weak.amp_ghz", v)?;
            }
            if let Some(v) = w.omega_ghz {
                s.weak.omega_tilde = rate("weak.omega_ghz", v)?;
            }
        }
        if let Some(l) = self.lzs {
            s.lzs = match l {
                LzsDoc::Off => LzsChannel::Off,
                LzsDoc::Lorentzian => LzsChannel::Lorentzian,
                LzsDoc::Gaussian {
                    amplitude,
                    ir_cut_ghz,
                    uv_cut_ghz,
                    t_us,
                } => LzsChannel::Gaussian {
                    amplitude,
                    ir_cut: rate("lzs.gaussian.ir_cut_ghz", ir_cut_ghz)?,
                    uv_cut: rate("lzs.gaussian.uv_cut_ghz", uv_cut_ghz)?,
                    t_ns: time_from_microseconds(t_us).map_err(|e| unit("lzs.gaussian.t_us", e))?,
                },
            };
        }
        if let Some(r) = self.relaxation {
            s.relaxation = match r {
                RelaxDoc::Off => RelaxChannel::Off,
                RelaxDoc::Ohmic => RelaxChannel::Ohmic,
                RelaxDoc::Delta { match_tol_ghz } => RelaxChannel::Delta {
                    match_tol: match_tol_ghz
                        .map(|v| rate("relaxation.delta.match_tol_ghz", v))
                        .transpose()?,
                },
                RelaxDoc::Phenomenological { gamma01_ghz } => RelaxChannel::Phenomenological {
                    gamma01: rate("relaxation.phenomenological.gamma01_ghz", gamma01_ghz)?,
                },
            };
        }
        if let Some(w) = self.weak_field {
            s.weak_field = match w {
                WeakFieldDoc::Off => WeakChannel::Off,
                WeakFieldDoc::Both => WeakChannel::On {
                    which: RoiiCoupling::Both,
                },
                WeakFieldDoc::APrime => WeakChannel::On {
                    which: RoiiCoupling::APrimeOnly,
                },
                WeakFieldDoc::BPrime => WeakChannel::On {
                    which: RoiiCoupling::BPrimeOnly,
                },
            };
        }
        if let Some(t) = self.time {
            s.time_mode = match t {
                TimeDoc::Stationary => TimeMode::Stationary,
                TimeDoc::Transient { t_us } => TimeMode::Transient {
                    t_ns: time_from_microseconds(t_us).map_err(|e| unit("time.transient.t_us", e))?,
                },
            };
        }
        if let Some(i) = self.init {
            s.init = i;
        }
        Ok(())
    }

    fn require_complete(&self) -> Result<(), ConfigError> {
        let missing: Vec<&str> = [
            ("grid", self.grid.is_none()),
            ("qubit", self.qubit.is_none()),
            ("omega_ghz", self.omega_ghz.is_none()),
            ("lzs", self.lzs.is_none()),
            ("relaxation", self.relaxation.is_none()),
            ("time", self.time.is_none()),
        ]
        .into_iter()
        .filter_map(|(k, m)| m.then_some(k))
        .collect();
        if !missing.is_empty() {
            return Err(ConfigError::Invalid(format!(
                "a full spec needs {}",
                missing.join(", ")
            )));
        }
        Ok(())
    }
}

fn classify(e: serde_json::Error) -> ConfigError {
    let message = e.to_string();
    let (line, column) = (e.line(), e.column());
    if let Some(rest) = message.strip_prefix("unknown field `") {
        if let Some(end) = rest.find('`') {
            return ConfigError::UnknownKey {
                key: rest[..end].to_string(),
                line,
                column,
            };
        }
    }
    ConfigError::Parse { line, column, message }
}

/// A spec with all channels off and zeroed parameters, filled by a full `spec` document.
fn blank() -> SweepSpec {
    let mut s = scenario("fig4a").expect("known scenario");
    s.name = None;
    s.qubit.delta = 0.0;
    s.qubit.gamma2 = 0.0;
    s.bath.alpha = 0.0;
    s.bath.omega_c = 0.0;
    s.bath.temperature = 0.0;
    s.weak.amp_tilde = 0.0;
    s.weak.omega_tilde = 0.0;
    s.lzs = LzsChannel::Off;
    s.relaxation = RelaxChannel::Off;
    s
}

/// Parses and resolves a JSON run configuration.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let doc: Document = serde_json::from_str(text).map_err(classify)?;
    let spec = match (doc.scenario, doc.spec) {
        (Some(name), None) => {
            let mut s = scenario(&name).map_err(|_| ConfigError::UnknownScenario(name))?;
            if let Some(o) = doc.overrides {
                o.apply(&mut s)?;
            }
            s
        }
        (None, Some(full)) => {
            if doc.overrides.is_some() {
                return Err(ConfigError::Invalid("`overrides` only applies to a scenario".into()));
            }
            full.require_complete()?;
            let mut s = blank();
            full.apply(&mut s)?;
            s
        }
        (Some(_), Some(_)) => {
            return Err(ConfigError::Invalid(
                "give either `scenario` or `spec`, not both".into(),
            ))
        }
        (None, None) => return Err(ConfigError::Invalid("missing `scenario` or `spec`".into())),
    };
    spec.validate().map_err(|e| ConfigError::Invalid(e.to_string()))?;
    let clamp = match doc.clamp {
        Some([lo, hi]) if lo.is_finite() && hi.is_finite() && lo < hi => (lo, hi),
        Some([lo, hi]) => return Err(ConfigError::Invalid(format!("clamp [{lo}, {hi}] must be increasing"))),
        None => (0.0, 1.0),
    };
    Ok(RunConfig {
        spec,
        output: doc.output,
        clamp,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::TAU;

    #[test]
    fn scenario_only() {
        let c = parse_config(r#"{"scenario":"fig3a"}"#).unwrap();
        assert_eq!(c.spec, scenario("fig3a").unwrap());
        assert_eq!(c.clamp, (0.0, 1.0));
        assert_eq!(c.output, OutputConfig::default());
    }

    #[test]
    fn grid_override() {
        let c =
            parse_config(r#"{"scenario":"fig3a","overrides":{"grid":{"eps":[0,10,101],"amp":[0,10,101]}}}"#).unwrap();
        assert_eq!(c.spec.eps_axis, Axis::new(0.0, 10.0, 101));
        assert_eq!(c.spec.amp_axis, Axis::new(0.0, 10.0, 101));
    }

    #[test]
    fn unknown_scenario() {
        assert_eq!(
            parse_config(r#"{"scenario":"nope"}"#).unwrap_err(),
            ConfigError::UnknownScenario("nope".into())
        );
    }

    #[test]
    fn unknown_key_located() {
        let e = parse_config("{\"scenario\":\"fig3a\",\n \"overrides\":{\"qubit\":{\"detla_ghz\":1}}}").unwrap_err();
        match e {
            ConfigError::UnknownKey { key, line, .. } => {
                assert_eq!(key, "detla_ghz");
                assert_eq!(line, 2);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn syntax_error_located() {
        let e = parse_config("{\n\"scenario\": fig3a}").unwrap_err();
        assert!(matches!(e, ConfigError::Parse { line: 2, .. }), "{e:?}");
    }

    #[test]
    fn unit_violations() {
        for doc in [
            r#"{"scenario":"fig4a","overrides":{"bath":{"temp_mk":-1}}}"#,
            r#"{"scenario":"fig4a","overrides":{"omega_ghz":-0.6}}"#,
            r#"{"scenario":"fig4a","overrides":{"grid":{"eps":[0,10,10.5]}}}"#,
            r#"{"scenario":"fig4a","overrides":{"time":{"transient":{"t_us":-0.5}}}}"#,
        ] {
            assert!(
                matches!(parse_config(doc), Err(ConfigError::UnitViolation { .. })),
                "{doc}"
            );
        }
    }

    #[test]
    fn caption_units_converted() {
        let c = parse_config(
            r#"{"scenario":"fig4a","overrides":{"omega_ghz":0.5,"bath":{"temp_mk":10},
                "time":{"transient":{"t_us":0.5}},"relaxation":{"phenomenological":{"gamma01_ghz":0.001}}}}"#,
        )
        .unwrap();
        assert_eq!(c.spec.omega, TAU * 0.5);
        assert_eq!(c.spec.time_mode, TimeMode::Transient { t_ns: 500.0 });
        assert_eq!(c.spec.bath.temperature, temp_from_millikelvin(10.0).unwrap());
        assert_eq!(
            c.spec.relaxation,
            RelaxChannel::Phenomenological { gamma01: TAU * 0.001 }
        );
    }

    #[test]
    fn full_spec_matches_scenario() {
        let c = parse_config(
            r#"{"spec":{"name":"fig4a","grid":{"eps":[0,10,401],"amp":[0,10,401]},
                "qubit":{"delta_ghz":0.013,"gamma2_ghz":0.06},"omega_ghz":0.6,
                "bath":{"alpha":0.0002,"phi":1,"omegac_ghz":0.05,"temp_mk":20},
                "weak":{"amp_ghz":1.8,"omega_ghz":2},
                "lzs":"lorentzian","relaxation":"ohmic","weak_field":"off","time":"stationary",
                "init":{"kind":"paper_tanh"}},
               "output":{"csv":"a.csv","heatmap":"a.png","format":"png","colormap":"viridis"},
               "clamp":[0,1]}"#,
        )
        .unwrap();
        let mut expect = scenario("fig4a").unwrap();
        expect.weak.amp_tilde = TAU * 1.8;
        assert_eq!(c.spec, expect);
        assert_eq!(c.output.format, ImageFormat::Png);
        assert_eq!(c.output.colormap, Colormap::Viridis);
        assert_eq!(c.output.csv, Some(PathBuf::from("a.csv")));
    }

    #[test]
    fn structural_errors() {
        assert!(matches!(parse_config(r#"{}"#), Err(ConfigError::Invalid(_))));
        assert!(matches!(
            parse_config(r#"{"scenario":"fig3a","spec":{}}"#),
            Err(ConfigError::Invalid(_))
        ));
        assert!(matches!(
            parse_config(r#"{"spec":{"omega_ghz":0.6}}"#),
            Err(ConfigError::Invalid(_))
        ));
        assert!(matches!(
            parse_config(r#"{"scenario":"fig3a","clamp":[1,0]}"#),
            Err(ConfigError::Invalid(_))
        ));
        assert!(matches!(
            parse_config(r#"{"scenario":"fig3a","overrides":{"lzs":"off","relaxation":"off"}}"#),
            Err(ConfigError::Invalid(_))
        ));
    }
}
