use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

const UNITS: &str = "Units: every frequency-like flag is X/2π in GHz (the `-ghz` suffix), \
temperatures are in mK (`-mk`), times in μs (`-us`). Defaults are the Fig. 4a parameter set.";

#[derive(Debug, Parser)]
#[command(name = "eii", version, about = "Interference patterns of a strongly driven qubit", long_about = UNITS)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Transition rates at one operating point, as JSON.
    #[command(long_about = UNITS)]
    Rates(RatesArgs),
    /// Population map over ε₀ × A, written as CSV and a heatmap.
    #[command(long_about = UNITS)]
    Pattern(PatternArgs),
    /// Population time series at one operating point, as CSV.
    #[command(long_about = UNITS)]
    Transient(TransientArgs),
    /// Resonant detunings inside a window, as JSON.
    #[command(long_about = UNITS)]
    Resonances(ResonancesArgs),
    /// Brute-force check of a closed-form rate, as JSON.
    #[command(long_about = UNITS)]
    Oracle(OracleArgs),
    /// Lists the figure presets.
    Scenarios(ScenariosArgs),
}

#[derive(Debug, Clone, Args)]
pub struct QubitArgs {
    /// Tunnelling amplitude Δ/2π (GHz).
    #[arg(long, default_value_t = 0.013, allow_negative_numbers = true)]
    pub delta_ghz: f64,
    /// Dephasing rate Γ₂/2π (GHz).
    #[arg(long, default_value_t = 0.06, allow_negative_numbers = true)]
    pub gamma2_ghz: f64,
}

#[derive(Debug, Clone, Args)]
pub struct DriveArgs {
    /// Drive amplitude A/2π (GHz).
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub amp_ghz: f64,
    /// Drive frequency ω/2π (GHz).
    #[arg(long, default_value_t = 0.6, allow_negative_numbers = true)]
    pub omega_ghz: f64,
}

#[derive(Debug, Clone, Args)]
pub struct BathArgs {
    /// Coupling φ²α; the bath is built with φ = 1.
    #[arg(long, default_value_t = 0.0002, allow_negative_numbers = true)]
    pub phi2alpha_ghz: f64,
    /// Bath cutoff ω_c/2π (GHz).
    #[arg(long, default_value_t = 0.05, allow_negative_numbers = true)]
    pub omegac_ghz: f64,
    /// Bath temperature (mK).
    #[arg(long, default_value_t = 20.0, allow_negative_numbers = true)]
    pub temp_mk: f64,
}

#[derive(Debug, Clone, Args)]
pub struct WeakArgs {
    /// Weak-tone amplitude Ã/2π (GHz).
    #[arg(long, default_value_t = 1.8, allow_negative_numbers = true)]
    pub weak_amp_ghz: f64,
    /// Weak-tone frequency ω̃/2π (GHz).
    #[arg(long, default_value_t = 2.0, allow_negative_numbers = true)]
    pub weak_omega_ghz: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LzsModel {
    Off,
    Lorentzian,
    Gaussian,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RelaxModel {
    Off,
    Ohmic,
    Delta,
    Phenomenological,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WeakModel {
    Off,
    Both,
    APrime,
    BPrime,
}

#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    /// Tunnelling-rate line shape.
    #[arg(long, value_enum, default_value_t = LzsModel::Off)]
    pub lzs: LzsModel,
    /// Relaxation model.
    #[arg(long, value_enum, default_value_t = RelaxModel::Off)]
    pub relax: RelaxModel,
    /// Weak-tone channel.
    #[arg(long, value_enum, default_value_t = WeakModel::Off)]
    pub weak: WeakModel,
    /// Phenomenological Γ₀₁/2π (GHz).
    #[arg(long, default_value_t = 8e-6, allow_negative_numbers = true)]
    pub gamma01_ghz: f64,
    /// Delta-mode resonance tolerance /2π (GHz); default ω/1000.
    #[arg(long, allow_negative_numbers = true)]
    pub match_tol_ghz: Option<f64>,
    /// 1/f noise amplitude a in S(ω) = a/|ω| ((rad/ns)²).
    #[arg(long, default_value_t = 1e-4, allow_negative_numbers = true)]
    pub noise_amplitude: f64,
    /// 1/f infrared cutoff /2π (GHz).
    #[arg(long, default_value_t = 1e-3 / std::f64::consts::TAU, allow_negative_numbers = true)]
    pub noise_ir_ghz: f64,
    /// 1/f ultraviolet cutoff /2π (GHz).
    #[arg(long, default_value_t = 10.0 / std::f64::consts::TAU, allow_negative_numbers = true)]
    pub noise_uv_ghz: f64,
    /// Time at which the polaron shift is taken (μs).
    #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
    pub noise_t_us: f64,
}

#[derive(Debug, Clone, Args)]
pub struct PointArgs {
    /// Static detuning ε₀/2π (GHz).
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub eps0_ghz: f64,
    #[command(flatten)]
    pub qubit: QubitArgs,
    #[command(flatten)]
    pub drive: DriveArgs,
    #[command(flatten)]
    pub bath: BathArgs,
    #[command(flatten)]
    pub weak_field: WeakArgs,
    #[command(flatten)]
    pub model: ModelArgs,
}

#[derive(Debug, Args)]
pub struct RatesArgs {
    #[command(flatten)]
    pub point: PointArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Pgm,
    Png,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Cmap {
    Gray,
    Viridis,
}

#[derive(Debug, Args)]
pub struct PatternArgs {
    /// Figure preset (see `eii scenarios`).
    #[arg(long, conflicts_with = "config", required_unless_present = "config")]
    pub scenario: Option<String>,
    /// JSON run configuration (caption units: GHz, mK, μs).
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// ε₀/2π axis as MIN,MAX,COUNT (GHz).
    #[arg(long, value_parser = parse_axis, allow_hyphen_values = true)]
    pub eps: Option<(f64, f64, usize)>,
    /// A/2π axis as MIN,MAX,COUNT (GHz).
    #[arg(long, value_parser = parse_axis, allow_hyphen_values = true)]
    pub amp: Option<(f64, f64, usize)>,
    /// CSV output path; default <out-dir>/<name>.csv.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Heatmap output path; default <out-dir>/<name>.<format>.
    #[arg(long)]
    pub heatmap: Option<PathBuf>,
    /// Directory for default output paths.
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
    /// Heatmap format; default pgm.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// PNG colormap; PGM is always gray.
    #[arg(long, value_enum)]
    pub colormap: Option<Cmap>,
    /// Worker threads; output does not depend on it.
    #[arg(long, env = "EII_WORKERS")]
    pub workers: Option<usize>,
    /// Also print ridge positions at the amplitude slice nearest A/2π (GHz).
    #[arg(long)]
    pub ridges_at_ghz: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Init {
    PaperTanh,
    Boltzmann,
    Custom,
}

#[derive(Debug, Args)]
pub struct TransientArgs {
    #[command(flatten)]
    pub point: PointArgs,
    /// End time (μs); default is `--t-end-relax` relaxation times.
    #[arg(long)]
    pub t_end_us: Option<f64>,
    /// End time in units of 1/R, used when `--t-end-us` is absent.
    #[arg(long, default_value_t = 20.0)]
    pub t_end_relax: f64,
    /// Number of samples, including both ends.
    #[arg(long, default_value_t = 201)]
    pub points: usize,
    /// Initial population: tanh(ε₀/2T), thermal, or `--p0`.
    #[arg(long, value_enum, default_value_t = Init::PaperTanh)]
    pub init: Init,
    /// Initial ρ₀₀ for `--init custom`.
    #[arg(long)]
    pub p0: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Rii,
    Roii,
}

#[derive(Debug, Args)]
pub struct ResonancesArgs {
    /// Take ω, the offset frequency and the window from a preset.
    #[arg(long)]
    pub scenario: Option<String>,
    /// Relaxation-induced (bath mode ω_c) or weak-tone (ω̃) resonances.
    #[arg(long, value_enum, default_value_t = Mode::Rii)]
    pub mode: Mode,
    /// Drive amplitude A/2π (GHz).
    #[arg(long, default_value_t = 0.0)]
    pub amp_ghz: f64,
    /// Drive frequency ω/2π (GHz).
    #[arg(long, default_value_t = 0.6)]
    pub omega_ghz: f64,
    /// Bath cutoff ω_c/2π for RII (GHz).
    #[arg(long, default_value_t = 0.05)]
    pub omegac_ghz: f64,
    /// Weak-tone frequency ω̃/2π for ROII (GHz).
    #[arg(long, default_value_t = 2.0)]
    pub weak_omega_ghz: f64,
    /// Window lower edge ε₀/2π (GHz).
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub eps_min_ghz: f64,
    /// Window upper edge ε₀/2π (GHz).
    #[arg(long, default_value_t = 10.0, allow_negative_numbers = true)]
    pub eps_max_ghz: f64,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[command(subcommand)]
    pub kind: OracleKind,
}

#[derive(Debug, Subcommand)]
pub enum OracleKind {
    /// Ohmic Γ₁₀ against a τ-domain quadrature.
    #[command(long_about = UNITS)]
    Relax(OracleRelaxArgs),
    /// Lorentzian W₁₀ against Bloch-equation decay.
    #[command(long_about = UNITS)]
    Lzs(OracleLzsArgs),
    /// Weak-tone rate against Bloch-equation decay.
    #[command(long_about = UNITS)]
    Roii(OracleRoiiArgs),
}

#[derive(Debug, Args)]
pub struct OracleRelaxArgs {
    /// Static detuning ε₀/2π (GHz).
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub eps0_ghz: f64,
    #[command(flatten)]
    pub drive: DriveArgs,
    #[command(flatten)]
    pub bath: BathArgs,
    /// Relative tolerance.
    #[arg(long, default_value_t = 0.02, allow_negative_numbers = true)]
    pub rel_tol: f64,
}

#[derive(Debug, Args)]
pub struct OracleLzsArgs {
    /// Static detuning ε₀/2π (GHz).
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub eps0_ghz: f64,
    #[command(flatten)]
    pub qubit: QubitArgs,
    #[command(flatten)]
    pub drive: DriveArgs,
    /// Relative tolerance.
    #[arg(long, default_value_t = 0.05, allow_negative_numbers = true)]
    pub rel_tol: f64,
}

#[derive(Debug, Args)]
pub struct OracleRoiiArgs {
    /// Static detuning ε₀/2π (GHz).
    #[arg(long, default_value_t = 2.0, allow_negative_numbers = true)]
    pub eps0_ghz: f64,
    #[command(flatten)]
    pub qubit: QubitArgs,
    #[command(flatten)]
    pub drive: DriveArgs,
    #[command(flatten)]
    pub weak_field: WeakArgs,
    /// Relative tolerance.
    #[arg(long, default_value_t = 0.10, allow_negative_numbers = true)]
    pub rel_tol: f64,
}

#[derive(Debug, Args)]
pub struct ScenariosArgs {
    /// Print the full parameter set of one preset as JSON (rad/ns, ns).
    #[arg(long)]
    pub show: Option<String>,
}

fn parse_axis(s: &str) -> Result<(f64, f64, usize), String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err("expected MIN,MAX,COUNT".into());
    }
    let min = parts[0].trim().parse::<f64>().map_err(|e| e.to_string())?;
    let max = parts[1].trim().parse::<f64>().map_err(|e| e.to_string())?;
    let count = parts[2].trim().parse::<usize>().map_err(|e| e.to_string())?;
    Ok((min, max, count))
}
