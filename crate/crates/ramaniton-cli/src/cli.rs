//! Command definitions and dispatch.
//!
//! Every command resolves its parameters as flag > config file > preset,
//! validates them up front (exit 2 on any config problem), computes through
//! the library, and renders with the bit-stable formatter — identical
//! invocations produce byte-identical artifacts regardless of thread count.

use std::io;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use ramaniton::oracle::AGREEMENT_TOL;
use ramaniton::{
    compare, default_compare_window, dimensionless_length_to_physical, estimate_eta,
    evolve_series, optimize_global, sweep_dispersion, sweep_q, CompareReport, Deviations,
    ModelParams, PhiPolicy, PhysicalConstants, SweepSpec,
};

use crate::config::{load_config, FileConfig, Layers, Preset, DEFAULT_OMEGA_RATIO};
use crate::grid::{parse_grid, parse_range};
use crate::output::{fmt_opt, fmt_sig};
use crate::CliError;

/// Verification regime the oracle defaults to: strong enough coupling that
/// a Ωτ ≤ 5 window populates all observables, weak enough that occupations
/// stay far below the default Fock cutoff.
const DEFAULT_ORACLE_ETA: f64 = 0.2;

#[derive(Debug, Parser)]
#[command(
    name = "ramaniton",
    version,
    about = "Simulator for phonon-mediated photon-pair generation in Raman-active waveguides",
    after_help = "Exit codes: 0 success, 2 usage/config error, 3 verification failure.\n\
                  RAMANITON_THREADS caps grid-evaluation parallelism."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Mode frequencies over a Raman-shift grid (CSV: q,omega1,omega2,omega3)
    Dispersion(DispersionArgs),
    /// Vacuum-evolution observables over a time grid (CSV: tau,N_S,N_aS,N_c,S_db,g2)
    Evolve(EvolveArgs),
    /// Observables over a Raman-shift grid at a fixed time (CSV: q,S_db,N_S,N_aS,g2)
    Sweep(SweepArgs),
    /// Global squeezing maximum over a (q, tau) rectangle (JSON)
    Optimize(OptimizeArgs),
    /// Cross-validate the Gaussian solver against truncated Fock space (JSON)
    Oracle(OracleArgs),
    /// Kerr estimate of the pump coupling from material data (JSON)
    KerrEta(KerrEtaArgs),
}

/// Config-file and preset selection, shared by every command.
#[derive(Debug, Args)]
pub struct SourceFlags {
    /// Parameter file with plain `key = value` lines
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Named parameter preset (lowest precedence)
    #[arg(long, value_enum, value_name = "NAME")]
    pub preset: Option<Preset>,
}

impl SourceFlags {
    fn layers(&self) -> Result<Layers, CliError> {
        let file = match &self.config {
            Some(path) => load_config(path)?,
            None => FileConfig::default(),
        };
        let preset = self.preset.map(Preset::values).unwrap_or_default();
        Ok(Layers { file, preset })
    }
}

/// Model parameters, shared by the simulation commands.
#[derive(Debug, Args)]
pub struct ParamFlags {
    #[command(flatten)]
    pub source: SourceFlags,
    /// Pump-to-phonon frequency ratio omega_L/Omega [default: 12.4]
    #[arg(long, value_name = "RATIO")]
    pub omega_ratio: Option<f64>,
    /// Pump-coupling strength eta
    #[arg(long, value_name = "ETA")]
    pub eta: Option<f64>,
}

impl ParamFlags {
    /// Builds the model with the given Raman shift; `eta` must be supplied
    /// by some layer, `omega_ratio` falls back to the built-in default.
    fn model(&self, layers: &Layers, q: f64) -> Result<ModelParams, CliError> {
        let omega_ratio = layers
            .pick(self.omega_ratio, |c| c.omega_ratio)
            .unwrap_or(DEFAULT_OMEGA_RATIO);
        let eta = layers.require("eta", self.eta, |c| c.eta)?;
        Ok(ModelParams::new(omega_ratio, eta, q)?)
    }
}

/// Quadrature-angle flag: a number of radians, or `optimal` for the
/// closed-form per-point optimum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PhiFlag {
    Optimal,
    Fixed(f64),
}

impl std::str::FromStr for PhiFlag {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("optimal") {
            return Ok(PhiFlag::Optimal);
        }
        let v: f64 = s
            .parse()
            .map_err(|_| format!("expected radians or \"optimal\", got {s:?}"))?;
        if !v.is_finite() {
            return Err(format!("quadrature angle must be finite, got {s:?}"));
        }
        Ok(PhiFlag::Fixed(v))
    }
}

impl From<PhiFlag> for PhiPolicy {
    fn from(f: PhiFlag) -> Self {
        match f {
            PhiFlag::Optimal => PhiPolicy::Optimal,
            PhiFlag::Fixed(v) => PhiPolicy::Fixed(v),
        }
    }
}

#[derive(Debug, Args)]
pub struct DispersionArgs {
    #[command(flatten)]
    pub params: ParamFlags,
    /// Raman-shift grid (inclusive)
    #[arg(long, value_name = "START:STOP:STEP")]
    pub q: String,
    /// Write output here instead of stdout
    #[arg(long, value_name = "PATH")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvolveArgs {
    #[command(flatten)]
    pub params: ParamFlags,
    /// Raman shift (falls back to the config/preset `q`)
    #[arg(long)]
    pub q: Option<f64>,
    /// Time grid, units 1/Omega (inclusive)
    #[arg(long, value_name = "START:STOP:STEP")]
    pub tau: String,
    /// Quadrature angle: radians or "optimal"
    #[arg(long, default_value = "optimal")]
    pub phi: PhiFlag,
    /// Write output here instead of stdout
    #[arg(long, value_name = "PATH")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub params: ParamFlags,
    /// Raman-shift grid (inclusive); must avoid exact level crossings (q = 0)
    #[arg(long, value_name = "START:STOP:STEP")]
    pub q: String,
    /// Interaction time, units 1/Omega
    #[arg(long)]
    pub tau: f64,
    /// Quadrature angle: radians or "optimal"
    #[arg(long, default_value = "optimal")]
    pub phi: PhiFlag,
    /// Write output here instead of stdout
    #[arg(long, value_name = "PATH")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OptimizeArgs {
    #[command(flatten)]
    pub params: ParamFlags,
    /// Raman-shift search range
    #[arg(long, value_name = "LO:HI", default_value = "0.99:1.01")]
    pub q_range: String,
    /// Time search range, units 1/Omega
    #[arg(long, value_name = "LO:HI", default_value = "5000:12000")]
    pub tau_range: String,
    /// Phonon angular frequency Omega, rad/s (enables the physical length)
    #[arg(long, value_name = "RAD_PER_S")]
    pub omega_hz: Option<f64>,
    /// Linear refractive index (enables the physical length)
    #[arg(long)]
    pub n0: Option<f64>,
    /// Kerr index n2, m^2/W
    #[arg(long)]
    pub n2: Option<f64>,
    /// Pump intensity, W/m^2
    #[arg(long)]
    pub intensity: Option<f64>,
    /// Write output here instead of stdout
    #[arg(long, value_name = "PATH")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[command(flatten)]
    pub params: ParamFlags,
    /// Raman shift [default: 1, the resonant verification regime]
    #[arg(long)]
    pub q: Option<f64>,
    /// Fock cutoff; convergence is re-checked at twice this value
    #[arg(long, default_value_t = 16)]
    pub cutoff: usize,
    /// Fixed quadrature angle, radians [default: pi/2]
    #[arg(long)]
    pub phi: Option<f64>,
    /// Comparison time grid [default: 0.25:5:0.25]
    #[arg(long, value_name = "START:STOP:STEP")]
    pub tau: Option<String>,
    /// Write output here instead of stdout
    #[arg(long, value_name = "PATH")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct KerrEtaArgs {
    #[command(flatten)]
    pub source: SourceFlags,
    /// Linear refractive index
    #[arg(long)]
    pub n0: Option<f64>,
    /// Kerr index n2, m^2/W
    #[arg(long)]
    pub n2: Option<f64>,
    /// Pump intensity, W/m^2
    #[arg(long)]
    pub intensity: Option<f64>,
    /// Write output here instead of stdout
    #[arg(long, value_name = "PATH")]
    pub output: Option<PathBuf>,
}

/// Runs one parsed invocation, writing its artifact to `--output` or `out`.
pub fn execute(cli: Cli, out: &mut dyn io::Write) -> Result<(), CliError> {
    match cli.command {
        Command::Dispersion(args) => cmd_dispersion(args, out),
        Command::Evolve(args) => cmd_evolve(args, out),
        Command::Sweep(args) => cmd_sweep(args, out),
        Command::Optimize(args) => cmd_optimize(args, out),
        Command::Oracle(args) => cmd_oracle(args, out),
        Command::KerrEta(args) => cmd_kerr_eta(args, out),
    }
}

fn cmd_dispersion(args: DispersionArgs, out: &mut dyn io::Write) -> Result<(), CliError> {
    let layers = args.params.source.layers()?;
    let q_grid = parse_grid(&args.q).map_err(CliError::Config)?;
    let base = args.params.model(&layers, 0.0)?;
    SweepSpec {
        params: base,
        q_grid: q_grid.clone(),
        taus: vec![],
        phi: PhiPolicy::Optimal,
    }
    .validate()?;
    let table = sweep_dispersion(&base, &q_grid)?;
    let mut text = String::from("q,omega1,omega2,omega3\n");
    for (q, w1, w2, w3) in table {
        text.push_str(&format!(
            "{},{},{},{}\n",
            fmt_sig(q),
            fmt_sig(w1),
            fmt_sig(w2),
            fmt_sig(w3)
        ));
    }
    emit(&text, args.output.as_deref(), out)
}

fn cmd_evolve(args: EvolveArgs, out: &mut dyn io::Write) -> Result<(), CliError> {
    let layers = args.params.source.layers()?;
    let q = layers.require("q", args.q, |c| c.q)?;
    let params = args.params.model(&layers, q)?;
    let taus = parse_grid(&args.tau).map_err(CliError::Config)?;
    SweepSpec {
        params,
        q_grid: vec![],
        taus: taus.clone(),
        phi: args.phi.into(),
    }
    .validate()?;
    let series = evolve_series(&params, &taus, args.phi.into())?;
    let mut text = String::from("tau,N_S,N_aS,N_c,S_db,g2\n");
    for pt in series {
        text.push_str(&format!(
            "{},{},{},{},{},{}\n",
            fmt_sig(pt.tau),
            fmt_sig(pt.n_s),
            fmt_sig(pt.n_as),
            fmt_sig(pt.n_c),
            fmt_sig(pt.s_db),
            fmt_opt(pt.g2)
        ));
    }
    emit(&text, args.output.as_deref(), out)
}

fn cmd_sweep(args: SweepArgs, out: &mut dyn io::Write) -> Result<(), CliError> {
    let layers = args.params.source.layers()?;
    let q_grid = parse_grid(&args.q).map_err(CliError::Config)?;
    let base = args.params.model(&layers, 0.0)?;
    SweepSpec {
        params: base,
        q_grid: q_grid.clone(),
        taus: vec![args.tau],
        phi: args.phi.into(),
    }
    .validate()?;
    let rows = sweep_q(&base, &q_grid, args.tau, args.phi.into())?;
    let mut text = String::from("q,S_db,N_S,N_aS,g2\n");
    for row in rows {
        text.push_str(&format!(
            "{},{},{},{},{}\n",
            fmt_sig(row.q),
            fmt_sig(row.s_db),
            fmt_sig(row.n_s),
            fmt_sig(row.n_as),
            fmt_opt(row.g2)
        ));
    }
    emit(&text, args.output.as_deref(), out)
}

fn cmd_optimize(args: OptimizeArgs, out: &mut dyn io::Write) -> Result<(), CliError> {
    let layers = args.params.source.layers()?;
    let q_range = parse_range(&args.q_range).map_err(CliError::Config)?;
    let tau_range = parse_range(&args.tau_range).map_err(CliError::Config)?;
    let base = args.params.model(&layers, 0.0)?;
    let opt = optimize_global(&base, q_range, tau_range)?;
    let constants =
        layers.physical_constants(args.omega_hz, args.n0, args.n2, args.intensity)?;
    let mut text = format!(
        "{{\"q_star\":{},\"tau_star\":{},\"S_db\":{}",
        fmt_sig(opt.q_star),
        fmt_sig(opt.tau_star),
        fmt_sig(opt.s_db)
    );
    if let Some(c) = constants {
        let l_mm = dimensionless_length_to_physical(opt.tau_star, &c) * 1e3;
        text.push_str(&format!(",\"L_mm\":{}", fmt_sig(l_mm)));
    }
    text.push_str("}\n");
    emit(&text, args.output.as_deref(), out)
}

fn cmd_oracle(args: OracleArgs, out: &mut dyn io::Write) -> Result<(), CliError> {
    let layers = args.params.source.layers()?;
    let omega_ratio = layers
        .pick(args.params.omega_ratio, |c| c.omega_ratio)
        .unwrap_or(DEFAULT_OMEGA_RATIO);
    let eta = layers
        .pick(args.params.eta, |c| c.eta)
        .unwrap_or(DEFAULT_ORACLE_ETA);
    let q = layers.pick(args.q, |c| c.q).unwrap_or(1.0);
    let params = ModelParams::new(omega_ratio, eta, q)?;
    let taus = match &args.tau {
        Some(spec) => parse_grid(spec).map_err(CliError::Config)?,
        None => default_compare_window(),
    };
    let phi = args.phi.unwrap_or(std::f64::consts::FRAC_PI_2);
    let report = compare(&params, &taus, phi, args.cutoff)?;
    emit(&render_oracle_json(&report), args.output.as_deref(), out)?;
    if !report.passed {
        let worst = [
            report.agreement.n_s,
            report.agreement.n_as,
            report.agreement.n_c,
            report.agreement.variance,
            report.agreement.g2,
        ]
        .into_iter()
        .fold(0.0_f64, f64::max);
        return Err(CliError::Verification(format!(
            "oracle agreement gate failed: max relative deviation {} exceeds {}",
            fmt_sig(worst),
            fmt_sig(AGREEMENT_TOL)
        )));
    }
    Ok(())
}

fn cmd_kerr_eta(args: KerrEtaArgs, out: &mut dyn io::Write) -> Result<(), CliError> {
    let layers = args.source.layers()?;
    let n0 = layers.require("n0", args.n0, |c| c.n0)?;
    let n2 = layers.require("n2", args.n2, |c| c.n2)?;
    let intensity = layers.require("intensity", args.intensity, |c| c.intensity)?;
    // the phonon frequency does not enter the estimate; any positive value
    // completes a valid constants set
    let omega_hz = layers.pick(None, |c| c.omega_hz).unwrap_or(1.0);
    let constants = PhysicalConstants::new(omega_hz, n0, n2, intensity)?;
    let text = format!("{{\"eta\":{}}}\n", fmt_sig(estimate_eta(&constants)));
    emit(&text, args.output.as_deref(), out)
}

fn deviations_json(d: &Deviations) -> String {
    format!(
        "{{\"N_S\":{},\"N_aS\":{},\"N_c\":{},\"variance\":{},\"g2\":{}}}",
        fmt_sig(d.n_s),
        fmt_sig(d.n_as),
        fmt_sig(d.n_c),
        fmt_sig(d.variance),
        fmt_sig(d.g2)
    )
}

fn render_oracle_json(r: &CompareReport) -> String {
    format!(
        "{{\"cutoff\":{},\"phi\":{},\"n_taus\":{},\"max_occupation\":{},\"agreement\":{},\"doubling\":{},\"passed\":{}}}\n",
        r.cutoff,
        fmt_sig(r.phi),
        r.n_taus,
        fmt_sig(r.max_occupation),
        deviations_json(&r.agreement),
        deviations_json(&r.doubling),
        r.passed
    )
}

fn emit(text: &str, path: Option<&Path>, out: &mut dyn io::Write) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text)
            .map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", p.display()))),
        None => out
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Runtime(format!("cannot write output: {e}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(argv: &[&str]) -> Result<String, CliError> {
        let cli = Cli::try_parse_from(argv).expect("argv parses");
        let mut buf = Vec::new();
        execute(cli, &mut buf)?;
        Ok(String::from_utf8(buf).expect("output is UTF-8"))
    }

    #[test]
    fn phi_flag_parses_both_forms() {
        assert_eq!("optimal".parse::<PhiFlag>().unwrap(), PhiFlag::Optimal);
        assert_eq!("Optimal".parse::<PhiFlag>().unwrap(), PhiFlag::Optimal);
        assert_eq!("1.5".parse::<PhiFlag>().unwrap(), PhiFlag::Fixed(1.5));
        assert!("nan".parse::<PhiFlag>().is_err());
        assert!("fastest".parse::<PhiFlag>().is_err());
    }

    #[test]
    fn dispersion_single_row_carries_the_gap() {
        let text = run(&["ramaniton", "dispersion", "--eta", "1", "--q", "1:1:1"]).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("q,omega1,omega2,omega3"));
        let row: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(row[0], "1");
        let w2: f64 = row[2].parse().unwrap();
        let w3: f64 = row[3].parse().unwrap();
        assert!((w3 - w2 - 1.0 / 2.0_f64.sqrt()).abs() < 1e-11);
        assert_eq!(lines.next(), None);
    }

    #[test]
    fn evolve_has_empty_g2_at_time_zero() {
        let text = run(&[
            "ramaniton", "evolve", "--preset", "silicon", "--q", "1", "--tau", "0:20:10",
        ])
        .unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "tau,N_S,N_aS,N_c,S_db,g2");
        assert_eq!(lines.len(), 4);
        // τ = 0: vacuum row, g2 cell empty
        assert_eq!(lines[1], "0,0,0,0,0,");
        assert!(!lines[3].ends_with(','), "g2 defined at τ = 20: {}", lines[3]);
    }

    #[test]
    fn optimize_omits_length_without_constants() {
        let text = run(&[
            "ramaniton", "optimize", "--eta", "0", "--q-range", "0.5:0.6",
            "--tau-range", "1:2",
        ])
        .unwrap();
        assert_eq!(text, "{\"q_star\":0.5,\"tau_star\":1,\"S_db\":0}\n");
    }

    #[test]
    fn kerr_estimate_matches_silicon() {
        let text = run(&["ramaniton", "kerr-eta", "--preset", "silicon"]).unwrap();
        let eta: f64 = text
            .trim()
            .strip_prefix("{\"eta\":")
            .and_then(|s| s.strip_suffix('}'))
            .unwrap()
            .parse()
            .unwrap();
        assert!((0.9e-3..=1.1e-3).contains(&eta), "eta = {eta}");
    }

    #[test]
    fn missing_eta_is_a_config_error() {
        let err = run(&["ramaniton", "dispersion", "--q", "0:1:0.5"]).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }
}
