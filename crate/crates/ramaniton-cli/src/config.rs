//! Parameter files, presets, and the flag > file > preset precedence.

use std::path::Path;

use ramaniton::{ModelParams, PhysicalConstants};
use serde::Deserialize;

use crate::CliError;

/// ω_L/Ω used when no flag, file, or preset supplies one — the silicon
/// worked example's pump-to-phonon ratio.
pub const DEFAULT_OMEGA_RATIO: f64 = 12.4;

/// A parameter file: plain `key = value` pairs, every key optional.
///
/// Unknown keys are rejected outright — a typo'd `etaa = 1e-3` silently
/// falling back to a default would invalidate whatever result the run was
/// meant to reproduce.
#[derive(Debug, Default, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    /// Pump-to-phonon frequency ratio ω_L/Ω.
    pub omega_ratio: Option<f64>,
    /// Pump-coupling strength η.
    pub eta: Option<f64>,
    /// Raman shift q (scalar commands only; scans take a grid flag).
    pub q: Option<f64>,
    /// Phonon angular frequency Ω, rad/s.
    #[serde(rename = "Omega_hz")]
    pub omega_hz: Option<f64>,
    /// Linear refractive index.
    pub n0: Option<f64>,
    /// Kerr index n₂, m²/W.
    pub n2: Option<f64>,
    /// Pump intensity, W/m².
    pub intensity: Option<f64>,
}

/// Reads and parses a parameter file.
pub fn load_config(path: &Path) -> Result<FileConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

/// Named parameter presets selectable with `--preset`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Preset {
    /// Silicon waveguide: ω_L/Ω = 12.4, η = 10⁻³, Ω = 2π·15.6 THz,
    /// n₀ = 3.42, n₂ = 4.5×10⁻¹⁸ m²/W, I = 10¹¹ W/m².
    Silicon,
}

impl Preset {
    /// The preset rendered as a config layer (lowest precedence).
    pub fn values(self) -> FileConfig {
        match self {
            Preset::Silicon => {
                let m = ModelParams::silicon(0.0).expect("preset parameters are valid");
                let c = PhysicalConstants::silicon();
                FileConfig {
                    omega_ratio: Some(m.omega_ratio),
                    eta: Some(m.eta),
                    q: None,
                    omega_hz: Some(c.omega_hz),
                    n0: Some(c.n0),
                    n2: Some(c.n2),
                    intensity: Some(c.intensity),
                }
            }
        }
    }
}

/// The three config layers in precedence order: command-line flag, then
/// parameter file, then preset.
#[derive(Debug, Default, Clone, Copy)]
pub struct Layers {
    pub file: FileConfig,
    pub preset: FileConfig,
}

impl Layers {
    /// First-defined value across the layers.
    pub fn pick(&self, flag: Option<f64>, field: impl Fn(&FileConfig) -> Option<f64>) -> Option<f64> {
        flag.or(field(&self.file)).or(field(&self.preset))
    }

    /// Like [`Layers::pick`], but a missing value is a config error naming
    /// the parameter and the flag that would set it.
    pub fn require(
        &self,
        name: &str,
        flag: Option<f64>,
        field: impl Fn(&FileConfig) -> Option<f64>,
    ) -> Result<f64, CliError> {
        self.pick(flag, field).ok_or_else(|| {
            CliError::Config(format!(
                "missing parameter `{name}`: pass --{} or set it in a config file or preset",
                name.replace('_', "-")
            ))
        })
    }

    /// Physical constants when the file/preset/flags define at least Ω and
    /// n₀; `None` otherwise (dimensionless-only run).
    pub fn physical_constants(
        &self,
        omega_hz_flag: Option<f64>,
        n0_flag: Option<f64>,
        n2_flag: Option<f64>,
        intensity_flag: Option<f64>,
    ) -> Result<Option<PhysicalConstants>, CliError> {
        let omega_hz = self.pick(omega_hz_flag, |c| c.omega_hz);
        let n0 = self.pick(n0_flag, |c| c.n0);
        let (Some(omega_hz), Some(n0)) = (omega_hz, n0) else {
            return Ok(None);
        };
        let n2 = self.pick(n2_flag, |c| c.n2).unwrap_or(0.0);
        let intensity = self.pick(intensity_flag, |c| c.intensity).unwrap_or(0.0);
        Ok(Some(PhysicalConstants::new(omega_hz, n0, n2, intensity)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_key_set_parses() {
        let cfg: FileConfig = toml::from_str(
            "omega_ratio = 12.4\n\
             eta = 1e-3\n\
             q = 1.0\n\
             Omega_hz = 9.8e13\n\
             n0 = 3.42\n\
             n2 = 4.5e-18\n\
             intensity = 1e11\n",
        )
        .unwrap();
        assert_eq!(cfg.omega_ratio, Some(12.4));
        assert_eq!(cfg.eta, Some(1e-3));
        assert_eq!(cfg.q, Some(1.0));
        assert_eq!(cfg.omega_hz, Some(9.8e13));
        assert_eq!(cfg.intensity, Some(1e11));
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let r: Result<FileConfig, _> = toml::from_str("etaa = 1e-3\n");
        assert!(r.is_err());
    }

    #[test]
    fn precedence_is_flag_file_preset() {
        let layers = Layers {
            file: FileConfig {
                eta: Some(0.5),
                ..FileConfig::default()
            },
            preset: Preset::Silicon.values(),
        };
        // flag wins over file wins over preset
        assert_eq!(layers.pick(Some(0.9), |c| c.eta), Some(0.9));
        assert_eq!(layers.pick(None, |c| c.eta), Some(0.5));
        assert_eq!(layers.pick(None, |c| c.omega_ratio), Some(12.4));
        assert!(layers.require("eta", None, |c| c.eta).is_ok());
        assert!(layers.require("q", None, |c| c.q).is_err());
    }

    #[test]
    fn constants_need_omega_and_n0() {
        let bare = Layers::default();
        assert!(bare.physical_constants(None, None, None, None).unwrap().is_none());
        let silicon = Layers {
            file: FileConfig::default(),
            preset: Preset::Silicon.values(),
        };
        let c = silicon
            .physical_constants(None, None, None, None)
            .unwrap()
            .unwrap();
        assert_eq!(c.n0, 3.42);
        // a flag overrides the preset's Kerr index
        let c = silicon
            .physical_constants(None, None, Some(0.0), None)
            .unwrap()
            .unwrap();
        assert_eq!(c.n2, 0.0);
    }
}
