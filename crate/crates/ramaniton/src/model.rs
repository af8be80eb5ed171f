//! Model parameters and unit handling.
//!
//! Everything downstream is dimensionless: frequencies in units of the phonon
//! frequency Ω, time as τ = Ωt, propagation length as L·Ω/c′. This module
//! owns the three dimensionless inputs (pump ratio ω_L/Ω, pump-coupling
//! strength η, Raman shift q), derives the two Bogoliubov vertex couplings
//! η± from them, and converts to physical units at the boundaries.
//!
//! The microscopic material constants enter only through the single relation
//! η = √(8·n₂·I/n₀), so the nonlinear index and pump intensity are inputs to
//! [`estimate_eta`] rather than independent model parameters.

use crate::Error;

/// Vacuum speed of light, m/s (exact SI value).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Dimensionless parameters of the Ramaniton model.
///
/// * `omega_ratio` — pump-to-phonon frequency ratio ω_L/Ω,
/// * `eta` — pump-coupling strength η ≥ 0,
/// * `q` — Raman shift q = c′Q/Ω of the Stokes/anti-Stokes pair, restricted
///   to 0 ≤ q ≤ ω_L/Ω so that both vertex couplings stay real.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub omega_ratio: f64,
    pub eta: f64,
    pub q: f64,
}

impl ModelParams {
    /// Validates and builds a parameter set.
    pub fn new(omega_ratio: f64, eta: f64, q: f64) -> Result<Self, Error> {
        if !omega_ratio.is_finite() || omega_ratio <= 0.0 {
            return Err(Error::InvalidParams(format!(
                "omega_ratio must be finite and positive, got {omega_ratio}"
            )));
        }
        if !eta.is_finite() || eta < 0.0 {
            return Err(Error::InvalidParams(format!(
                "eta must be finite and nonnegative, got {eta}"
            )));
        }
        if !q.is_finite() || q < 0.0 || q > omega_ratio {
            return Err(Error::InvalidParams(format!(
                "q must satisfy 0 <= q <= omega_ratio = {omega_ratio}, got {q}"
            )));
        }
        Ok(Self {
            omega_ratio,
            eta,
            q,
        })
    }

    /// The silicon-waveguide preset (ω_L/Ω = 12.4, η = 10⁻³) at Raman
    /// shift `q`. The ratio 12.4 is the normative preset value (193 THz pump
    /// over the 15.6 THz optical phonon, rounded).
    pub fn silicon(q: f64) -> Result<Self, Error> {
        Self::new(12.4, 1e-3, q)
    }
}

/// Physical constants of a concrete waveguide, used only at the boundaries
/// (deriving η from material data, converting τ to a physical length).
///
/// * `omega_hz` — phonon angular frequency Ω, rad/s,
/// * `n0` — linear refractive index,
/// * `n2` — nonlinear (Kerr) index, m²/W,
/// * `intensity` — pump intensity, W/m².
///
/// `n2` and `intensity` may be zero (no Kerr response → η = 0); the rest
/// must be strictly positive so c′ = c/n₀ and 1/Ω are finite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    pub omega_hz: f64,
    pub n0: f64,
    pub n2: f64,
    pub intensity: f64,
}

impl PhysicalConstants {
    /// Validates and builds a constants set.
    pub fn new(omega_hz: f64, n0: f64, n2: f64, intensity: f64) -> Result<Self, Error> {
        if !omega_hz.is_finite() || omega_hz <= 0.0 {
            return Err(Error::InvalidParams(format!(
                "Omega must be finite and positive, got {omega_hz}"
            )));
        }
        if !n0.is_finite() || n0 <= 0.0 {
            return Err(Error::InvalidParams(format!(
                "n0 must be finite and positive, got {n0}"
            )));
        }
        if !n2.is_finite() || n2 < 0.0 {
            return Err(Error::InvalidParams(format!(
                "n2 must be finite and nonnegative, got {n2}"
            )));
        }
        if !intensity.is_finite() || intensity < 0.0 {
            return Err(Error::InvalidParams(format!(
                "intensity must be finite and nonnegative, got {intensity}"
            )));
        }
        Ok(Self {
            omega_hz,
            n0,
            n2,
            intensity,
        })
    }

    /// Measured silicon-waveguide constants: Ω = 2π·15.6 THz, n₀ = 3.42,
    /// n₂ = 4.5×10⁻¹⁸ m²/W, with a 10¹¹ W/m² pump.
    pub fn silicon() -> Self {
        Self {
            omega_hz: 2.0 * std::f64::consts::PI * 15.6e12,
            n0: 3.42,
            n2: 4.5e-18,
            intensity: 1e11,
        }
    }

    /// Phase velocity c′ = c/n₀ in the medium, m/s.
    pub fn phase_velocity(&self) -> f64 {
        SPEED_OF_LIGHT / self.n0
    }
}

/// The two vertex couplings `(η₋, η₊)` with η± = (η/4)·√(ω_L/Ω ± q).
///
/// η₋ multiplies the Stokes pair-creation vertex and η₊ the anti-Stokes
/// beam-splitter vertex; η₋ ≤ η₊ always, with equality at q = 0. Both are
/// real on the validated domain q ≤ ω_L/Ω.
pub fn derive_couplings(params: &ModelParams) -> (f64, f64) {
    let quarter = params.eta / 4.0;
    let eta_minus = quarter * (params.omega_ratio - params.q).sqrt();
    let eta_plus = quarter * (params.omega_ratio + params.q).sqrt();
    (eta_minus, eta_plus)
}

/// Pump-coupling strength from material data: η = √(8·n₂·I/n₀).
pub fn estimate_eta(constants: &PhysicalConstants) -> f64 {
    (8.0 * constants.n2 * constants.intensity / constants.n0).sqrt()
}

/// Converts a dimensionless interaction time τ = Ωt into the waveguide
/// length L = τ·c′/Ω that realizes it at the medium's phase velocity.
pub fn dimensionless_length_to_physical(tau: f64, constants: &PhysicalConstants) -> f64 {
    tau * constants.phase_velocity() / constants.omega_hz
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn couplings_equal_at_zero_shift() {
        let p = ModelParams::new(12.4, 1e-3, 0.0).unwrap();
        let (em, ep) = derive_couplings(&p);
        assert_eq!(em, ep);
        assert_relative_eq!(ep, 2.5e-4 * 12.4f64.sqrt(), max_relative = 1e-15);
    }

    #[test]
    fn couplings_silicon_resonance() {
        // Direct arithmetic evaluation of η± at the silicon resonance point.
        let p = ModelParams::silicon(1.0).unwrap();
        let (em, ep) = derive_couplings(&p);
        assert_relative_eq!(em, 8.440971508067067e-4, max_relative = 1e-13);
        assert_relative_eq!(ep, 9.151502608861564e-4, max_relative = 1e-13);
        assert!(em <= ep);
    }

    #[test]
    fn couplings_vanish_with_eta() {
        let p = ModelParams::new(12.4, 0.0, 1.0).unwrap();
        assert_eq!(derive_couplings(&p), (0.0, 0.0));
    }

    #[test]
    fn couplings_scale_linearly_in_eta() {
        // Power-of-two scaling is exact in floating point, so "exact" is
        // testable literally.
        let p1 = ModelParams::new(12.4, 3e-4, 0.7).unwrap();
        let p2 = ModelParams::new(12.4, 6e-4, 0.7).unwrap();
        let (em1, ep1) = derive_couplings(&p1);
        let (em2, ep2) = derive_couplings(&p2);
        assert_eq!(em2, 2.0 * em1);
        assert_eq!(ep2, 2.0 * ep1);
    }

    #[test]
    fn coupling_difference_identity() {
        // η₊² − η₋² = η²q/8, an algebraic identity of the definitions
        // (up to the sqrt→square roundtrip rounding).
        for &(orr, eta, q) in &[(12.4, 1e-3, 1.0), (12.4, 0.3, 2.5), (5.0, 1.0, 0.1)] {
            let p = ModelParams::new(orr, eta, q).unwrap();
            let (em, ep) = derive_couplings(&p);
            assert_relative_eq!(ep * ep - em * em, eta * eta * q / 8.0, max_relative = 1e-13);
        }
    }

    #[test]
    fn estimate_eta_silicon() {
        // Silicon waveguide at 10¹¹ W/m² gives η ≈ 10⁻³.
        let eta = estimate_eta(&PhysicalConstants::silicon());
        assert_relative_eq!(eta, 1.03e-3, max_relative = 0.01);
    }

    #[test]
    fn estimate_eta_trivial_cases() {
        let zero_kerr = PhysicalConstants::new(1.0, 3.42, 0.0, 1e11).unwrap();
        assert_eq!(estimate_eta(&zero_kerr), 0.0);
        let unit = PhysicalConstants::new(1.0, 1.0, 0.125, 1.0).unwrap();
        assert_eq!(estimate_eta(&unit), 1.0);
    }

    #[test]
    fn estimate_eta_roundtrip_recovers_intensity() {
        let c = PhysicalConstants::silicon();
        let eta = estimate_eta(&c);
        let recovered = eta * eta * c.n0 / (8.0 * c.n2);
        assert_relative_eq!(recovered, c.intensity, max_relative = 1e-12);
    }

    #[test]
    fn length_conversion_silicon_optimum() {
        // τ = 8.89×10³ at the silicon constants is a 7.95 mm waveguide.
        let c = PhysicalConstants::silicon();
        let l = dimensionless_length_to_physical(8.89e3, &c);
        assert_relative_eq!(l, 7.95e-3, max_relative = 0.005);
    }

    #[test]
    fn length_conversion_trivial_cases() {
        let c = PhysicalConstants::silicon();
        assert_eq!(dimensionless_length_to_physical(0.0, &c), 0.0);
        // Unit case: one dimensionless time unit is c′/Ω meters.
        let l = dimensionless_length_to_physical(1.0, &c);
        assert_relative_eq!(l, c.phase_velocity() / c.omega_hz, max_relative = 1e-15);
    }

    #[test]
    fn validation_rejects_out_of_domain() {
        assert!(ModelParams::new(12.4, -1e-3, 1.0).is_err());
        assert!(ModelParams::new(12.4, 1e-3, -0.1).is_err());
        assert!(ModelParams::new(12.4, 1e-3, 12.5).is_err());
        assert!(ModelParams::new(0.0, 1e-3, 0.0).is_err());
        assert!(ModelParams::new(f64::NAN, 1e-3, 0.0).is_err());
        assert!(PhysicalConstants::new(0.0, 3.42, 4.5e-18, 1e11).is_err());
        assert!(PhysicalConstants::new(1.0, 0.0, 4.5e-18, 1e11).is_err());
        assert!(PhysicalConstants::new(1.0, 3.42, -1e-18, 1e11).is_err());
        assert!(PhysicalConstants::new(1.0, 3.42, 4.5e-18, -1.0).is_err());
        // boundary q = omega_ratio is allowed (η₋ = 0 there)
        assert!(ModelParams::new(12.4, 1e-3, 12.4).is_ok());
    }
}
