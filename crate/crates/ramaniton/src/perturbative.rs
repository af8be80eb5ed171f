//! Effective pair coupling from second-order (Schrieffer–Wolff) elimination
//! of the phonon.
//!
//! Off resonance (q ≠ 1) the phonon can be integrated out, leaving a direct
//! Stokes/anti-Stokes pair interaction of strength g = η₊η₋/(1 − q): the
//! photons bind into Cooper-pair-like two-mode squeezed pairs. The resulting
//! squeezing envelope grows linearly in time, S = (20/ln 10)·|g|·τ dB at the
//! optimal phase.
//!
//! The expansion diverges as q → 1 — exactly where the nonperturbative
//! treatment keeps working and the squeezing is strongest — so this module
//! serves as an independent cross-check of the exact pipeline in its own
//! regime of validity, not as a production path.

use crate::model::{derive_couplings, ModelParams};
use crate::Error;

/// |1 − q| below which the eliminated-phonon denominator is treated as
/// singular.
pub const SINGULARITY_WINDOW: f64 = 1e-9;

/// Decibels per unit squeeze parameter: 20/ln 10.
const DB_PER_NEPER: f64 = 8.685889638065035;

/// Perturbative prediction at one (params, τ) point.
#[derive(Debug, Clone, Copy)]
pub struct SwPrediction {
    /// Effective pair coupling g = η₊η₋/(1 − q), units Ω. Signed: negative
    /// above the resonance.
    pub g_sw: f64,
    /// Squeeze parameter r = g·τ.
    pub r: f64,
    /// Envelope squeezing (20/ln 10)·|g|·τ at the optimal phase, dB.
    pub s_db_predicted: f64,
}

/// Effective pair coupling g = η₊η₋/(1 − q).
///
/// Fails with [`Error::Singularity`] within [`SINGULARITY_WINDOW`] of the
/// resonance q = 1, where the eliminated-phonon expansion blows up.
pub fn sw_coupling(params: &ModelParams) -> Result<f64, Error> {
    let detuning = 1.0 - params.q;
    if !(detuning.abs() > SINGULARITY_WINDOW) {
        return Err(Error::Singularity(format!(
            "pair coupling diverges at q = {} (|1−q| = {:.3e})",
            params.q,
            detuning.abs()
        )));
    }
    let (em, ep) = derive_couplings(params);
    Ok(ep * em / detuning)
}

/// Full perturbative prediction (coupling, squeeze parameter, envelope dB).
pub fn sw_prediction(params: &ModelParams, tau: f64) -> Result<SwPrediction, Error> {
    let g_sw = sw_coupling(params)?;
    Ok(SwPrediction {
        g_sw,
        r: g_sw * tau,
        s_db_predicted: DB_PER_NEPER * (g_sw * tau).abs(),
    })
}

/// Perturbative squeezing envelope S = (20/ln 10)·|g·τ| in dB.
pub fn sw_squeezing_db(params: &ModelParams, tau: f64) -> Result<f64, Error> {
    Ok(sw_prediction(params, tau)?.s_db_predicted)
}
