//! Heisenberg-picture vacuum dynamics and observables.
//!
//! With the canonical basis in hand, time evolution is a similarity
//! transform: M(τ) = U·diag(e^{−iω_jτ}, e^{+iω_jτ})·U⁻¹ with U⁻¹ = Z·U†·Z.
//! Acting on the vacuum, the state stays Gaussian, so the 3×3 normal
//! (⟨b_i†b_j⟩) and anomalous (⟨b_ib_j⟩) second-moment matrices carry
//! everything measurable:
//!
//! * occupations N_S, N_aS, N_c from the normal diagonal;
//! * the joint Stokes/anti-Stokes quadrature
//!   X(φ) = (e^{−iφ}(b_S + b_aS) + h.c.)/2^{3/2}, whose variance
//!   ¼·(1 + ⟨P†P⟩ + Re e^{−2iφ}⟨P²⟩) with P = b_S + b_aS dips below the
//!   vacuum ¼ at the squeezing phase;
//! * the zero-delay cross-correlation g² via the Gaussian (Wick)
//!   factorization of ⟨b_S†b_aS†b_aSb_S⟩.
//!
//! Two exact identities of this model double as runtime self-checks: the
//! Wick g² equals 2 + 1/N_S, and the optimally-phased variance ratio equals
//! (√(1+N_S) − √(N_S−N_c))². [`evolve_series`] enforces them (plus the
//! conservation law and the symplectic residual) at every point it emits.

use ndarray::{Array1, Array2};
use num_complex::Complex64;

use crate::model::ModelParams;
use crate::nambu::{build_nambu_matrix, diagonalize, BogoliubovBasis, ParityMetric};
use crate::parallel::try_map_ordered;
use crate::Error;

type C64 = Complex64;

/// Tolerance for the symplectic residual max|M·Z·M†·Z − 𝕀|.
pub const SYMPLECTIC_TOL: f64 = 1e-9;

/// Conservation |N_S − N_aS − N_c| must stay below this times (1 + N_S).
pub const CONSERVATION_TOL: f64 = 1e-9;

/// Relative tolerance for the exact observable identities.
pub const IDENTITY_REL_TOL: f64 = 1e-9;

/// Floating-point floor for the variance identity, scaled by the moment
/// magnitude A = 1 + ⟨P†P⟩ + |⟨P²⟩|. Evaluating ¼(A − |⟨P²⟩|) in deep
/// squeezing cancels up to ~5 digits, amplifying last-digit moment noise by
/// |⟨P²⟩|/var (measured up to 3×10⁴), so a pure relative bound is
/// unattainable in f64; this floor absorbs it with margin.
pub const IDENTITY_ABS_FLOOR: f64 = 1e-11;

/// Occupation threshold below which g² is reported as undefined.
pub const G2_OCCUPATION_MIN: f64 = 1e-12;

/// N_S above which the g² identity self-check is applied (below it the
/// identity value 2 + 1/N_S is dominated by fp noise in 1/N_S).
const G2_CHECK_MIN_NS: f64 = 1e-6;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Heisenberg propagator M(τ) on the doubled mode vector.
#[derive(Debug, Clone)]
pub struct Propagator {
    /// 6×6 complex matrix mapping v(0) to v(τ).
    pub m: Array2<C64>,
    /// Dimensionless time τ = Ωt.
    pub tau: f64,
}

/// Vacuum second moments at a fixed time.
#[derive(Debug, Clone)]
pub struct GaussianMoments {
    /// ⟨b_i†·b_j⟩, Hermitian positive semidefinite, order (b_S, c, b_aS).
    pub normal: Array2<C64>,
    /// ⟨b_i·b_j⟩, symmetric.
    pub anomalous: Array2<C64>,
    /// Dimensionless time τ = Ωt.
    pub tau: f64,
}

/// One evaluated time/parameter point with every derived observable.
#[derive(Debug, Clone, Copy)]
pub struct ObservablePoint {
    pub tau: f64,
    /// Stokes photon occupation.
    pub n_s: f64,
    /// Anti-Stokes photon occupation.
    pub n_as: f64,
    /// Phonon occupation.
    pub n_c: f64,
    /// Squeezing in dB at `phi` (positive = below vacuum noise).
    pub s_db: f64,
    /// Quadrature phase the squeezing was evaluated at.
    pub phi: f64,
    /// Stokes/anti-Stokes cross-correlation; `None` when occupations are
    /// below [`G2_OCCUPATION_MIN`] (e.g. τ = 0 or η = 0).
    pub g2: Option<f64>,
}

/// Quadrature-phase handling for series and sweeps: a fixed φ for every
/// point, or the closed-form optimum recomputed per point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PhiPolicy {
    Fixed(f64),
    Optimal,
}

/// Builds M(τ) = U·D(τ)·U⁻¹ with D = diag(e^{−iω_jτ}; e^{+iω_jτ}) and
/// U⁻¹ = Z·U†·Z (exact inverse of a canonical U). τ = 0 short-circuits to
/// the exact identity.
pub fn propagator(basis: &BogoliubovBasis, tau: f64) -> Propagator {
    if tau == 0.0 {
        return Propagator {
            m: Array2::from_diag(&Array1::from_elem(6, c(1.0, 0.0))),
            tau,
        };
    }
    let z = ParityMetric::SIGNS;
    let u = &basis.u;
    // scale columns of U by the evolution phases
    let mut ud = u.clone();
    for j in 0..6 {
        let w = if j < 3 {
            basis.omegas[j]
        } else {
            -basis.omegas[j - 3]
        };
        let ph = c(0.0, -w * tau).exp();
        ud.column_mut(j).mapv_inplace(|x| x * ph);
    }
    // U⁻¹ = Z U† Z, elementwise z_i·conj(U_ji)·z_j
    let mut uinv = Array2::<C64>::zeros((6, 6));
    for i in 0..6 {
        for j in 0..6 {
            uinv[[i, j]] = c(z[i] * z[j], 0.0) * u[[j, i]].conj();
        }
    }
    Propagator {
        m: ud.dot(&uinv),
        tau,
    }
}

/// Measures the symplectic residual max|M·Z·M†·Z − 𝕀| of a propagator —
/// the evolution analogue of the basis canonicality check.
pub fn symplectic_residual(prop: &Propagator) -> f64 {
    let z = ParityMetric::SIGNS;
    let m = &prop.m;
    let mut worst = 0.0_f64;
    for i in 0..6 {
        for j in 0..6 {
            let mut acc = c(0.0, 0.0);
            for k in 0..6 {
                acc += m[[i, k]] * c(z[k], 0.0) * m[[j, k]].conj();
            }
            acc *= c(z[j], 0.0);
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((acc - c(target, 0.0)).norm());
        }
    }
    worst
}

/// Vacuum second moments from the propagator columns: with v(τ) = M·v(0)
/// and ⟨v(0) vacuum⟩, only the creation-operator columns contribute:
/// ⟨b_i†b_j⟩ = Σ_m conj(M_{i,m+3})·M_{j,m+3} and
/// ⟨b_i b_j⟩ = Σ_m M_{i,m}·M_{j,m+3}.
pub fn moments(prop: &Propagator) -> GaussianMoments {
    let m = &prop.m;
    let mut normal = Array2::<C64>::zeros((3, 3));
    let mut anomalous = Array2::<C64>::zeros((3, 3));
    for i in 0..3 {
        for j in 0..3 {
            let mut n = c(0.0, 0.0);
            let mut a = c(0.0, 0.0);
            for k in 0..3 {
                n += m[[i, k + 3]].conj() * m[[j, k + 3]];
                a += m[[i, k]] * m[[j, k + 3]];
            }
            normal[[i, j]] = n;
            anomalous[[i, j]] = a;
        }
    }
    // ⟨b_i b_j⟩ = ⟨b_j b_i⟩ holds exactly for bosons; the two sums above
    // differ only by cancellation noise, so half-summing restores the
    // symmetry bit-for-bit without changing any observable.
    for i in 0..3 {
        for j in (i + 1)..3 {
            let s = (anomalous[[i, j]] + anomalous[[j, i]]) * 0.5;
            anomalous[[i, j]] = s;
            anomalous[[j, i]] = s;
        }
    }
    GaussianMoments {
        normal,
        anomalous,
        tau: prop.tau,
    }
}

/// Mean occupations `(N_S, N_aS, N_c)` from the normal-moment diagonal
/// (mode order on the diagonal is b_S, c, b_aS).
pub fn occupations(moments: &GaussianMoments) -> (f64, f64, f64) {
    (
        moments.normal[[0, 0]].re,
        moments.normal[[2, 2]].re,
        moments.normal[[1, 1]].re,
    )
}

/// ⟨P†P⟩ and ⟨P²⟩ for the pair operator P = b_S + b_aS.
fn pair_moments(m: &GaussianMoments) -> (f64, C64) {
    let n = &m.normal;
    let a = &m.anomalous;
    let pdp = (n[[0, 0]] + n[[2, 2]] + n[[0, 2]] + n[[0, 2]].conj()).re;
    let p2 = a[[0, 0]] + a[[2, 2]] + a[[0, 2]] + a[[2, 0]];
    (pdp, p2)
}

/// Variance of the joint quadrature X(φ): ¼·(1 + ⟨P†P⟩ + Re e^{−2iφ}⟨P²⟩).
/// Vacuum gives exactly ¼.
pub fn quadrature_variance(moments: &GaussianMoments, phi: f64) -> f64 {
    let (pdp, p2) = pair_moments(moments);
    0.25 * (1.0 + pdp + (c(0.0, -2.0 * phi).exp() * p2).re)
}

/// Squeezing in decibels relative to vacuum noise:
/// S = −10·log₁₀(var/¼). Positive below the vacuum level.
pub fn squeezing_db(moments: &GaussianMoments, phi: f64) -> f64 {
    -10.0 * (quadrature_variance(moments, phi) / 0.25).log10()
}

/// Closed-form minimizing phase of the variance: the cosine term is
/// |⟨P²⟩|·cos(2φ − arg⟨P²⟩), so φ* = (arg⟨P²⟩ + π)/2. A flat landscape
/// (⟨P²⟩ = 0, e.g. τ = 0) returns π/2 by convention.
pub fn optimal_phase(moments: &GaussianMoments) -> f64 {
    let (_, p2) = pair_moments(moments);
    if p2.norm() == 0.0 {
        std::f64::consts::FRAC_PI_2
    } else {
        (p2.arg() + std::f64::consts::PI) / 2.0
    }
}

/// Zero-delay Stokes/anti-Stokes cross-correlation from the Gaussian (Wick)
/// factorization:
/// g² = 1 + (|⟨b_Sb_aS⟩|² + |⟨b_S†b_aS⟩|²)/(N_S·N_aS).
///
/// Requires both photon occupations above [`G2_OCCUPATION_MIN`]; below that
/// the correlation is undefined (τ = 0, η = 0).
pub fn g2(moments: &GaussianMoments) -> Result<f64, Error> {
    let (n_s, n_as, _) = occupations(moments);
    if !(n_s > G2_OCCUPATION_MIN && n_as > G2_OCCUPATION_MIN) {
        return Err(Error::UndefinedCorrelation(format!(
            "occupations N_S = {n_s:.3e}, N_aS = {n_as:.3e} below {G2_OCCUPATION_MIN:.0e}"
        )));
    }
    let a02 = moments.anomalous[[0, 2]];
    let n02 = moments.normal[[0, 2]];
    Ok(1.0 + (a02.norm_sqr() + n02.norm_sqr()) / (n_s * n_as))
}

/// The exact squeezing–occupation relation of this model: the
/// optimally-phased variance ratio var(φ*)/¼ equals
/// (√(1+N_S) − √(N_S−N_c))².
///
/// Requires N_S ≥ N_c ≥ 0 (vacuum-seeded evolution guarantees it).
pub fn analytic_variance_ratio(n_s: f64, n_c: f64) -> Result<f64, Error> {
    if !(n_s >= n_c && n_c >= 0.0) {
        return Err(Error::InvalidOccupations(format!(
            "need N_S >= N_c >= 0, got N_S = {n_s}, N_c = {n_c}"
        )));
    }
    let d = (1.0 + n_s).sqrt() - (n_s - n_c).sqrt();
    Ok(d * d)
}

/// Evaluates one moment set into an [`ObservablePoint`] under a φ policy,
/// running the always-on self-checks. Shared by series, sweeps and the
/// optimizer.
pub(crate) fn observe_checked(
    m: &GaussianMoments,
    policy: PhiPolicy,
) -> Result<ObservablePoint, Error> {
    let (n_s, n_as, n_c) = occupations(m);
    let tau = m.tau;
    for (name, v) in [("N_S", n_s), ("N_aS", n_as), ("N_c", n_c)] {
        if !(v >= -1e-12) {
            return Err(Error::SelfCheck(format!(
                "negative occupation {name} = {v:.3e} at tau = {tau}"
            )));
        }
    }
    if !((n_s - n_as - n_c).abs() <= CONSERVATION_TOL * (1.0 + n_s)) {
        return Err(Error::SelfCheck(format!(
            "conservation violated: N_S−N_aS−N_c = {:.3e} at tau = {tau}",
            n_s - n_as - n_c
        )));
    }

    // Exact identities at the optimal phase.
    let phi_star = optimal_phase(m);
    let (pdp, p2) = pair_moments(m);
    let var_star = quadrature_variance(m, phi_star);
    let n_c_clamped = n_c.clamp(0.0, n_s.max(0.0));
    let rhs = analytic_variance_ratio(n_s.max(0.0), n_c_clamped)?;
    let scale_a = 1.0 + pdp + p2.norm();
    if !((var_star / 0.25 - rhs).abs() <= IDENTITY_REL_TOL * rhs + IDENTITY_ABS_FLOOR * scale_a) {
        return Err(Error::SelfCheck(format!(
            "variance identity violated at tau = {tau}: lhs = {:.12e}, rhs = {rhs:.12e}",
            var_star / 0.25
        )));
    }
    // Minimum-uncertainty bound for the conjugate pair of X(φ).
    let var_conj = quadrature_variance(m, phi_star + std::f64::consts::FRAC_PI_2);
    if !(var_star * var_conj >= (1.0 / 16.0) * (1.0 - 1e-9)) {
        return Err(Error::SelfCheck(format!(
            "uncertainty product {:.3e} below 1/16 at tau = {tau}",
            var_star * var_conj
        )));
    }

    let g2_val = match g2(m) {
        Ok(v) => Some(v),
        Err(Error::UndefinedCorrelation(_)) => None,
        Err(e) => return Err(e),
    };
    if let Some(wick) = g2_val {
        if n_s > G2_CHECK_MIN_NS {
            let target = 2.0 + 1.0 / n_s;
            if !((wick - target).abs() <= IDENTITY_REL_TOL * target) {
                return Err(Error::SelfCheck(format!(
                    "g2 identity violated at tau = {tau}: wick = {wick:.12e}, 2+1/N_S = {target:.12e}"
                )));
            }
        }
    }

    let phi = match policy {
        PhiPolicy::Fixed(phi) => phi,
        PhiPolicy::Optimal => phi_star,
    };
    Ok(ObservablePoint {
        tau,
        n_s,
        n_as,
        n_c,
        s_db: squeezing_db(m, phi),
        phi,
        g2: g2_val,
    })
}

/// Evolves the vacuum over a τ grid: one diagonalization, then independent
/// (parallel, index-ordered) propagator/moment evaluations with the full
/// self-check battery at every point.
pub fn evolve_series(
    params: &ModelParams,
    taus: &[f64],
    policy: PhiPolicy,
) -> Result<Vec<ObservablePoint>, Error> {
    let basis = diagonalize(&build_nambu_matrix(params))?;
    try_map_ordered(taus, |&tau| {
        let prop = propagator(&basis, tau);
        let sym = symplectic_residual(&prop);
        if !(sym <= SYMPLECTIC_TOL) {
            return Err(Error::SelfCheck(format!(
                "symplectic residual {sym:.3e} at tau = {tau}"
            )));
        }
        observe_checked(&moments(&prop), policy)
    })
}
