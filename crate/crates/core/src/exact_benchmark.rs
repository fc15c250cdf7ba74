//! Independent ground truth: the damped-oscillator master-equation solution
//! in the secular, high-temperature regime.
//!
//! The time-dependent diffusion coefficient is
//!
//! ```text
//! Delta(t) = 2 g^2 k_B T r^2/(1+r^2) { 1 - e^{-omega_c t} [cos(omega0 t) - (1/r) sin(omega0 t)] }
//! ```
//!
//! and the heating function of an initial ground state is its running
//! integral. The antiderivative used below is elementary
//! (`Int e^{-r s} cos s`, `Int e^{-r s} sin s`) and is unit-tested against
//! adaptive quadrature instead of being trusted from hand algebra. The
//! dissipation coefficient is carried as a general `gamma(t)` but pinned to
//! zero in the high-temperature pipeline.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{self, FockDensityMatrix};
use crate::quad::{self, QuadConfig};
use crate::series::{HeatingSeries, SeriesMeta};
use crate::spectral::SpectralModel;

/// Master-equation coefficients at one instant, in the model's frequency units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MasterEqCoefficients {
    /// Diffusion coefficient `Delta(t)`.
    pub delta: f64,
    /// Dissipation coefficient `gamma(t)`; zero in the high-T regime.
    pub gamma: f64,
}

/// Both coefficients at time `t` (`gamma` identically zero here).
pub fn master_eq_coefficients(t: f64, model: &SpectralModel) -> Result<MasterEqCoefficients> {
    Ok(MasterEqCoefficients {
        delta: diffusion_coefficient(t, model)?,
        gamma: 0.0,
    })
}

/// Asymptotic heating rate `2 g^2 k_B T r^2 / (1 + r^2)` (per unit time).
pub fn asymptotic_heating_rate(model: &SpectralModel) -> f64 {
    let r = model.r();
    let kbt = model.temperature_scaled * model.omega0();
    2.0 * model.coupling_g * model.coupling_g * kbt * r * r / (1.0 + r * r)
}

/// Diffusion coefficient `Delta(t)`; may dip negative for `r < 1` at
/// intermediate times, the non-Lindblad signature.
pub fn diffusion_coefficient(t: f64, model: &SpectralModel) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(Error::NegativeTime(t));
    }
    model.require_high_t()?;
    let r = model.r();
    let tau = model.omega0() * t;
    let envelope = (-r * tau).exp();
    Ok(asymptotic_heating_rate(model) * (1.0 - envelope * (tau.cos() - tau.sin() / r)))
}

/// `Int_0^tau e^{-r s} cos s ds` and `Int_0^tau e^{-r s} sin s ds`.
fn damped_trig_integrals(r: f64, tau: f64) -> (f64, f64) {
    let denom = 1.0 + r * r;
    let envelope = (-r * tau).exp();
    let i_cos = (r - envelope * (r * tau.cos() - tau.sin())) / denom;
    let i_sin = (1.0 - envelope * (tau.cos() + r * tau.sin())) / denom;
    (i_cos, i_sin)
}

/// Exact heating `<n>(tau)` via the closed antiderivative of `Delta`.
pub fn exact_heating_at(tau: f64, model: &SpectralModel) -> Result<f64> {
    if !(tau >= 0.0) {
        return Err(Error::NegativeTime(tau));
    }
    model.require_high_t()?;
    let r = model.r();
    let (i_cos, i_sin) = damped_trig_integrals(r, tau);
    // Dimensionless: rate / omega0 integrated over tau.
    let rate = asymptotic_heating_rate(model) / model.omega0();
    Ok(rate * (tau - i_cos + i_sin / r))
}

/// Exact heating series on an ascending `omega0 t` grid.
pub fn exact_heating(taus: &[f64], model: &SpectralModel) -> Result<HeatingSeries> {
    let values = taus
        .iter()
        .map(|&tau| exact_heating_at(tau, model))
        .collect::<Result<Vec<f64>>>()?;
    HeatingSeries::new(
        taus.to_vec(),
        values,
        SeriesMeta {
            band: None,
            phase: None,
            r: model.r(),
            coupling_g: model.coupling_g,
            temperature_scaled: model.temperature_scaled,
        },
    )
}

/// Same quantity through adaptive quadrature of `Delta`, the cross-check for
/// the closed antiderivative.
pub fn exact_heating_quadrature(tau: f64, model: &SpectralModel, cfg: &QuadConfig) -> Result<f64> {
    if tau == 0.0 {
        return Ok(0.0);
    }
    let omega0 = model.omega0();
    let q = quad::integrate(
        |s| diffusion_coefficient(s / omega0, model).expect("validated domain") / omega0,
        0.0,
        tau,
        cfg,
    )?;
    Ok(q.value)
}

/// Thermal state `rho_{k,k} = [n/(n+1)]^k / (n+1)` truncated at `dim`;
/// off-diagonals are exactly zero and the trace deficit is `[n/(n+1)]^dim`.
pub fn thermal_populations(n_mean: f64, dim: usize) -> Result<FockDensityMatrix> {
    if !(n_mean >= 0.0) {
        return Err(Error::InvalidParameter {
            name: "n_mean",
            value: n_mean,
            requirement: "must be nonnegative",
        });
    }
    fock::thermal_matrix(n_mean, dim)
}

/// Quantum-characteristic-function bookkeeping: `Gamma(t) = 2 Int_0^t gamma`
/// and `Delta_Gamma(t) = e^{-Gamma} Int_0^t e^{Gamma(s)} Delta(s) ds`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QcfState {
    pub gamma_integral: f64,
    pub delta_gamma: f64,
}

impl QcfState {
    /// Evolved characteristic function of an initial ground state:
    /// `chi(xi) = exp{-[Delta_Gamma + e^{-Gamma}/2] |xi|^2}`.
    pub fn chi(&self, xi: Complex64) -> Complex64 {
        let width = self.delta_gamma + 0.5 * (-self.gamma_integral).exp();
        Complex64::new((-width * xi.norm_sqr()).exp(), 0.0)
    }

    /// `<n> + 1/2 = Delta_Gamma + e^{-Gamma}/2`, the identity connecting the
    /// evolved width to the instantaneous thermal occupation.
    pub fn mean_occupation(&self) -> f64 {
        self.delta_gamma + 0.5 * (-self.gamma_integral).exp() - 0.5
    }
}

/// Assemble the QCF state from arbitrary coefficient functions of `tau`
/// (both in per-`omega0 t` units), fully numerically.
pub fn qcf_state_from(
    tau: f64,
    delta: impl Fn(f64) -> f64,
    gamma: impl Fn(f64) -> f64,
    cfg: &QuadConfig,
) -> Result<QcfState> {
    if !(tau >= 0.0) {
        return Err(Error::NegativeTime(tau));
    }
    if tau == 0.0 {
        return Ok(QcfState {
            gamma_integral: 0.0,
            delta_gamma: 0.0,
        });
    }
    let big_gamma = |s: f64| -> Result<f64> {
        if s == 0.0 {
            return Ok(0.0);
        }
        Ok(2.0 * quad::integrate(&gamma, 0.0, s, cfg)?.value)
    };
    let gamma_tau = big_gamma(tau)?;
    let weighted = quad::integrate(
        |s| big_gamma(s).expect("inner gamma integral").exp() * delta(s),
        0.0,
        tau,
        cfg,
    )?;
    Ok(QcfState {
        gamma_integral: gamma_tau,
        delta_gamma: (-gamma_tau).exp() * weighted.value,
    })
}

/// QCF state of the high-temperature model at `tau` (`gamma = 0`).
pub fn qcf_state(tau: f64, model: &SpectralModel, cfg: &QuadConfig) -> Result<QcfState> {
    model.require_high_t()?;
    let omega0 = model.omega0();
    qcf_state_from(
        tau,
        |s| diffusion_coefficient(s / omega0, model).expect("validated domain") / omega0,
        |_| 0.0,
        cfg,
    )
}

/// Thermal-state characteristic function `exp{-(n + 1/2)|xi|^2}`.
pub fn thermal_qcf(n_mean: f64, xi: Complex64) -> Complex64 {
    Complex64::new((-(n_mean + 0.5) * xi.norm_sqr()).exp(), 0.0)
}

/// One compared sample of [`qcf_verify`].
#[derive(Debug, Clone, Copy)]
pub struct QcfSample {
    pub xi: Complex64,
    pub chi_evolved: Complex64,
    pub chi_thermal: Complex64,
    pub relative_residual: f64,
}

/// Outcome of the thermal-state verification at one time.
#[derive(Debug, Clone)]
pub struct QcfReport {
    pub tau: f64,
    pub n_mean: f64,
    pub samples: Vec<QcfSample>,
    pub max_residual: f64,
    pub tolerance: f64,
}

impl QcfReport {
    pub fn pass(&self) -> bool {
        self.max_residual <= self.tolerance
    }
}

/// Verify that the evolved characteristic function equals the thermal one at
/// `n = <n>(tau)` on the given `xi` samples, to 1e-9 relative.
///
/// The evolved side integrates the diffusion coefficient numerically through
/// the general-`Gamma` machinery; the thermal side uses the closed-form
/// heating. A mismatch is reported, not raised.
pub fn qcf_verify(
    tau: f64,
    model: &SpectralModel,
    xi_samples: &[Complex64],
    cfg: &QuadConfig,
) -> Result<QcfReport> {
    let tight = QuadConfig {
        abs_tol: cfg.abs_tol.min(1e-12),
        ..*cfg
    };
    let state = qcf_state(tau, model, &tight)?;
    let n_mean = exact_heating_at(tau, model)?;
    let mut samples = Vec::with_capacity(xi_samples.len());
    let mut max_residual: f64 = 0.0;
    for &xi in xi_samples {
        let evolved = state.chi(xi);
        let thermal = thermal_qcf(n_mean, xi);
        let residual = (evolved - thermal).norm() / thermal.norm();
        max_residual = max_residual.max(residual);
        samples.push(QcfSample {
            xi,
            chi_evolved: evolved,
            chi_thermal: thermal,
            relative_residual: residual,
        });
    }
    Ok(QcfReport {
        tau,
        n_mean,
        samples,
        max_residual,
        tolerance: 1e-9,
    })
}
