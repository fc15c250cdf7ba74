//! Environment model: Ohmic spectral density with a Lorentz–Drude cutoff,
//! the thermally weighted spectral distribution, and the averaging
//! normalization.
//!
//! Temperatures are carried as `k_B T / (hbar omega0)`; the `hbar = 1`
//! convention of the distribution's `coth(hbar omega / 2 k_B T)` argument is
//! built in.

use crate::closed_drive::OscillatorParams;
use crate::error::{ensure_finite, Error, Result};
use crate::quad::{self, QuadConfig};

/// High-temperature classification of a [`SpectralModel`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HighTClass {
    /// `k_B T / (hbar omega0) >= 50`: high-temperature formulas are solid.
    Strong,
    /// In `[10, 50)`: usable, but worth a warning at the surface.
    Marginal,
    /// Below 10: high-temperature operations refuse to run.
    Invalid,
}

/// Reservoir parameters: cutoff, scaled temperature, dimensionless coupling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralModel {
    /// Cutoff angular frequency `omega_c`.
    pub omega_c: f64,
    /// `k_B T / (hbar omega0)`.
    pub temperature_scaled: f64,
    /// Dimensionless system-reservoir coupling `g`.
    pub coupling_g: f64,
    r: f64,
}

impl SpectralModel {
    pub fn new(
        omega_c: f64,
        temperature_scaled: f64,
        coupling_g: f64,
        osc: &OscillatorParams,
    ) -> Result<Self> {
        for (name, value, positive) in [
            ("omega_c", omega_c, true),
            ("temperature_scaled", temperature_scaled, true),
            ("coupling_g", coupling_g, false),
        ] {
            ensure_finite(name, value)?;
            if value < 0.0 || (positive && value == 0.0) {
                return Err(Error::InvalidParameter {
                    name,
                    value,
                    requirement: if positive {
                        "must be positive"
                    } else {
                        "must be nonnegative"
                    },
                });
            }
        }
        Ok(SpectralModel {
            omega_c,
            temperature_scaled,
            coupling_g,
            r: omega_c / osc.omega0,
        })
    }

    /// Model in the dimensionless convention, specified by `r = omega_c/omega0`.
    pub fn from_ratio(r: f64, temperature_scaled: f64, coupling_g: f64) -> Result<Self> {
        Self::new(
            r,
            temperature_scaled,
            coupling_g,
            &OscillatorParams::dimensionless(),
        )
    }

    /// `r = omega_c / omega0`.
    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn omega0(&self) -> f64 {
        self.omega_c / self.r
    }

    pub fn high_t_class(&self) -> HighTClass {
        if self.temperature_scaled >= 50.0 {
            HighTClass::Strong
        } else if self.temperature_scaled >= 10.0 {
            HighTClass::Marginal
        } else {
            HighTClass::Invalid
        }
    }

    pub fn require_high_t(&self) -> Result<()> {
        if self.high_t_class() == HighTClass::Invalid {
            Err(Error::NotHighTemperature(self.temperature_scaled))
        } else {
            Ok(())
        }
    }
}

/// Thermal occupation of one environment mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModePopulation {
    pub n_e: f64,
}

/// `J(omega) = (2 omega / pi) omega_c^2 / (omega_c^2 + omega^2)`.
pub fn spectral_density(omega: f64, model: &SpectralModel) -> Result<f64> {
    if !(omega >= 0.0) {
        return Err(Error::NegativeFrequency(omega));
    }
    let c2 = model.omega_c * model.omega_c;
    Ok(2.0 * omega / std::f64::consts::PI * c2 / (c2 + omega * omega))
}

/// Bose occupation `n_e(omega) = 1 / (e^{hbar omega / k_B T} - 1)`.
pub fn mode_population(omega: f64, model: &SpectralModel) -> Result<ModePopulation> {
    if !(omega > 0.0) {
        return Err(Error::NegativeFrequency(omega));
    }
    let x = omega / model.omega0() / model.temperature_scaled;
    Ok(ModePopulation {
        n_e: 1.0 / x.exp_m1(),
    })
}

/// Spectral distribution `I(omega) = J(omega) [n_e(omega) + 1/2]`
/// `= (omega/pi) omega_c^2/(omega_c^2 + omega^2) coth(hbar omega / 2 k_B T)`.
///
/// Below `hbar omega / k_B T = 1e-6` the coth is replaced by its small-argument
/// limit, giving `(2 k_B T / pi) omega_c^2/(omega_c^2 + omega^2)` smoothly.
pub fn spectral_distribution(omega: f64, model: &SpectralModel) -> Result<f64> {
    if !(omega >= 0.0) {
        return Err(Error::NegativeFrequency(omega));
    }
    let c2 = model.omega_c * model.omega_c;
    let lorentz = c2 / (c2 + omega * omega);
    let kbt = model.temperature_scaled * model.omega0();
    let x = omega / kbt;
    if x < 1e-6 {
        return Ok(2.0 * kbt / std::f64::consts::PI * lorentz);
    }
    // coth(x/2) = 1 + 2/(e^x - 1), stable for all positive x.
    let coth_half = 1.0 + 2.0 / x.exp_m1();
    Ok(omega / std::f64::consts::PI * lorentz * coth_half)
}

/// High-temperature form `I(omega) = (2 k_B T / pi) omega_c^2/(omega_c^2 + omega^2)`.
pub fn spectral_distribution_high_t(omega: f64, model: &SpectralModel) -> Result<f64> {
    if !(omega >= 0.0) {
        return Err(Error::NegativeFrequency(omega));
    }
    let c2 = model.omega_c * model.omega_c;
    let kbt = model.temperature_scaled * model.omega0();
    Ok(2.0 * kbt / std::f64::consts::PI * c2 / (c2 + omega * omega))
}

/// Averaging normalization `N = omega_c (2/pi) Int_0^inf omega_c^2/(omega_c^2+omega^2) domega`,
/// whose arctangent integral evaluates to `omega_c^2` in closed form.
pub fn normalization(model: &SpectralModel) -> f64 {
    model.omega_c * model.omega_c
}

/// Quadrature of the normalization integral truncated at `upper`; the closed
/// form minus this value is the analytic arctangent tail
/// `omega_c^2 (1 - (2/pi) atan(upper/omega_c))`.
pub fn normalization_quadrature(
    model: &SpectralModel,
    upper: f64,
    cfg: &QuadConfig,
) -> Result<f64> {
    let c2 = model.omega_c * model.omega_c;
    let q = quad::integrate(|w| c2 / (c2 + w * w), 0.0, upper, cfg)?;
    Ok(model.omega_c * 2.0 / std::f64::consts::PI * q.value)
}
