//! Exact dynamics of a closed harmonic oscillator under a single pulsed
//! periodic drive.
//!
//! A drive of amplitude `A`, frequency `omega`, and phase `phi` switched on at
//! t = 0 and off at t leaves an initial ground state in a coherent state. The
//! coherent amplitude in the frame rotating at the trap frequency is
//!
//! ```text
//! beta(t) = -i (kappa tau / 2) [ e^{i phi} sinc(a) e^{i a} + e^{-i phi} sinc(b) e^{i b} ]
//! a = (1 + u) tau / 2,   b = (1 - u) tau / 2,   u = omega/omega0,  tau = omega0 t
//! ```
//!
//! with the dimensionless coupling `kappa = A / sqrt(2 m hbar omega0^3)`.
//! `|beta|^2` is the heating function; the `sinc` form is exact for every
//! drive frequency including resonance, where the apparent `1/(u - 1)` pole
//! cancels against the vanishing numerator.

use num_complex::Complex64;

use crate::error::{ensure_finite, Error, Result};
use crate::fock::FockDensityMatrix;

/// Relative detuning below which the resonance-limit branch is used by
/// [`heating_single`].
pub const RESONANCE_EPS: f64 = 1e-3;

/// Trap parameters. All internal computations reduce to the dimensionless
/// combinations `omega/omega0`, `omega0 t`, and `kappa`, so the default
/// `omega0 = mass = hbar = 1` convention loses nothing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatorParams {
    pub omega0: f64,
    pub mass: f64,
    pub hbar: f64,
}

impl OscillatorParams {
    pub fn new(omega0: f64, mass: f64, hbar: f64) -> Result<Self> {
        for (name, value) in [("omega0", omega0), ("mass", mass), ("hbar", hbar)] {
            ensure_finite(name, value)?;
            if value <= 0.0 {
                return Err(Error::InvalidParameter {
                    name,
                    value,
                    requirement: "must be positive",
                });
            }
        }
        Ok(OscillatorParams { omega0, mass, hbar })
    }

    /// The `omega0 = mass = hbar = 1` working convention.
    pub fn dimensionless() -> Self {
        OscillatorParams {
            omega0: 1.0,
            mass: 1.0,
            hbar: 1.0,
        }
    }
}

impl Default for OscillatorParams {
    fn default() -> Self {
        Self::dimensionless()
    }
}

/// One periodic force pulse: `F(t) = A cos(omega t + phi) / sqrt(2 m hbar omega0)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriveSpec {
    /// Force amplitude `A`.
    pub amplitude: f64,
    /// Drive angular frequency, `>= 0`.
    pub omega: f64,
    phi: f64,
}

impl DriveSpec {
    pub fn new(amplitude: f64, omega: f64, phi: f64) -> Result<Self> {
        ensure_finite("amplitude", amplitude)?;
        ensure_finite("omega", omega)?;
        ensure_finite("phi", phi)?;
        if amplitude < 0.0 {
            return Err(Error::InvalidParameter {
                name: "amplitude",
                value: amplitude,
                requirement: "must be nonnegative",
            });
        }
        if omega < 0.0 {
            return Err(Error::NegativeFrequency(omega));
        }
        Ok(DriveSpec {
            amplitude,
            omega,
            phi: phi.rem_euclid(std::f64::consts::TAU),
        })
    }

    /// Drive specified by its dimensionless coupling `kappa`, i.e. the force
    /// amplitude `A = kappa * sqrt(2 m hbar omega0^3)`.
    pub fn from_kappa(kappa: f64, omega: f64, phi: f64, osc: &OscillatorParams) -> Result<Self> {
        let amplitude = kappa * (2.0 * osc.mass * osc.hbar * osc.omega0.powi(3)).sqrt();
        Self::new(amplitude, omega, phi)
    }

    /// Phase, normalized into `[0, 2*pi)`.
    pub fn phi(&self) -> f64 {
        self.phi
    }
}

/// The two coupling constants derived from a drive: `alpha = A/sqrt(2 m hbar omega0)`
/// (frequency units) and the dimensionless `kappa = alpha/omega0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedCouplings {
    pub alpha: f64,
    pub kappa: f64,
}

impl DerivedCouplings {
    pub fn from_drive(drive: &DriveSpec, osc: &OscillatorParams) -> Self {
        let alpha = drive.amplitude / (2.0 * osc.mass * osc.hbar * osc.omega0).sqrt();
        DerivedCouplings {
            alpha,
            kappa: alpha / osc.omega0,
        }
    }
}

/// Coherent-state amplitude of the driven oscillator at pulse switch-off.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherentAmplitude {
    pub beta: Complex64,
}

impl CoherentAmplitude {
    /// `|beta|^2`, the mean occupation of the coherent state.
    pub fn mean_occupation(&self) -> f64 {
        self.beta.norm_sqr()
    }
}

/// `sin(x)/x` with the removable singularity expanded to fourth order.
///
/// For |x| < 1e-2 the Taylor branch `1 - x^2/6 + x^4/120` is accurate to
/// ~2e-16, far below the 1e-9 continuity budget of the resonance branch.
pub(crate) fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-2 {
        let x2 = x * x;
        1.0 - x2 / 6.0 * (1.0 - x2 / 20.0)
    } else {
        x.sin() / x
    }
}

/// Dimensionless reduction of a (t, drive, osc) triple.
pub(crate) struct Reduced {
    pub tau: f64,
    pub u: f64,
    pub kappa: f64,
    pub phi: f64,
}

fn reduce(t: f64, drive: &DriveSpec, osc: &OscillatorParams) -> Result<Reduced> {
    if !(t >= 0.0) {
        return Err(Error::NegativeTime(t));
    }
    let couplings = DerivedCouplings::from_drive(drive, osc);
    Ok(Reduced {
        tau: osc.omega0 * t,
        u: drive.omega / osc.omega0,
        kappa: couplings.kappa,
        phi: drive.phi,
    })
}

/// Heating shape `|beta|^2 / kappa^2` at fixed phase; exact for all `u >= 0`.
pub(crate) fn heating_shape(u: f64, tau: f64, phi: f64) -> f64 {
    let s_plus = 0.5 * tau * sinc(0.5 * (1.0 + u) * tau);
    let s_minus = 0.5 * tau * sinc(0.5 * (1.0 - u) * tau);
    s_plus * s_plus + s_minus * s_minus + 2.0 * s_plus * s_minus * (u * tau + 2.0 * phi).cos()
}

/// Phase-averaged heating shape: the cross term integrates to zero.
pub(crate) fn phase_averaged_shape(u: f64, tau: f64) -> f64 {
    let s_plus = 0.5 * tau * sinc(0.5 * (1.0 + u) * tau);
    let s_minus = 0.5 * tau * sinc(0.5 * (1.0 - u) * tau);
    s_plus * s_plus + s_minus * s_minus
}

/// Coherent amplitude `beta(t, omega, phi)` in the rotating frame.
///
/// Satisfies `|beta|^2 == heating at the same (t, omega, phi)`; continuous
/// through resonance by construction.
pub fn coherent_amplitude(
    t: f64,
    drive: &DriveSpec,
    osc: &OscillatorParams,
) -> Result<CoherentAmplitude> {
    let red = reduce(t, drive, osc)?;
    let a = 0.5 * (1.0 + red.u) * red.tau;
    let b = 0.5 * (1.0 - red.u) * red.tau;
    let term_plus = Complex64::from_polar(sinc(a), red.phi + a);
    let term_minus = Complex64::from_polar(sinc(b), -red.phi + b);
    let beta = Complex64::new(0.0, -0.5 * red.kappa * red.tau) * (term_plus + term_minus);
    Ok(CoherentAmplitude { beta })
}

/// Heating function `<n>(t, omega, phi)` of a single drive.
///
/// Inside the resonance window `|omega/omega0 - 1| < RESONANCE_EPS` the
/// on-resonance limit is returned, which is what callers in that window are
/// directed to use; everywhere else the value is the exact off-resonant
/// closed form.
pub fn heating_single(t: f64, drive: &DriveSpec, osc: &OscillatorParams) -> Result<f64> {
    let red = reduce(t, drive, osc)?;
    let u = if (red.u - 1.0).abs() < RESONANCE_EPS {
        1.0
    } else {
        red.u
    };
    Ok(red.kappa * red.kappa * heating_shape(u, red.tau, red.phi))
}

/// On-resonance heating `<n>(t) = kappa^2/4 [tau^2 + tau sin(2 tau) + sin^2 tau]`,
/// the phase-zero convention. The drive frequency is treated as exactly `omega0`.
pub fn heating_resonant(t: f64, drive: &DriveSpec, osc: &OscillatorParams) -> Result<f64> {
    let red = reduce(t, drive, osc)?;
    let tau = red.tau;
    let s = tau.sin();
    Ok(0.25 * red.kappa * red.kappa * (tau * tau + tau * (2.0 * tau).sin() + s * s))
}

/// Adiabatic heating `<n>(t) = kappa^2 [1 + cos^2(omega t) - 2 cos(omega t) cos(omega0 t)]`,
/// valid for `omega/omega0` well below one; drops all terms of order `omega/omega0`.
pub fn heating_adiabatic(t: f64, drive: &DriveSpec, osc: &OscillatorParams) -> Result<f64> {
    let red = reduce(t, drive, osc)?;
    let c_drive = (red.u * red.tau).cos();
    let c_trap = red.tau.cos();
    Ok(red.kappa * red.kappa * (1.0 + c_drive * c_drive - 2.0 * c_drive * c_trap))
}

/// Coherent-state density matrix `rho_{k,l} = e^{-|b|^2} b^k conj(b)^l / sqrt(k! l!)`
/// truncated at `dim` Fock levels.
///
/// Requires `|beta|^2 <= 0.1 dim` so the Poisson tail beyond the cutoff stays
/// negligible; the analytic tail bound is recorded on the returned matrix.
pub fn pure_state_density_matrix(
    beta: &CoherentAmplitude,
    dim: usize,
) -> Result<FockDensityMatrix> {
    if dim < 2 {
        return Err(Error::InvalidParameter {
            name: "dim",
            value: dim as f64,
            requirement: "must be at least 2",
        });
    }
    let lambda = beta.mean_occupation();
    if lambda > 0.1 * dim as f64 {
        return Err(Error::TruncationUnsafe {
            dim,
            beta_sq: lambda,
            required: (10.0 * lambda).ceil() as usize,
        });
    }
    // Fock amplitudes via the stable recurrence a_{k+1} = a_k * beta / sqrt(k + 1).
    let mut amps = Vec::with_capacity(dim);
    let mut a = Complex64::new((-0.5 * lambda).exp(), 0.0);
    for k in 0..dim {
        amps.push(a);
        a *= beta.beta / ((k + 1) as f64).sqrt();
    }
    FockDensityMatrix::from_pure_amplitudes(&amps, coherent_tail_bound(lambda, dim))
}

/// Poisson remainder bound: `e^{-l} l^d / d! * (d+1)/(d+1-l)` for `l < d+1`.
pub fn coherent_tail_bound(lambda: f64, dim: usize) -> f64 {
    if lambda == 0.0 {
        return 0.0;
    }
    let mut term = (-lambda).exp();
    for k in 1..=dim {
        term *= lambda / k as f64;
    }
    let d1 = dim as f64 + 1.0;
    term * d1 / (d1 - lambda)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};
    use std::f64::consts::{PI, TAU};

    fn osc() -> OscillatorParams {
        OscillatorParams::dimensionless()
    }

    fn drive(kappa: f64, u: f64, phi: f64) -> DriveSpec {
        DriveSpec::from_kappa(kappa, u, phi, &osc()).unwrap()
    }

    #[test]
    fn zero_duration_leaves_ground_state() {
        for &(u, phi) in &[(0.0, 0.0), (0.4, 1.0), (1.0, 2.0), (2.5, 5.0)] {
            let beta = coherent_amplitude(0.0, &drive(0.1, u, phi), &osc()).unwrap();
            assert_eq!(beta.beta, Complex64::new(0.0, 0.0));
            assert_eq!(
                heating_single(0.0, &drive(0.1, u, phi), &osc()).unwrap(),
                0.0
            );
            assert_eq!(
                heating_resonant(0.0, &drive(0.1, u, phi), &osc()).unwrap(),
                0.0
            );
        }
    }

    #[test]
    fn negative_time_is_domain_error() {
        let d = drive(0.1, 0.5, 0.0);
        assert!(matches!(
            heating_single(-1.0, &d, &osc()),
            Err(Error::NegativeTime(_))
        ));
        assert!(coherent_amplitude(-0.5, &d, &osc()).is_err());
    }

    #[test]
    fn constant_field_matches_displacement_formula() {
        // u = 0, phi = 0: <n> = 2 kappa^2 (1 - cos tau), extremes 0 and 4 kappa^2.
        let kappa = 0.31;
        let d = drive(kappa, 0.0, 0.0);
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..100 {
            let tau: f64 = rng.random_range(0.0..30.0);
            let expected = 2.0 * kappa * kappa * (1.0 - tau.cos());
            let got = heating_single(tau, &d, &osc()).unwrap();
            assert_abs_diff_eq!(got, expected, epsilon = 1e-12 * kappa * kappa);
        }
        let peak = heating_single(PI, &d, &osc()).unwrap();
        assert_relative_eq!(peak, 4.0 * kappa * kappa, max_relative = 1e-12);
        let trough = heating_single(TAU, &d, &osc()).unwrap();
        assert_abs_diff_eq!(trough, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn heating_equals_amplitude_norm_on_declared_domain() {
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..200 {
            let u = loop {
                let u: f64 = rng.random_range(0.0..2.5);
                if (u - 1.0).abs() >= RESONANCE_EPS {
                    break u;
                }
            };
            let tau: f64 = rng.random_range(0.0..30.0);
            let phi: f64 = rng.random_range(0.0..TAU);
            let d = drive(0.12, u, phi);
            let n = heating_single(tau, &d, &osc()).unwrap();
            let b = coherent_amplitude(tau, &d, &osc()).unwrap();
            assert_relative_eq!(
                n,
                b.mean_occupation(),
                max_relative = 1e-10,
                epsilon = 1e-30
            );
        }
    }

    #[test]
    fn resonant_formula_at_full_period() {
        // tau = 2 pi: both oscillatory terms vanish, <n> = kappa^2 pi^2.
        let kappa = 0.045;
        let d = drive(kappa, 1.0, 0.0);
        let got = heating_resonant(TAU, &d, &osc()).unwrap();
        assert_relative_eq!(got, kappa * kappa * PI * PI, max_relative = 1e-12);
    }

    #[test]
    fn heating_single_approaches_resonant_formula() {
        let kappa = 0.045;
        let taus = [0.7, 3.0, 11.0, 23.5, 30.0];
        let mut previous_worst = f64::INFINITY;
        for delta in [1e-3, 1e-4, 1e-5] {
            let mut worst: f64 = 0.0;
            for &tau in &taus {
                let d = drive(kappa, 1.0 + delta, 0.0);
                let n = heating_single(tau, &d, &osc()).unwrap();
                let res = heating_resonant(tau, &drive(kappa, 1.0, 0.0), &osc()).unwrap();
                worst = worst.max(((n - res) / res).abs());
            }
            // Gap scales no worse than linearly in the detuning.
            assert!(worst <= 6.0 * delta, "detuning {delta}: gap {worst}");
            assert!(worst <= previous_worst);
            previous_worst = worst;
        }
    }

    #[test]
    fn inside_window_delegates_to_resonant_limit() {
        let kappa = 0.045;
        let d = drive(kappa, 1.0 + 1e-4, 0.0);
        for &tau in &[0.3, 4.0, 17.0, 30.0] {
            let inside = heating_single(tau, &d, &osc()).unwrap();
            let res = heating_resonant(tau, &drive(kappa, 1.0, 0.0), &osc()).unwrap();
            assert_relative_eq!(inside, res, max_relative = 1e-14);
        }
    }

    #[test]
    fn amplitude_continuous_across_sinc_branch() {
        // The only evaluation branch is the sinc Taylor guard at |x| = 1e-2;
        // straddling it with a hairline detuning step must not move the result
        // beyond the 1e-9 continuity budget.
        let kappa = 0.08;
        for &tau in &[1.0, 9.5, 30.0] {
            // (1 - u) tau / 2 = +-1e-2 (1 +- 5e-11) around the guard.
            let x_edge = 2.0e-2 / tau;
            let inside = coherent_amplitude(
                tau,
                &drive(kappa, 1.0 - x_edge * (1.0 - 5e-11), 0.0),
                &osc(),
            )
            .unwrap()
            .beta;
            let outside = coherent_amplitude(
                tau,
                &drive(kappa, 1.0 - x_edge * (1.0 + 5e-11), 0.0),
                &osc(),
            )
            .unwrap()
            .beta;
            let rel = (inside - outside).norm() / outside.norm();
            assert!(rel < 1e-9, "tau {tau}: branch jump {rel}");
        }
    }

    #[test]
    fn adiabatic_reduces_to_constant_field_at_zero_frequency() {
        let kappa = 0.2;
        for &tau in &[0.3, 2.0, 9.4, 28.0] {
            let a = heating_adiabatic(tau, &drive(kappa, 0.0, 0.0), &osc()).unwrap();
            let expected = 2.0 * kappa * kappa * (1.0 - tau.cos());
            assert_relative_eq!(a, expected, max_relative = 1e-13, epsilon = 1e-16);
        }
    }

    #[test]
    fn adiabatic_algebraic_point() {
        // cos(omega t) = -1: <n> = kappa^2 [2 + 2 cos(omega0 t)] with omega0 t = pi/u.
        let kappa = 0.13;
        let u = 0.1;
        let tau = PI / u;
        let got = heating_adiabatic(tau, &drive(kappa, u, 0.0), &osc()).unwrap();
        let expected = kappa * kappa * (2.0 + 2.0 * tau.cos());
        assert_relative_eq!(got, expected, max_relative = 1e-12);
    }

    #[test]
    fn adiabatic_gap_bounded_and_shrinking() {
        let kappa = 1.0; // gaps below scale with kappa^2
        let taus: Vec<f64> = (0..=600).map(|i| 30.0 * i as f64 / 600.0).collect();
        let sup_gap = |u: f64| -> f64 {
            taus.iter()
                .map(|&tau| {
                    let single = heating_single(tau, &drive(kappa, u, 0.0), &osc()).unwrap();
                    let adiab = heating_adiabatic(tau, &drive(kappa, u, 0.0), &osc()).unwrap();
                    (single - adiab).abs()
                })
                .fold(0.0, f64::max)
        };
        let gaps: Vec<f64> = [0.2, 0.1, 0.05, 0.025]
            .iter()
            .map(|&u| sup_gap(u))
            .collect();
        for pair in gaps.windows(2) {
            assert!(pair[1] < pair[0], "gaps not shrinking: {gaps:?}");
        }
        // O(u) leading term 2 u sin(u tau) sin(tau) keeps the gap under 3 u kappa^2.
        for (&u, &gap) in [0.2, 0.1, 0.05, 0.025].iter().zip(&gaps) {
            assert!(gap <= 3.0 * u, "u {u}: gap {gap}");
        }
        let single = heating_single(10.0, &drive(kappa, 0.1, 0.0), &osc()).unwrap();
        let adiab = heating_adiabatic(10.0, &drive(kappa, 0.1, 0.0), &osc()).unwrap();
        assert!((single - adiab).abs() <= 3.0 * 0.1);
    }

    #[test]
    fn ground_state_density_matrix() {
        let beta = CoherentAmplitude {
            beta: Complex64::new(0.0, 0.0),
        };
        let rho = pure_state_density_matrix(&beta, 5).unwrap();
        assert_relative_eq!(rho.element(0, 0).re, 1.0, max_relative = 1e-15);
        for k in 1..5 {
            assert_abs_diff_eq!(rho.element(k, k).norm(), 0.0, epsilon = 1e-30);
        }
        assert_relative_eq!(rho.purity(), 1.0, max_relative = 1e-14);
    }

    #[test]
    fn weak_coupling_expansion_structure() {
        let beta = CoherentAmplitude {
            beta: Complex64::new(0.12, 0.16), // |beta|^2 = 0.04
        };
        let lambda = beta.mean_occupation();
        let rho = pure_state_density_matrix(&beta, 5).unwrap();
        assert_relative_eq!(
            rho.element(0, 0).re,
            1.0 - lambda,
            max_relative = 2.0 * lambda
        );
        assert_relative_eq!(rho.element(1, 1).re, lambda, max_relative = 2.0 * lambda);
        let r10 = rho.element(1, 0);
        assert!((r10 - beta.beta).norm() <= 1.5 * lambda * beta.beta.norm());
        // The exact rho_{2,0} carries 1/sqrt(2!).
        let r20 = rho.element(2, 0);
        let b2 = beta.beta * beta.beta / 2.0f64.sqrt();
        assert!((r20 - b2).norm() <= 1.5 * lambda * b2.norm());
    }

    #[test]
    fn trace_matches_analytic_tail() {
        let mut rng = StdRng::seed_from_u64(23);
        for _ in 0..20 {
            let re: f64 = rng.random_range(-0.5..0.5);
            let im: f64 = rng.random_range(-0.5..0.5);
            let beta = CoherentAmplitude {
                beta: Complex64::new(re, im),
            };
            let lambda = beta.mean_occupation();
            let dim = 8;
            if lambda > 0.1 * dim as f64 {
                continue;
            }
            let rho = pure_state_density_matrix(&beta, dim).unwrap();
            // Exact Poisson tail of the truncated state.
            let mut cum = 0.0;
            let mut term = (-lambda).exp();
            for k in 0..dim {
                cum += term;
                term *= lambda / (k + 1) as f64;
            }
            assert_abs_diff_eq!(rho.trace(), cum, epsilon = 1e-12);
            let deficit = 1.0 - cum;
            assert!(deficit <= coherent_tail_bound(lambda, dim) + 1e-15);
            // Projected pure state: purity = (1 - deficit)^2 >= 1 - 2 deficit.
            assert!(rho.purity() >= 1.0 - 2.0 * coherent_tail_bound(lambda, dim) - 1e-12);
        }
    }

    #[test]
    fn truncation_guard_demands_larger_dim() {
        let beta = CoherentAmplitude {
            beta: Complex64::new(1.1, 0.0), // |beta|^2 = 1.21 > 0.1 * 8
        };
        match pure_state_density_matrix(&beta, 8) {
            Err(Error::TruncationUnsafe { required, .. }) => assert!(required >= 13),
            other => panic!("expected truncation error, got {other:?}"),
        }
    }

    #[test]
    fn pure_states_are_positive_semidefinite() {
        let beta = CoherentAmplitude {
            beta: Complex64::new(0.4, -0.55),
        };
        let rho = pure_state_density_matrix(&beta, 10).unwrap();
        assert!(rho.min_eigenvalue() >= -1e-10);
        assert!(rho.purity() <= 1.0 + 1e-12);
    }

    #[test]
    fn phi_normalization() {
        let d = DriveSpec::new(0.1, 0.5, -1.0).unwrap();
        assert!(d.phi() >= 0.0 && d.phi() < TAU);
        assert_relative_eq!(d.phi(), TAU - 1.0, max_relative = 1e-14);
    }

    #[test]
    fn derived_couplings_identity() {
        let osc = OscillatorParams::new(2.0, 3.0, 1.0).unwrap();
        let d = DriveSpec::new(0.7, 1.0, 0.0).unwrap();
        let c = DerivedCouplings::from_drive(&d, &osc);
        assert_relative_eq!(c.kappa, c.alpha / osc.omega0, max_relative = 1e-15);
        assert_relative_eq!(
            c.alpha,
            0.7 / (2.0 * 3.0 * 1.0 * 2.0f64).sqrt(),
            max_relative = 1e-15
        );
    }
}
