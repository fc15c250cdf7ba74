//! The self-check battery: every cross-module invariant evaluated at runtime,
//! each reduced to a named residual-vs-tolerance verdict.

use num_complex::Complex64;
use std::f64::consts::{PI, TAU};

use oscsim_core::closed_drive::{
    coherent_amplitude, heating_adiabatic, heating_resonant, heating_single, DriveSpec,
};
use oscsim_core::ensemble_average::{
    averaged_heating, averaged_heating_at, phase_averaged_integrand, rho10_averaged,
    rho20_appendix_quadrature, rho20_period_average, rho20_secular_check, FrequencyBand, PhaseMode,
};
use oscsim_core::exact_benchmark::{
    diffusion_coefficient, exact_heating, exact_heating_at, exact_heating_quadrature,
    qcf_state_from, thermal_populations, thermal_qcf,
};
use oscsim_core::ion_planner::{build_plan, default_plan_spec, discrete_heating, IonParams};
use oscsim_core::quad::QuadConfig;
use oscsim_core::spectral::{
    mode_population, normalization, normalization_quadrature, spectral_density,
    spectral_distribution, SpectralModel,
};

use crate::config::RunConfig;
use crate::AppError;

pub struct CheckResult {
    pub name: &'static str,
    pub pass: bool,
    pub residual: f64,
    pub tolerance: f64,
    pub detail: String,
}

fn check(name: &'static str, residual: f64, tolerance: f64, detail: String) -> CheckResult {
    CheckResult {
        name,
        pass: residual <= tolerance,
        residual,
        tolerance,
        detail,
    }
}

/// Run every check; `sabotage_delta` flips the diffusion sign inside the
/// characteristic-function reconstruction, which must surface as a failure.
pub fn run_all(cfg: &RunConfig, sabotage_delta: bool) -> Result<Vec<CheckResult>, AppError> {
    let model = cfg.model;
    let osc = cfg.osc;
    let quad = QuadConfig::default();
    let kappa = model.coupling_g;
    let mut out = Vec::new();

    // 1. Constant-field displacement identity.
    {
        let drive = DriveSpec::from_kappa(kappa, 0.0, 0.0, &osc)?;
        let scale = kappa * kappa;
        let worst = (0..=200)
            .map(|i| 30.0 * i as f64 / 200.0)
            .map(|tau| {
                let expected = 2.0 * scale * (1.0 - tau.cos());
                (heating_single(tau, &drive, &osc).unwrap() - expected).abs() / scale
            })
            .fold(0.0, f64::max);
        out.push(check(
            "constant_field_identity",
            worst,
            1e-12,
            "heating at omega = 0 vs 2 kappa^2 (1 - cos tau)".into(),
        ));
    }

    // 2. Off-resonant heating approaches the resonant formula.
    {
        let on = DriveSpec::from_kappa(kappa, osc.omega0, 0.0, &osc)?;
        let off = DriveSpec::from_kappa(kappa, 1.0001 * osc.omega0, 0.0, &osc)?;
        let worst = [0.9, 7.0, 18.0, 30.0]
            .iter()
            .map(|&tau| {
                let limit = heating_resonant(tau, &on, &osc).unwrap();
                (heating_single(tau, &off, &osc).unwrap() - limit).abs() / limit
            })
            .fold(0.0, f64::max);
        out.push(check(
            "resonant_limit_continuity",
            worst,
            1e-3,
            "relative gap at detuning 1e-4 outside the snap window".into(),
        ));
    }

    // 3. |beta|^2 equals the heating function.
    {
        let mut worst: f64 = 0.0;
        for &(u, phi) in &[(0.0, 0.0), (0.35, 1.2), (0.9, 4.0), (1.6, 2.6)] {
            let drive = DriveSpec::from_kappa(kappa, u * osc.omega0, phi, &osc)?;
            for &tau in &[0.8, 6.0, 14.0, 29.0] {
                let n = heating_single(tau, &drive, &osc).unwrap();
                let b = coherent_amplitude(tau, &drive, &osc)
                    .unwrap()
                    .mean_occupation();
                worst = worst.max((n - b).abs() / b.max(1e-30));
            }
        }
        out.push(check(
            "beta_heating_identity",
            worst,
            1e-10,
            "heating vs coherent amplitude across (t, omega, phi)".into(),
        ));
    }

    // 4. Adiabatic formula converges at small frequency ratio.
    {
        let sup_gap = |u: f64| -> f64 {
            let drive = DriveSpec::from_kappa(kappa, u * osc.omega0, 0.0, &osc).unwrap();
            (0..=300)
                .map(|i| 30.0 * i as f64 / 300.0)
                .map(|tau| {
                    (heating_single(tau, &drive, &osc).unwrap()
                        - heating_adiabatic(tau, &drive, &osc).unwrap())
                    .abs()
                })
                .fold(0.0, f64::max)
        };
        let gaps: Vec<f64> = [0.2, 0.1, 0.05, 0.025]
            .iter()
            .map(|&u| sup_gap(u))
            .collect();
        let monotone = gaps.windows(2).all(|p| p[1] < p[0]);
        let bound = gaps
            .iter()
            .zip([0.2, 0.1, 0.05, 0.025])
            .map(|(&g, u)| g / (3.0 * u * kappa * kappa))
            .fold(0.0, f64::max);
        out.push(CheckResult {
            name: "adiabatic_gap_shrinks",
            pass: monotone && bound <= 1.0,
            residual: bound,
            tolerance: 1.0,
            detail: format!("sup gaps {gaps:?} monotone and below 3 u kappa^2"),
        });
    }

    // 5. Spectral distribution factorizes as J(omega)[n_e + 1/2].
    {
        let worst = [0.02, 0.3, 1.0, 1.9]
            .iter()
            .map(|&u| {
                let omega = u * osc.omega0;
                let i = spectral_distribution(omega, &model).unwrap();
                let j = spectral_density(omega, &model).unwrap();
                let n_e = mode_population(omega, &model).unwrap().n_e;
                (i / j - (n_e + 0.5)).abs() / (n_e + 0.5)
            })
            .fold(0.0, f64::max);
        out.push(check(
            "spectral_factorization",
            worst,
            1e-12,
            "I/J vs n_e + 1/2".into(),
        ));
    }

    // 6. Averaging normalization: closed form vs quadrature plus tail.
    {
        let tight = QuadConfig::default().with_abs_tol(1e-10);
        let worst = [0.05, 0.1, 1.0, 10.0]
            .iter()
            .map(|&r| {
                let m = SpectralModel::from_ratio(r, model.temperature_scaled, kappa).unwrap();
                let upper = 100.0 * m.omega_c;
                let numeric = normalization_quadrature(&m, upper, &tight).unwrap();
                let tail = normalization(&m) * (1.0 - 2.0 / PI * (upper / m.omega_c).atan());
                (numeric + tail - normalization(&m)).abs() / normalization(&m)
            })
            .fold(0.0, f64::max);
        out.push(check(
            "normalization_quadrature",
            worst,
            1e-8,
            "omega_c^2 closed form vs arctangent quadrature".into(),
        ));
    }

    // 7. Analytic phase average vs 256-point phase quadrature.
    {
        let mut worst: f64 = 0.0;
        for &u in &[0.0, 0.45, 1.0, 1.3] {
            for &tau in &[2.0, 9.0, 23.0] {
                let analytic = phase_averaged_integrand(tau, u * osc.omega0, &osc).unwrap();
                let drive_at = |phi: f64| {
                    let d = DriveSpec::from_kappa(1.0, u * osc.omega0, phi, &osc).unwrap();
                    heating_single(tau, &d, &osc).unwrap()
                };
                let numeric = (0..256)
                    .map(|j| drive_at(TAU * j as f64 / 256.0))
                    .sum::<f64>()
                    / 256.0;
                worst = worst.max((analytic - numeric).abs() / numeric.max(1.0));
            }
        }
        out.push(check(
            "phase_average_identity",
            worst,
            1e-10,
            "closed-form phase average vs trapezoid quadrature".into(),
        ));
    }

    // 8. Band additivity of the averaging engine.
    {
        let whole = FrequencyBand::new(0.0, 1.2 * osc.omega0)?;
        let left = FrequencyBand::new(0.0, 0.7 * osc.omega0)?;
        let right = FrequencyBand::new(0.7 * osc.omega0, 1.2 * osc.omega0)?;
        let worst = [4.0, 13.0, 26.0]
            .iter()
            .map(|&tau| {
                let w = averaged_heating_at(tau, &whole, PhaseMode::Averaged, &model, &osc, &quad)
                    .unwrap();
                let l = averaged_heating_at(tau, &left, PhaseMode::Averaged, &model, &osc, &quad)
                    .unwrap();
                let r = averaged_heating_at(tau, &right, PhaseMode::Averaged, &model, &osc, &quad)
                    .unwrap();
                (w - (l + r)).abs() / w
            })
            .fold(0.0, f64::max);
        out.push(check(
            "band_additivity",
            worst,
            1e-6,
            "[0,1.2] vs [0,0.7] + [0.7,1.2]".into(),
        ));
    }

    // 9. First coherence cancels under the phase average.
    {
        let band = FrequencyBand::new(0.0, 1.2 * osc.omega0)?;
        let worst = [3.0, 12.0, 24.0]
            .iter()
            .map(|&tau| {
                rho10_averaged(tau, &band, &model, &osc, &quad)
                    .unwrap()
                    .norm()
            })
            .fold(0.0, f64::max);
        out.push(check(
            "rho10_phase_cancellation",
            worst,
            1e-10,
            "averaged first coherence magnitude".into(),
        ));
    }

    // 10. Second coherence: closed form vs direct frequency quadrature.
    {
        let tight = QuadConfig::default()
            .with_abs_tol(1e-11)
            .with_max_panels(6000);
        let worst = [0.8, 3.3, 9.0, 15.0]
            .iter()
            .map(|&tau| {
                let (full, _) = rho20_secular_check(tau, &model);
                let numeric = rho20_appendix_quadrature(tau, &model, 50.0, &tight).unwrap();
                (full - numeric).norm() / full.norm()
            })
            .fold(0.0, f64::max);
        out.push(check(
            "rho20_closed_form_vs_quadrature",
            worst,
            1e-6,
            "frequency-integrated rho20 bracket".into(),
        ));
    }

    // 11. Secular drop: period averages sit below r times the peak.
    {
        let peak = (0..=600)
            .map(|i| {
                rho20_secular_check(30.0 * i as f64 / 600.0, &model)
                    .0
                    .norm()
            })
            .fold(0.0, f64::max);
        let worst = (1..=5)
            .map(|k| rho20_period_average(k, &model, &quad).unwrap().norm())
            .fold(0.0, f64::max);
        out.push(check(
            "rho20_secular_period_average",
            worst / (model.r() * peak),
            1.0,
            "period-averaged rho20 relative to r * peak".into(),
        ));
    }

    // 12. Characteristic function reconstructs the thermal state.
    {
        let omega0 = model.omega0();
        let sign = if sabotage_delta { -1.0 } else { 1.0 };
        let mut worst: f64 = 0.0;
        for &tau in &[1.0, 6.0, 15.0, 30.0] {
            let state = qcf_state_from(
                tau,
                |s| sign * diffusion_coefficient(s / omega0, &model).unwrap() / omega0,
                |_| 0.0,
                &QuadConfig::default().with_abs_tol(1e-13),
            )?;
            let n_mean = exact_heating_at(tau, &model)?;
            for k in 1..=5 {
                let xi = Complex64::from_polar(0.4 * k as f64, 0.6 * k as f64);
                let thermal = thermal_qcf(n_mean, xi);
                worst = worst.max((state.chi(xi) - thermal).norm() / thermal.norm());
            }
        }
        out.push(check(
            "qcf_thermal_verification",
            worst,
            1e-9,
            if sabotage_delta {
                "diffusion sign flipped by --sabotage-delta".into()
            } else {
                "evolved vs thermal characteristic function".into()
            },
        ));
    }

    // 13. Diffusion-coefficient sign structure in both regimes.
    {
        let negative = (0..4000)
            .map(|i| 30.0 * i as f64 / 4000.0)
            .filter(|&tau| tau > 0.0)
            .map(|tau| diffusion_coefficient(tau, &model).unwrap())
            .fold(f64::INFINITY, f64::min);
        let lindblad = SpectralModel::from_ratio(10.0, model.temperature_scaled, kappa)?;
        let dip_after_transient = (0..=2000)
            .map(|i| 1.0 + 29.0 * i as f64 / 2000.0)
            .map(|tau| diffusion_coefficient(tau, &lindblad).unwrap())
            .fold(f64::INFINITY, f64::min);
        out.push(CheckResult {
            name: "diffusion_sign_regimes",
            pass: negative < 0.0 && dip_after_transient >= 0.0,
            residual: negative.min(-dip_after_transient),
            tolerance: 0.0,
            detail: format!(
                "min Delta: {negative:.3e} (r = {}), {dip_after_transient:.3e} (r = 10, tau > 1)",
                model.r()
            ),
        });
    }

    // 14. Closed antiderivative of the exact heating vs quadrature.
    {
        let tight = QuadConfig::default().with_abs_tol(1e-13);
        let worst = [0.7, 5.0, 16.0, 29.0]
            .iter()
            .map(|&tau| {
                let closed = exact_heating_at(tau, &model).unwrap();
                let numeric = exact_heating_quadrature(tau, &model, &tight).unwrap();
                (closed - numeric).abs() / closed
            })
            .fold(0.0, f64::max);
        out.push(check(
            "exact_antiderivative_vs_quadrature",
            worst,
            1e-9,
            "closed heating integral vs adaptive quadrature".into(),
        ));
    }

    // 15. Thermal populations: truncated mean plus geometric tail is exact.
    {
        let worst = [0.01, 0.3, 1.4]
            .iter()
            .map(|&n| {
                let dim = 24;
                let rho = thermal_populations(n, dim).unwrap();
                let q = n / (n + 1.0);
                let mean: f64 = (0..dim).map(|k| k as f64 * rho.element(k, k).re).sum();
                let tail = q.powi(dim as i32) * (dim as f64 + q / (1.0 - q));
                (mean + tail - n).abs() / n.max(1e-12)
            })
            .fold(0.0, f64::max);
        out.push(check(
            "thermal_tail_identity",
            worst,
            1e-10,
            "truncated mean + analytic tail vs n".into(),
        ));
    }

    // 16. Pure drives stay pure; the averaged state is mixed.
    {
        let drive = DriveSpec::from_kappa(kappa, 0.3 * osc.omega0, 0.7, &osc)?;
        let beta = coherent_amplitude(9.0, &drive, &osc)?;
        let pure = oscsim_core::closed_drive::pure_state_density_matrix(&beta, cfg.dim)?;
        let purity_defect = (1.0 - pure.purity()) / (2.0 * pure.trace_tail_bound() + 1e-12);
        let band = FrequencyBand::new(0.0, 1.2 * osc.omega0)?;
        let n = averaged_heating_at(9.0, &band, PhaseMode::Averaged, &model, &osc, &quad)?;
        let mixed = thermal_populations(n, cfg.dim)?;
        out.push(CheckResult {
            name: "mixedness_purity",
            pass: purity_defect <= 1.0 && mixed.purity() < 1.0,
            residual: purity_defect,
            tolerance: 1.0,
            detail: format!(
                "pure-state purity {:.12}, averaged purity {:.6}",
                pure.purity(),
                mixed.purity()
            ),
        });
    }

    // 17. Full-band simulator against the exact benchmark.
    {
        let band = FrequencyBand::unbounded(0.0)?;
        let taus = oscsim_core::series::time_grid(30.0, 300);
        let sim = averaged_heating(&taus, &band, PhaseMode::Averaged, &model, &osc, &quad)?;
        let exact = exact_heating(&taus, &model)?;
        let gap = sim.max_gap(&exact)? / exact.max_value();
        out.push(check(
            "simulator_vs_exact_full_band",
            gap,
            0.005,
            "max gap as a fraction of the exact peak, band to truncation edge".into(),
        ));
    }

    // 18. Ion plan defaults: set count and discrete-sum fidelity.
    {
        let ion = IonParams::singly_ionized(11e6, 9.0121831)?;
        let (f_min, f_max, step) = default_plan_spec();
        let plan = build_plan(&model, &ion, f_min, f_max, step, 120)?;
        let est = discrete_heating(&plan, &model, &ion, &quad)?;
        let gap = est.quadrature_gap / est.continuum_peak;
        out.push(CheckResult {
            name: "ion_plan_defaults",
            pass: plan.frequencies_hz.len() == 225 && gap <= 0.03,
            residual: gap,
            tolerance: 0.03,
            detail: format!(
                "{} sets; discrete gap fraction {gap:.2e}",
                plan.frequencies_hz.len()
            ),
        });
    }

    Ok(out)
}
