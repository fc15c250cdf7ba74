//! Closed-form single-drive results against the split-step Schrödinger
//! integration oracle.
//!
//! The smoke tier runs on every `cargo test`; the full-accuracy tier (200
//! Fock levels, `omega0 dt = 1e-4`, 16-point lattice) is the slow tier:
//! `cargo test --release -- --ignored`.

mod common;

use common::{evolve_pulsed_drive, OracleConfig};
use num_complex::Complex64;
use oscsim_core::closed_drive::{coherent_amplitude, heating_single, DriveSpec, OscillatorParams};

fn osc() -> OscillatorParams {
    OscillatorParams::dimensionless()
}

/// Interaction-picture amplitude from the oracle's lab-frame `<a>`.
fn rotated(a_mean: Complex64, tau: f64) -> Complex64 {
    Complex64::from_polar(1.0, tau) * a_mean
}

#[test]
fn oracle_smoke_matches_closed_forms() {
    let kappa = 0.05;
    let cfg = OracleConfig::smoke();
    let taus = [2.0, 6.0];
    for &(u, phi) in &[(0.0, 0.0), (0.3, 2.1), (1.0, 0.9)] {
        let drive = DriveSpec::from_kappa(kappa, u, phi, &osc()).unwrap();
        for sample in evolve_pulsed_drive(kappa, u, phi, &taus, &cfg) {
            let n_formula = heating_single(sample.tau, &drive, &osc()).unwrap();
            assert!(
                common::rel_diff(sample.n_mean, n_formula) < 1e-5,
                "(u {u}, phi {phi}, tau {}): oracle {} vs formula {}",
                sample.tau,
                sample.n_mean,
                n_formula
            );
            let beta = coherent_amplitude(sample.tau, &drive, &osc()).unwrap().beta;
            let from_oracle = rotated(sample.a_mean, sample.tau);
            assert!(
                (beta - from_oracle).norm() / from_oracle.norm() < 1e-5,
                "(u {u}, phi {phi}, tau {}): beta {beta} vs oracle {from_oracle}",
                sample.tau
            );
        }
    }
}

/// Values frozen from the full-accuracy oracle (dim 200, omega0 dt = 1e-4);
/// regenerate with `print_frozen_oracle_values` below.
#[test]
fn frozen_oracle_values_still_reproduced() {
    let kappa = 0.045;
    // (u, phi, tau, oracle n_mean); tau 6.2832 is 2*pi snapped to the
    // oracle's step grid, deliberately not the exact constant.
    #[allow(clippy::approx_constant)]
    let frozen: &[(f64, f64, f64, f64)] = &[
        (1.0, 0.0, 6.2832, 1.9986135855930003e-2),
        (0.1, 0.0, 10.0, 4.74642040822685e-3),
        (1.0, 0.0, 30.0, 4.51489893212892e-1),
    ];
    for &(u, phi, tau, n_oracle) in frozen {
        let drive = DriveSpec::from_kappa(kappa, u, phi, &osc()).unwrap();
        let n_formula = heating_single(tau, &drive, &osc()).unwrap();
        assert!(
            common::rel_diff(n_formula, n_oracle) < 1e-6,
            "(u {u}, tau {tau}): formula {n_formula} vs frozen oracle {n_oracle}"
        );
    }
}

/// Regenerates the constants in `frozen_oracle_values_still_reproduced`.
#[test]
#[ignore = "dev tool: prints oracle values for freezing"]
fn print_frozen_oracle_values() {
    let kappa = 0.045;
    let cfg = OracleConfig::slow();
    for (u, phi, taus) in [
        (1.0, 0.0, vec![std::f64::consts::TAU, 30.0]),
        (0.1, 0.0, vec![10.0]),
    ] {
        // TAU is not on the 1e-4 grid; snap to the nearest step.
        let snapped: Vec<f64> = taus
            .iter()
            .map(|t| (t / cfg.dtau).round() * cfg.dtau)
            .collect();
        for s in evolve_pulsed_drive(kappa, u, phi, &snapped, &cfg) {
            println!(
                "(u {u}, phi {phi}, tau {}): n = {:e}, a = {} + {}i",
                s.tau, s.n_mean, s.a_mean.re, s.a_mean.im
            );
        }
    }
}

/// The slow tier: 16-point (t, omega, phi) lattice at full oracle accuracy.
#[test]
#[ignore = "slow tier: run with --release -- --ignored"]
fn oracle_equivalence_full_lattice() {
    let kappa = 0.045;
    let cfg = OracleConfig::slow();
    let taus = [3.7, 11.0, 19.3, 30.0];
    let pairs = [(0.0, 0.0), (0.3, 2.1), (0.9, 0.7), (1.0, 0.0)];
    let mut checked = 0;
    for &(u, phi) in &pairs {
        let drive = DriveSpec::from_kappa(kappa, u, phi, &osc()).unwrap();
        for sample in evolve_pulsed_drive(kappa, u, phi, &taus, &cfg) {
            let n_formula = heating_single(sample.tau, &drive, &osc()).unwrap();
            assert!(
                common::rel_diff(sample.n_mean, n_formula) < 1e-6,
                "(u {u}, phi {phi}, tau {}): oracle {} vs formula {}",
                sample.tau,
                sample.n_mean,
                n_formula
            );
            let beta = coherent_amplitude(sample.tau, &drive, &osc()).unwrap().beta;
            let from_oracle = rotated(sample.a_mean, sample.tau);
            assert!(
                (beta - from_oracle).norm() / from_oracle.norm() < 1e-6,
                "(u {u}, phi {phi}, tau {}): beta {beta} vs oracle {from_oracle}",
                sample.tau
            );
            checked += 1;
        }
    }
    assert_eq!(checked, 16);
    println!("criterion 13 (oracle equivalence, 16-point lattice at 1e-6): PASS");
}
