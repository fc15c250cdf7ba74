//! Shared test support: the brute-force Schrödinger integration oracle and
//! the standard parameter set used across the integration suites.
//!
//! The oracle knows nothing about the closed-form amplitude machinery it
//! checks: it integrates `H = (n + 1/2) + kappa cos(u tau + phi)(a + a^dag)`
//! on a truncated Fock basis with Strang splitting, the drive exponential
//! applied through a short Taylor series of the tridiagonal ladder operator.

#![allow(dead_code)]

use num_complex::Complex64;
use oscsim_core::spectral::SpectralModel;

#[derive(Debug, Clone, Copy)]
pub struct OracleSample {
    pub tau: f64,
    pub n_mean: f64,
    /// `<a>` in the lab frame.
    pub a_mean: Complex64,
}

pub struct OracleConfig {
    pub dim: usize,
    pub dtau: f64,
}

impl OracleConfig {
    /// The full-accuracy tier: 200 Fock levels, `omega0 dt = 1e-4`.
    pub fn slow() -> Self {
        OracleConfig {
            dim: 200,
            dtau: 1e-4,
        }
    }

    /// Cheap smoke tier for the default test run.
    pub fn smoke() -> Self {
        OracleConfig {
            dim: 64,
            dtau: 5e-4,
        }
    }
}

/// Integrate the pulsed drive from the ground state, sampling at `taus_out`
/// (each must sit on the step grid). Returns one sample per requested time.
pub fn evolve_pulsed_drive(
    kappa: f64,
    u: f64,
    phi: f64,
    taus_out: &[f64],
    cfg: &OracleConfig,
) -> Vec<OracleSample> {
    let dim = cfg.dim;
    let dtau = cfg.dtau;
    let mut psi = vec![Complex64::new(0.0, 0.0); dim];
    psi[0] = Complex64::new(1.0, 0.0);

    // Half-step free-evolution phases e^{-i (k + 1/2) dtau / 2}.
    let half_phase: Vec<Complex64> = (0..dim)
        .map(|k| Complex64::from_polar(1.0, -(k as f64 + 0.5) * dtau / 2.0))
        .collect();
    let sqrt_k: Vec<f64> = (0..dim).map(|k| (k as f64).sqrt()).collect();

    let apply_ladder_sum = |v: &[Complex64], out: &mut Vec<Complex64>| {
        // out = (a + a^dag) v
        out.clear();
        out.resize(v.len(), Complex64::new(0.0, 0.0));
        let d = v.len();
        for k in 0..d {
            let mut acc = Complex64::new(0.0, 0.0);
            if k > 0 {
                acc += sqrt_k[k] * v[k - 1];
            }
            if k + 1 < d {
                acc += sqrt_k[k + 1] * v[k + 1];
            }
            out[k] = acc;
        }
    };

    let mut requested: Vec<(usize, f64)> = taus_out
        .iter()
        .map(|&tau| {
            let steps = (tau / dtau).round() as usize;
            assert!(
                (tau - steps as f64 * dtau).abs() < 1e-9,
                "requested tau {tau} does not sit on the dtau = {dtau} grid"
            );
            (steps, tau)
        })
        .collect();
    requested.sort_by_key(|r| r.0);

    let mut samples = Vec::with_capacity(requested.len());
    let mut term = Vec::with_capacity(dim);
    let mut scratch = Vec::with_capacity(dim);
    let total_steps = requested.last().map(|r| r.0).unwrap_or(0);
    let mut next_req = 0;

    let record =
        |step: usize, psi: &[Complex64], samples: &mut Vec<OracleSample>, next_req: &mut usize| {
            while *next_req < requested.len() && requested[*next_req].0 == step {
                let norm: f64 = psi.iter().map(|c| c.norm_sqr()).sum();
                assert!((norm - 1.0).abs() < 1e-9, "norm drift {norm}");
                let n_mean: f64 = psi
                    .iter()
                    .enumerate()
                    .map(|(k, c)| k as f64 * c.norm_sqr())
                    .sum();
                let mut a_mean = Complex64::new(0.0, 0.0);
                for k in 0..psi.len() - 1 {
                    a_mean += psi[k].conj() * sqrt_k[k + 1] * psi[k + 1];
                }
                samples.push(OracleSample {
                    tau: requested[*next_req].1,
                    n_mean,
                    a_mean,
                });
                *next_req += 1;
            }
        };

    record(0, &psi, &mut samples, &mut next_req);
    for step in 0..total_steps {
        let tau_mid = (step as f64 + 0.5) * dtau;
        let f_mid = kappa * (u * tau_mid + phi).cos();

        for (k, c) in psi.iter_mut().enumerate() {
            *c *= half_phase[k];
        }
        // e^{-i f_mid dtau (a + a^dag)} via Taylor; the argument norm is
        // kappa * dtau * O(sqrt(dim)), far inside the radius where a few
        // terms reach machine precision.
        let coeff = Complex64::new(0.0, -f_mid * dtau);
        term.clear();
        term.extend_from_slice(&psi);
        for m in 1..=12 {
            apply_ladder_sum(&term, &mut scratch);
            let factor = coeff / m as f64;
            for (t, s) in term.iter_mut().zip(&scratch) {
                *t = factor * s;
            }
            let mut biggest: f64 = 0.0;
            for (p, t) in psi.iter_mut().zip(&term) {
                *p += t;
                biggest = biggest.max(t.norm_sqr());
            }
            if biggest < 1e-40 {
                break;
            }
        }
        for (k, c) in psi.iter_mut().enumerate() {
            *c *= half_phase[k];
        }
        record(step + 1, &psi, &mut samples, &mut next_req);
    }
    samples
}

/// Parameters of the main comparison figure: `r = 0.1`, `g = 0.045`,
/// `k_B T / (hbar omega0) = 80`.
pub fn reference_model() -> SpectralModel {
    SpectralModel::from_ratio(0.1, 80.0, 0.045).unwrap()
}

pub fn rel_diff(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}
