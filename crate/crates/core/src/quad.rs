//! Adaptive Gauss–Legendre quadrature on finite intervals.
//!
//! Every panel is evaluated with a paired 7/15-point rule; the difference of
//! the two estimates is the panel error. The panel with the largest error is
//! bisected until the summed estimate meets an absolute tolerance or the
//! panel budget runs out. Panels are kept ordered by position and summed in
//! that order, so a given integrand always produces bit-identical results.

use std::sync::OnceLock;

use crate::error::{Error, Result};

const LOW_ORDER: usize = 7;
const HIGH_ORDER: usize = 15;

/// Tolerance and budget knobs for [`integrate`].
#[derive(Debug, Clone, Copy)]
pub struct QuadConfig {
    /// Absolute tolerance on the integral value.
    pub abs_tol: f64,
    /// Hard cap on the number of panels before giving up.
    pub max_panels: usize,
    /// Number of equal panels the interval is seeded with.
    pub initial_panels: usize,
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig {
            abs_tol: 1e-10,
            max_panels: 2000,
            initial_panels: 8,
        }
    }
}

impl QuadConfig {
    pub fn with_abs_tol(mut self, abs_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self
    }

    pub fn with_initial_panels(mut self, initial_panels: usize) -> Self {
        self.initial_panels = initial_panels.max(1);
        self
    }

    pub fn with_max_panels(mut self, max_panels: usize) -> Self {
        self.max_panels = max_panels.max(1);
        self
    }
}

/// Converged integral together with its error estimate and panel count.
#[derive(Debug, Clone, Copy)]
pub struct Quadrature {
    pub value: f64,
    pub error_estimate: f64,
    pub panels: usize,
}

#[derive(Clone, Copy)]
struct Panel {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
}

fn eval_panel(f: &impl Fn(f64) -> f64, lo: f64, hi: f64) -> Panel {
    let mid = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let mut low = 0.0;
    for &(x, w) in rule(LOW_ORDER) {
        low += w * f(mid + half * x);
    }
    let mut high = 0.0;
    for &(x, w) in rule(HIGH_ORDER) {
        high += w * f(mid + half * x);
    }
    low *= half;
    high *= half;
    Panel {
        lo,
        hi,
        value: high,
        error: (high - low).abs(),
    }
}

/// Integrate `f` over `[lo, hi]` to the requested absolute tolerance.
pub fn integrate(f: impl Fn(f64) -> f64, lo: f64, hi: f64, cfg: &QuadConfig) -> Result<Quadrature> {
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::InvalidBand { lo, hi });
    }
    let seeds = cfg.initial_panels.max(1).min(cfg.max_panels);
    let width = (hi - lo) / seeds as f64;
    let mut panels: Vec<Panel> = (0..seeds)
        .map(|i| {
            let a = lo + i as f64 * width;
            let b = if i + 1 == seeds { hi } else { a + width };
            eval_panel(&f, a, b)
        })
        .collect();

    loop {
        let total_error: f64 = panels.iter().map(|p| p.error).sum();
        if total_error <= cfg.abs_tol {
            let value = panels.iter().map(|p| p.value).sum();
            return Ok(Quadrature {
                value,
                error_estimate: total_error,
                panels: panels.len(),
            });
        }
        if panels.len() >= cfg.max_panels {
            return Err(Error::QuadratureNoConverge {
                achieved: total_error,
                required: cfg.abs_tol,
                panels: panels.len(),
            });
        }
        // Strict `>` keeps the choice deterministic when errors tie.
        let mut worst = 0;
        for (i, p) in panels.iter().enumerate() {
            if p.error > panels[worst].error {
                worst = i;
            }
        }
        let Panel { lo: a, hi: b, .. } = panels[worst];
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            // Interval narrowed to machine resolution; report what we have.
            return Err(Error::QuadratureNoConverge {
                achieved: total_error,
                required: cfg.abs_tol,
                panels: panels.len(),
            });
        }
        panels[worst] = eval_panel(&f, a, mid);
        panels.insert(worst + 1, eval_panel(&f, mid, b));
    }
}

/// Fixed composite Gauss–Legendre estimate over `n_panels` equal panels.
///
/// Used for cheap scale probes before an adaptive pass; no error control.
pub fn composite_fixed(f: impl Fn(f64) -> f64, lo: f64, hi: f64, n_panels: usize) -> f64 {
    let n = n_panels.max(1);
    let width = (hi - lo) / n as f64;
    let mut total = 0.0;
    for i in 0..n {
        let a = lo + i as f64 * width;
        let b = if i + 1 == n { hi } else { a + width };
        total += eval_panel(&f, a, b).value;
    }
    total
}

fn rule(order: usize) -> &'static [(f64, f64)] {
    static LOW: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    static HIGH: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    match order {
        LOW_ORDER => LOW.get_or_init(|| legendre_rule(LOW_ORDER)),
        HIGH_ORDER => HIGH.get_or_init(|| legendre_rule(HIGH_ORDER)),
        _ => unreachable!("only the paired 7/15 rules are instantiated"),
    }
}

/// Legendre polynomial value and derivative at `x` via the three-term recurrence.
fn legendre_eval(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Nodes and weights of the `n`-point Gauss–Legendre rule on [-1, 1],
/// found by Newton iteration from the Chebyshev initial guess.
fn legendre_rule(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_eval(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre_eval(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out.push((x, w));
    }
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    out
}
