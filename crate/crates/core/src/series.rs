//! Heating-function time series and the small analysis helpers (linear fits,
//! extrema scans) the comparisons are built on.

use crate::ensemble_average::{FrequencyBand, PhaseMode};
use crate::error::{Error, Result};

/// Default grid: 600 points across `omega0 t` in [0, 30], at least 20 points
/// per trap period.
pub const DEFAULT_TAU_MAX: f64 = 30.0;
pub const DEFAULT_TIME_POINTS: usize = 600;

/// Uniform `omega0 t` grid from 0 to `tau_max` inclusive.
pub fn time_grid(tau_max: f64, points: usize) -> Vec<f64> {
    let n = points.max(2);
    (0..n)
        .map(|i| tau_max * i as f64 / (n - 1) as f64)
        .collect()
}

/// Provenance of a heating series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesMeta {
    /// Frequency band averaged over; `None` for the exact benchmark.
    pub band: Option<FrequencyBand>,
    /// Phase handling; `None` for the exact benchmark.
    pub phase: Option<PhaseMode>,
    pub r: f64,
    pub coupling_g: f64,
    pub temperature_scaled: f64,
}

/// `<n>(t)` sampled on an ascending `omega0 t` grid.
#[derive(Debug, Clone, PartialEq)]
pub struct HeatingSeries {
    times: Vec<f64>,
    values: Vec<f64>,
    pub meta: SeriesMeta,
}

impl HeatingSeries {
    pub fn new(times: Vec<f64>, values: Vec<f64>, meta: SeriesMeta) -> Result<Self> {
        if times.len() != values.len() {
            return Err(Error::InvalidSeries(format!(
                "{} times vs {} values",
                times.len(),
                values.len()
            )));
        }
        if times.len() < 2 {
            return Err(Error::InvalidSeries("need at least two samples".into()));
        }
        for pair in times.windows(2) {
            if !(pair[1] > pair[0]) {
                return Err(Error::InvalidSeries(format!(
                    "times not strictly ascending at {} -> {}",
                    pair[0], pair[1]
                )));
            }
        }
        if values.iter().any(|v| !(*v >= -1e-12)) {
            return Err(Error::InvalidSeries(
                "negative heating value beyond tolerance".into(),
            ));
        }
        if times[0] == 0.0 && values[0].abs() > 1e-12 {
            return Err(Error::InvalidSeries(format!(
                "value at t = 0 is {}, not 0",
                values[0]
            )));
        }
        Ok(HeatingSeries {
            times,
            values,
            meta,
        })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn max_value(&self) -> f64 {
        self.values
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Largest absolute pointwise gap against another series on the same grid.
    pub fn max_gap(&self, other: &HeatingSeries) -> Result<f64> {
        if self.times != other.times {
            return Err(Error::InvalidSeries(
                "series grids differ; cannot compare pointwise".into(),
            ));
        }
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }

    /// Least-squares line over samples with `lo <= t <= hi`.
    pub fn linear_fit(&self, lo: f64, hi: f64) -> LinearFit {
        let pts: Vec<(f64, f64)> = self
            .times
            .iter()
            .zip(&self.values)
            .filter(|(t, _)| **t >= lo && **t <= hi)
            .map(|(t, v)| (*t, *v))
            .collect();
        linear_fit(&pts)
    }

    /// Indices of strict interior local extrema.
    pub fn local_extrema(&self) -> Vec<Extremum> {
        let v = &self.values;
        let mut out = Vec::new();
        for i in 1..v.len() - 1 {
            if v[i] > v[i - 1] && v[i] > v[i + 1] {
                out.push(Extremum {
                    index: i,
                    time: self.times[i],
                    value: v[i],
                    is_max: true,
                });
            } else if v[i] < v[i - 1] && v[i] < v[i + 1] {
                out.push(Extremum {
                    index: i,
                    time: self.times[i],
                    value: v[i],
                    is_max: false,
                });
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extremum {
    pub index: usize,
    pub time: f64,
    pub value: f64,
    pub is_max: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    /// Coefficient of determination of the fit.
    pub r_squared: f64,
}

pub fn linear_fit(points: &[(f64, f64)]) -> LinearFit {
    let n = points.len() as f64;
    assert!(points.len() >= 2, "linear fit needs at least two points");
    let mean_x: f64 = points.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y: f64 = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    let syy: f64 = points.iter().map(|p| (p.1 - mean_y).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let ss_res: f64 = points
        .iter()
        .map(|p| (p.1 - (slope * p.0 + intercept)).powi(2))
        .sum();
    let r_squared = if syy > 0.0 { 1.0 - ss_res / syy } else { 1.0 };
    LinearFit {
        slope,
        intercept,
        r_squared,
    }
}
