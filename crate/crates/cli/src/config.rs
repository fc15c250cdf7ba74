//! Run-configuration resolution: built-in reference defaults, then a flat
//! `key = value` config file (UTF-8, `#` comments), then command-line flags,
//! later layers winning.

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use oscsim_core::closed_drive::OscillatorParams;
use oscsim_core::spectral::{HighTClass, SpectralModel};

use crate::{AppError, CommonArgs};

/// Reference parameter set all commands default to.
pub const DEFAULT_R: f64 = 0.1;
pub const DEFAULT_G: f64 = 0.045;
pub const DEFAULT_TEMPERATURE: f64 = 80.0;
pub const DEFAULT_T_MAX: f64 = 30.0;
pub const DEFAULT_POINTS: usize = 600;
pub const DEFAULT_DIM: usize = 8;

pub const OUT_DIR_ENV: &str = "OSCSIM_OUT_DIR";

pub struct ConfigFile {
    values: HashMap<String, String>,
}

impl ConfigFile {
    pub fn empty() -> Self {
        ConfigFile {
            values: HashMap::new(),
        }
    }

    /// Parse `key = value` lines; `#` starts a comment, blank lines ignored.
    pub fn load(path: &Path) -> Result<Self, AppError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| AppError::Usage(format!("config {}: {e}", path.display())))?;
        let mut values = HashMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = match raw.find('#') {
                Some(pos) => &raw[..pos],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                AppError::Usage(format!(
                    "config {} line {}: expected `key = value`",
                    path.display(),
                    idx + 1
                ))
            })?;
            values.insert(key.trim().to_string(), value.trim().to_string());
        }
        Ok(ConfigFile { values })
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>, AppError> {
        match self.values.get(key) {
            None => Ok(None),
            Some(raw) => raw
                .parse::<T>()
                .map(Some)
                .map_err(|_| AppError::Usage(format!("config key `{key}`: cannot parse `{raw}`"))),
        }
    }
}

/// Resolved run parameters shared by the data commands.
pub struct RunConfig {
    pub model: SpectralModel,
    pub osc: OscillatorParams,
    pub taus: Vec<f64>,
    pub dim: usize,
    pub out_dir: PathBuf,
    pub file: ConfigFile,
}

pub fn pick<T: FromStr + Copy>(
    flag: Option<T>,
    file: &ConfigFile,
    key: &str,
    default: T,
) -> Result<T, AppError> {
    if let Some(v) = flag {
        return Ok(v);
    }
    Ok(file.get::<T>(key)?.unwrap_or(default))
}

pub fn resolve(common: &CommonArgs) -> Result<RunConfig, AppError> {
    let file = match &common.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::empty(),
    };
    let r = pick(common.r, &file, "r", DEFAULT_R)?;
    let g = pick(common.g, &file, "g", DEFAULT_G)?;
    let temperature = pick(
        common.temperature,
        &file,
        "temperature",
        DEFAULT_TEMPERATURE,
    )?;
    let t_max = pick(common.t_max, &file, "t_max", DEFAULT_T_MAX)?;
    let points = pick(common.points, &file, "points", DEFAULT_POINTS)?;
    let dim = file.get::<usize>("dim")?.unwrap_or(DEFAULT_DIM);

    let model =
        SpectralModel::from_ratio(r, temperature, g).map_err(|e| AppError::Usage(e.to_string()))?;
    if model.high_t_class() == HighTClass::Marginal {
        eprintln!(
            "warning: k_B T / (hbar omega0) = {temperature} is below 50; \
             high-temperature formulas are marginal there"
        );
    }
    if points < 2 || !(t_max > 0.0) {
        return Err(AppError::Usage(format!(
            "need points >= 2 and t_max > 0, got {points} and {t_max}"
        )));
    }

    let out_dir = match &common.out {
        Some(dir) => dir.clone(),
        None => match file.get::<String>("out_dir")? {
            Some(dir) => PathBuf::from(dir),
            None => std::env::var_os(OUT_DIR_ENV)
                .map(PathBuf::from)
                .unwrap_or_else(|| PathBuf::from(".")),
        },
    };
    std::fs::create_dir_all(&out_dir)?;

    Ok(RunConfig {
        model,
        osc: OscillatorParams::dimensionless(),
        taus: oscsim_core::series::time_grid(t_max, points),
        dim,
        out_dir,
        file,
    })
}
