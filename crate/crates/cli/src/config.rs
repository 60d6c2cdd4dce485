use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

pub const ENV_DIGITS: &str = "COTMOMENTS_DIGITS";
pub const ENV_CONFIG: &str = "COTMOMENTS_CONFIG";

pub const DEFAULT_DIGITS: u32 = 50;
pub const DEFAULT_N: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// Optional defaults read from a TOML file.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub digits: Option<u32>,
    pub n: Option<usize>,
    pub tol: Option<f64>,
    pub format: Option<Format>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        toml::from_str(&text).map_err(|e| format!("bad config {}: {e}", path.display()))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub digits: u32,
    pub n: usize,
    pub tol: f64,
    #[serde(skip)]
    pub format: Option<Format>,
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

/// Values given on the command line; `None` means not given.
#[derive(Debug, Default)]
pub struct Overrides {
    pub config: Option<PathBuf>,
    pub digits: Option<u32>,
    pub n: Option<usize>,
    pub tol: Option<f64>,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
}

/// Flags win over the environment, which wins over the config file.
pub fn resolve(flags: Overrides) -> Result<RunConfig, String> {
    let path = flags.config.clone().or_else(|| std::env::var_os(ENV_CONFIG).map(PathBuf::from));
    let file = match path {
        Some(p) => FileConfig::load(&p)?,
        None => FileConfig::default(),
    };
    let env_digits = match std::env::var(ENV_DIGITS) {
        Ok(s) => Some(s.trim().parse::<u32>().map_err(|_| format!("{ENV_DIGITS} must be a positive integer, got '{s}'"))?),
        Err(_) => None,
    };
    let digits = flags.digits.or(env_digits).or(file.digits).unwrap_or(DEFAULT_DIGITS);
    if digits < cotmoments::hp::MIN_DIGITS {
        return Err(format!("--digits must be at least {}", cotmoments::hp::MIN_DIGITS));
    }
    let n = flags.n.or(file.n).unwrap_or(DEFAULT_N);
    if n < 10 {
        return Err("--n must be at least 10".into());
    }
    let tol = flags.tol.or(file.tol).unwrap_or_else(|| cotmoments::suites::default_tol(digits));
    if !(tol > 0.0 && tol.is_finite()) {
        return Err("--tol must be positive".into());
    }
    Ok(RunConfig { digits, n, tol, format: flags.format.or(file.format), out: flags.out })
}
