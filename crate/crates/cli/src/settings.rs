//! Run settings: command-line flags layered over an optional key-value
//! config file, layered over the library defaults.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::ValueEnum;
use tecost_core::{CostOptions, FminOptions};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Human,
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        <Self as ValueEnum>::from_str(s, true).map_err(|_| CliError::Usage(format!("unknown format `{s}`")))
    }
}

/// Values that may come from flags or the config file. `None` means unset.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub format: Option<Format>,
    pub seed: Option<u64>,
    pub restarts: Option<usize>,
    pub tol: Option<f64>,
    pub gap_tol: Option<f64>,
    pub iters: Option<usize>,
    pub step_c: Option<f64>,
    pub hbar: Option<f64>,
    pub out: Option<PathBuf>,
}

impl Overrides {
    /// Fills every unset field of `self` from `fallback`.
    pub fn or(self, fallback: Overrides) -> Overrides {
        Overrides {
            format: self.format.or(fallback.format),
            seed: self.seed.or(fallback.seed),
            restarts: self.restarts.or(fallback.restarts),
            tol: self.tol.or(fallback.tol),
            gap_tol: self.gap_tol.or(fallback.gap_tol),
            iters: self.iters.or(fallback.iters),
            step_c: self.step_c.or(fallback.step_c),
            hbar: self.hbar.or(fallback.hbar),
            out: self.out.or(fallback.out),
        }
    }

    /// Parses `key = value` lines; blank lines and `#` comments are skipped.
    /// Keys mirror the long flags, with `-` or `_` accepted.
    pub fn parse_config(text: &str) -> CliResult<Overrides> {
        let mut o = Overrides::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |msg: String| CliError::Usage(format!("config line {}: {msg}", lineno + 1));
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| bad(format!("expected key = value, got `{line}`")))?;
            let (key, value) = (key.trim().replace('-', "_"), value.trim());
            match key.as_str() {
                "format" => o.format = Some(value.parse()?),
                "seed" => o.seed = Some(parse_value(value).map_err(bad)?),
                "restarts" => o.restarts = Some(parse_value(value).map_err(bad)?),
                "tol" => o.tol = Some(parse_value(value).map_err(bad)?),
                "gap_tol" => o.gap_tol = Some(parse_value(value).map_err(bad)?),
                "iters" => o.iters = Some(parse_value(value).map_err(bad)?),
                "step_c" => o.step_c = Some(parse_value(value).map_err(bad)?),
                "hbar" => o.hbar = Some(parse_value(value).map_err(bad)?),
                "out" => o.out = Some(PathBuf::from(value)),
                other => return Err(bad(format!("unknown key `{other}`"))),
            }
        }
        Ok(o)
    }

    pub fn load_config(path: &Path) -> CliResult<Overrides> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse_config(&text)
    }
}

fn parse_value<T: FromStr>(s: &str) -> Result<T, String> {
    s.parse().map_err(|_| format!("cannot parse `{s}`"))
}

/// Fully resolved settings for one run.
#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    pub format: Format,
    pub seed: u64,
    pub gap_tol: f64,
    pub hbar: f64,
    pub out: Option<PathBuf>,
    pub cost: CostOptions,
    pub fmin: FminOptions,
}

pub const DEFAULT_GAP_TOL: f64 = 1e-6;

impl Default for Settings {
    fn default() -> Self {
        Self::resolve(Overrides::default()).expect("defaults are valid")
    }
}

impl Settings {
    /// `restarts`, `iters` and `tol` apply to both solvers when given;
    /// otherwise each keeps its own default.
    pub fn resolve(o: Overrides) -> CliResult<Settings> {
        let seed = o.seed.unwrap_or(0);
        let mut cost = CostOptions {
            seed,
            ..CostOptions::default()
        };
        let mut fmin = FminOptions {
            seed,
            ..FminOptions::default()
        };
        if let Some(r) = o.restarts {
            if r == 0 {
                return Err(CliError::Usage("restarts must be at least 1".into()));
            }
            cost.restarts = r;
            fmin.restarts = r;
        }
        if let Some(i) = o.iters {
            cost.iters = i;
            fmin.max_iters = i;
        }
        if let Some(t) = o.tol {
            if !(t > 0.0) {
                return Err(CliError::Usage(format!("tol must be positive, got {t}")));
            }
            cost.tol = t;
            fmin.grad_tol = t;
        }
        if let Some(c) = o.step_c {
            if !(c > 0.0) {
                return Err(CliError::Usage(format!("step_c must be positive, got {c}")));
            }
            cost.step_c = c;
        }
        let hbar = o.hbar.unwrap_or(1.0);
        if !(hbar > 0.0) {
            return Err(CliError::Usage(format!("hbar must be positive, got {hbar}")));
        }
        cost.hbar = hbar;
        let gap_tol = o.gap_tol.unwrap_or(DEFAULT_GAP_TOL);
        if !(gap_tol >= 0.0) {
            return Err(CliError::Usage(format!("gap_tol must be non-negative, got {gap_tol}")));
        }
        Ok(Settings {
            format: o.format.unwrap_or_default(),
            seed,
            gap_tol,
            hbar,
            out: o.out,
            cost,
            fmin,
        })
    }

    /// Same settings with a different seed for both solvers.
    pub fn with_seed(&self, seed: u64) -> Settings {
        let mut s = self.clone();
        s.seed = seed;
        s.cost.seed = seed;
        s.fmin.seed = seed;
        s
    }
}
