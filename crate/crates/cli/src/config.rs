//! Job configuration: flags layered over an optional `key = value` file,
//! validated once before any computation starts.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;

use betaedge::mp::parse_decimal;
use betaedge::{Centring, Ensemble, GridSpec, Rational};
use clap::{Args, ValueEnum};
use serde::Serialize;

use crate::error::{CliError, CliResult};

pub const PRECISION_ENV: &str = "BETAEDGE_PRECISION";
pub const DEFAULT_PRECISION: u32 = 512;
pub const DEFAULT_DIGITS: usize = 17;
/// Bit sizes available to the fixed-precision float backend.
pub const BIGFLOAT_SIZES: [u32; 5] = [128, 256, 512, 1024, 2048];
/// `alpha` used by `reference` when none is given.
pub const DEFAULT_REFERENCE_ALPHA: &str = "10";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EnsembleArg {
    Gaussian,
    Laguerre,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ScalingArg {
    /// Raw density, no edge map.
    None,
    Uncentred,
    Centred,
    /// Fixed-a Laguerre with offset 4N.
    Primed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Rational,
    Bigfloat,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

macro_rules! display_via_value_enum {
    ($($t:ty),*) => {$(
        impl fmt::Display for $t {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.to_possible_value().expect("no skipped variants").get_name())
            }
        }
    )*};
}
display_via_value_enum!(EnsembleArg, ScalingArg, Backend, Format);

fn parse_enum<T: ValueEnum>(key: &str, v: &str) -> CliResult<T> {
    T::from_str(v, true).map_err(|_| CliError::Config(format!("invalid value `{v}` for `{key}`")))
}

/// Flags shared by every subcommand. All optional so that a config file can
/// supply them; defaults are applied after merging.
#[derive(Args, Clone, Debug, Default)]
pub struct JobArgs {
    /// Ensemble family.
    #[arg(long, value_enum)]
    pub ensemble: Option<EnsembleArg>,
    /// Even Dyson index.
    #[arg(long)]
    pub beta: Option<u32>,
    /// Matrix sizes, comma-separated.
    #[arg(long = "n", value_delimiter = ',')]
    pub n: Option<Vec<usize>>,
    /// Fixed Laguerre exponent (decimal).
    #[arg(long)]
    pub a: Option<String>,
    /// Proportional Laguerre ratio, a = alpha N (decimal).
    #[arg(long)]
    pub alpha: Option<String>,
    /// Edge map.
    #[arg(long, value_enum)]
    pub scaling: Option<ScalingArg>,
    /// Grid as `min:max:step`.
    #[arg(long)]
    pub grid: Option<String>,
    /// Working precision in bits (default from BETAEDGE_PRECISION, else 512).
    #[arg(long)]
    pub precision: Option<u32>,
    /// Recurrence arithmetic.
    #[arg(long, value_enum)]
    pub backend: Option<Backend>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Output path; several sizes write `<stem>_N<n>.<ext>`. Standard output if absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Significant digits in output.
    #[arg(long)]
    pub digits: Option<usize>,
    /// Worker threads (default: logical cores).
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Monte Carlo seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Monte Carlo matrices.
    #[arg(long)]
    pub samples: Option<usize>,
    /// Monte Carlo histogram bins.
    #[arg(long)]
    pub bins: Option<usize>,
    /// `key = value` file; flags override its entries.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// No progress on standard error.
    #[arg(long)]
    pub quiet: bool,
}

/// Parse `key = value` lines; `#` starts a comment.
pub fn parse_config_text(text: &str) -> CliResult<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (k, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("config line {}: expected `key = value`", k + 1)))?;
        out.insert(key.trim().replace('-', "_"), value.trim().to_string());
    }
    Ok(out)
}

impl JobArgs {
    /// Fill unset flags from config-file entries.
    pub fn merge_file(mut self, entries: &BTreeMap<String, String>) -> CliResult<Self> {
        fn num<T: std::str::FromStr>(key: &str, v: &str) -> CliResult<T> {
            v.parse().map_err(|_| CliError::Config(format!("invalid value `{v}` for `{key}`")))
        }
        for (key, v) in entries {
            match key.as_str() {
                "ensemble" => self.ensemble = self.ensemble.or(Some(parse_enum(key, v)?)),
                "beta" => self.beta = self.beta.or(Some(num(key, v)?)),
                "n" => {
                    if self.n.is_none() {
                        self.n = Some(v.split(',').map(|s| num(key, s.trim())).collect::<CliResult<_>>()?);
                    }
                }
                "a" => self.a = self.a.take().or(Some(v.clone())),
                "alpha" => self.alpha = self.alpha.take().or(Some(v.clone())),
                "scaling" => self.scaling = self.scaling.or(Some(parse_enum(key, v)?)),
                "grid" => self.grid = self.grid.take().or(Some(v.clone())),
                "precision" => self.precision = self.precision.or(Some(num(key, v)?)),
                "backend" => self.backend = self.backend.or(Some(parse_enum(key, v)?)),
                "format" => self.format = self.format.or(Some(parse_enum(key, v)?)),
                "out" => self.out = self.out.take().or(Some(PathBuf::from(v))),
                "digits" => self.digits = self.digits.or(Some(num(key, v)?)),
                "jobs" => self.jobs = self.jobs.or(Some(num(key, v)?)),
                "seed" => self.seed = self.seed.or(Some(num(key, v)?)),
                "samples" => self.samples = self.samples.or(Some(num(key, v)?)),
                "bins" => self.bins = self.bins.or(Some(num(key, v)?)),
                other => return Err(CliError::Config(format!("unknown config key `{other}`"))),
            }
        }
        Ok(self)
    }
}

/// A validated job, serialized verbatim into every output's metadata.
#[derive(Clone, Debug, Serialize)]
pub struct JobConfig {
    pub command: String,
    pub ensemble: EnsembleArg,
    pub beta: u32,
    pub n: Vec<usize>,
    pub a: Option<String>,
    pub alpha: Option<String>,
    pub scaling: ScalingArg,
    pub grid: String,
    pub precision_bits: u32,
    pub backend: Backend,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub digits: usize,
    pub jobs: Option<usize>,
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    pub bins: Option<usize>,
    #[serde(skip)]
    pub quiet: bool,
    #[serde(skip)]
    pub grid_spec: GridSpec,
    #[serde(skip)]
    pub family: Option<Ensemble>,
}

/// What a command needs from the flags.
pub struct Needs {
    pub sizes: usize,
    pub mc: bool,
    pub ensemble: bool,
}

fn parse_param(key: &str, v: &str) -> CliResult<Rational> {
    parse_decimal(v).ok_or_else(|| CliError::Config(format!("`{key}` must be a decimal number, got `{v}`")))
}

impl JobConfig {
    pub fn build(command: &str, args: JobArgs, needs: Needs) -> CliResult<Self> {
        let args = match &args.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
                args.clone().merge_file(&parse_config_text(&text)?)?
            }
            None => args,
        };
        let precision = match args.precision {
            Some(p) => p,
            None => match std::env::var(PRECISION_ENV) {
                Ok(v) => v
                    .trim()
                    .parse()
                    .map_err(|_| CliError::Config(format!("{PRECISION_ENV} must be an integer, got `{v}`")))?,
                Err(_) => DEFAULT_PRECISION,
            },
        };
        if !(64..=1 << 16).contains(&precision) {
            return Err(CliError::Config(format!("precision must be in 64..=65536 bits, got {precision}")));
        }
        let backend = args.backend.unwrap_or(Backend::Rational);
        if backend == Backend::Bigfloat && precision > *BIGFLOAT_SIZES.last().unwrap() {
            return Err(CliError::Config(format!("bigfloat backend supports at most 2048 bits, got {precision}")));
        }
        let grid_text = args.grid.clone().unwrap_or_else(|| "-6:3:0.05".into());
        let grid_spec: GridSpec = grid_text.parse().map_err(|e| CliError::Config(format!("{e}")))?;
        let ensemble = args.ensemble.unwrap_or(EnsembleArg::Gaussian);
        let beta = args.beta.unwrap_or(2);
        let n = args.n.clone().unwrap_or_default();
        if n.len() < needs.sizes {
            return Err(CliError::Config(format!("`{command}` needs at least {} value(s) of --n", needs.sizes)));
        }
        if n.contains(&0) {
            return Err(CliError::Config("matrix sizes must be >= 1".into()));
        }
        if args.digits == Some(0) {
            return Err(CliError::Config("--digits must be >= 1".into()));
        }
        if args.jobs == Some(0) {
            return Err(CliError::Config("--jobs must be >= 1".into()));
        }
        if needs.mc && args.samples == Some(0) {
            return Err(CliError::Config("--samples must be >= 1".into()));
        }

        let family = if needs.ensemble {
            let fam = match (ensemble, &args.a, &args.alpha) {
                (EnsembleArg::Gaussian, None, None) => Ensemble::gaussian(beta),
                (EnsembleArg::Gaussian, _, _) => {
                    return Err(CliError::Config("--a and --alpha apply to the Laguerre ensemble only".into()))
                }
                (EnsembleArg::Laguerre, Some(a), None) => Ensemble::laguerre_fixed(beta, parse_param("a", a)?),
                (EnsembleArg::Laguerre, None, Some(al)) => {
                    Ensemble::laguerre_proportional(beta, parse_param("alpha", al)?)
                }
                (EnsembleArg::Laguerre, Some(_), Some(_)) => {
                    return Err(CliError::Config("give either --a or --alpha, not both".into()))
                }
                (EnsembleArg::Laguerre, None, None) => {
                    return Err(CliError::Config("the Laguerre ensemble needs --a or --alpha".into()))
                }
            };
            Some(fam.map_err(|e| CliError::Config(e.to_string()))?)
        } else {
            None
        };
        let scaling = args.scaling.unwrap_or(ScalingArg::Centred);
        if scaling == ScalingArg::Primed && !matches!(family.as_ref().map(|f| &f.family), Some(betaedge::Family::LaguerreFixed { .. })) {
            return Err(CliError::Config("--scaling primed applies to the fixed-a Laguerre ensemble only".into()));
        }
        Ok(JobConfig {
            command: command.to_string(),
            ensemble,
            beta,
            n,
            a: args.a,
            alpha: args.alpha,
            scaling,
            grid: grid_text,
            precision_bits: precision,
            backend,
            format: args.format.unwrap_or(Format::Csv),
            out: args.out,
            digits: args.digits.unwrap_or(DEFAULT_DIGITS),
            jobs: args.jobs,
            seed: needs.mc.then(|| args.seed.unwrap_or(42)),
            samples: needs.mc.then(|| args.samples.unwrap_or(betaedge::mc::DEFAULT_SAMPLES)),
            bins: needs.mc.then(|| args.bins.unwrap_or(betaedge::mc::DEFAULT_BINS)),
            quiet: args.quiet,
            grid_spec,
            family,
        })
    }

    pub fn ensemble(&self) -> &Ensemble {
        self.family.as_ref().expect("command validated with an ensemble")
    }

    pub fn centring(&self) -> Option<Centring> {
        match self.scaling {
            ScalingArg::None => None,
            ScalingArg::Uncentred => Some(Centring::Uncentred),
            ScalingArg::Centred => Some(Centring::Centred),
            ScalingArg::Primed => Some(Centring::Primed),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn needs() -> Needs {
        Needs { sizes: 1, mc: false, ensemble: true }
    }

    #[test]
    fn config_text_parsing() {
        let m = parse_config_text("beta = 6 # comment\n\nn=30,40\nsample-count = 3").unwrap();
        assert_eq!(m["beta"], "6");
        assert_eq!(m["n"], "30,40");
        assert_eq!(m["sample_count"], "3");
        assert!(parse_config_text("no equals sign").is_err());
    }

    #[test]
    fn flags_override_file_entries() {
        let file = parse_config_text("beta = 6\nn = 30\nensemble = laguerre\na = 0.5").unwrap();
        let args = JobArgs { beta: Some(4), ..Default::default() }.merge_file(&file).unwrap();
        assert_eq!(args.beta, Some(4));
        assert_eq!(args.n, Some(vec![30]));
        assert_eq!(args.ensemble, Some(EnsembleArg::Laguerre));
        assert!(JobArgs::default().merge_file(&parse_config_text("colour = red").unwrap()).is_err());
    }

    #[test]
    fn validation_rejects_bad_jobs() {
        let base = || JobArgs { n: Some(vec![10]), ..Default::default() };
        assert!(JobConfig::build("density", base(), needs()).is_ok());
        assert!(JobConfig::build("density", JobArgs { beta: Some(3), ..base() }, needs()).is_err());
        assert!(JobConfig::build("density", JobArgs { a: Some("1".into()), ..base() }, needs()).is_err());
        let lag = JobArgs { ensemble: Some(EnsembleArg::Laguerre), ..base() };
        assert!(JobConfig::build("density", lag.clone(), needs()).is_err());
        assert!(JobConfig::build("density", JobArgs { a: Some("x".into()), ..lag.clone() }, needs()).is_err());
        assert!(JobConfig::build("density", JobArgs { a: Some("0.5".into()), ..lag }, needs()).is_ok());
        assert!(JobConfig::build("density", JobArgs { grid: Some("1:0:0.1".into()), ..base() }, needs()).is_err());
        assert!(JobConfig::build("density", JobArgs { n: None, ..base() }, needs()).is_err());
        assert!(JobConfig::build("density", JobArgs { scaling: Some(ScalingArg::Primed), ..base() }, needs()).is_err());
    }
}
