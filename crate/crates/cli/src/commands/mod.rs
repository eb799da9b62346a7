pub mod coset;
pub mod fusion;
pub mod hecke;
pub mod walk;

use std::path::PathBuf;

use clap::Args;
use qboundary::{Mode, QParam, Scalar};
use serde_json::Value;

use crate::config::{infer_mode, pick, usage, Common, FileConfig, Format, COMMON_KEYS};
use crate::output::Outcome;

#[derive(Args, Debug, Clone, Default)]
pub struct CommonArgs {
    /// Deformation parameter in (0, 1): `p/r` runs exactly, a decimal runs in floating point.
    #[arg(long)]
    pub q: Option<String>,
    /// Override the mode inferred from --q.
    #[arg(long)]
    pub mode: Option<Mode>,
    /// Format for tabular output.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Config file: JSON object or `key = value` lines. Flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Seed for every random draw.
    #[arg(long)]
    pub seed: Option<u64>,
}

pub const DEFAULT_Q: &str = "1/2";
pub const DEFAULT_SEED: u64 = 7;
pub const DEFAULT_OUT: &str = "qboundary-out";

pub struct Resolved {
    pub common: Common,
    pub out: PathBuf,
    pub file: FileConfig,
}

impl CommonArgs {
    pub fn resolve(&self, subcommand: &'static str, extra_keys: &[&str]) -> anyhow::Result<Resolved> {
        let file = FileConfig::load(self.config.as_deref())?;
        let allowed: Vec<&str> = COMMON_KEYS.iter().chain(extra_keys).copied().collect();
        file.check_keys(&allowed)?;
        let q = pick(self.q.clone(), &file, "q", DEFAULT_Q.to_string())?;
        let mode = match self.mode {
            Some(m) => m,
            None => file.get("mode")?.unwrap_or_else(|| infer_mode(&q)),
        };
        let format = pick(self.format, &file, "format", Format::Csv)?;
        let seed = pick(self.seed, &file, "seed", DEFAULT_SEED)?;
        let out = pick(self.out.clone(), &file, "out", PathBuf::from(DEFAULT_OUT))?;
        Ok(Resolved {
            common: Common {
                subcommand,
                q,
                mode,
                format,
                seed,
            },
            out,
            file,
        })
    }
}

pub fn parse_q<S: Scalar>(q: &str) -> anyhow::Result<QParam<S>> {
    QParam::parse(q).map_err(|e| usage(e.to_string()))
}

/// A finished subcommand: what to write and where.
pub struct Run {
    pub config: Value,
    pub format: Format,
    pub out: PathBuf,
    pub outcome: Outcome,
}

/// Runs `$body::<S>(args..)` with `S` chosen by the resolved mode.
#[macro_export]
macro_rules! by_mode {
    ($mode:expr, $body:ident($($arg:expr),*)) => {
        match $mode {
            qboundary::Mode::Exact => $body::<qboundary::Rational>($($arg),*),
            qboundary::Mode::Float => $body::<f64>($($arg),*),
        }
    };
}
