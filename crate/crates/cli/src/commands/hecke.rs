use clap::Args;
use qboundary::export::hecke_report_json;
use qboundary::hecke::{check_hecke, Expectation, Variant};
use qboundary::{Scalar, DEFAULT_TOLERANCE};
use serde::Serialize;
use serde_json::json;

use super::{parse_q, CommonArgs, Run};
use crate::by_mode;
use crate::config::{pick, require, usage, Common};
use crate::output::Outcome;

pub const DEFAULT_SITES: usize = 3;

#[derive(Args, Debug, Clone)]
pub struct HeckeArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Site dimension.
    #[arg(long)]
    pub n: Option<usize>,
    /// Number of tensor sites.
    #[arg(long)]
    pub m: Option<usize>,
    /// `pi`, `pi_plus`, `pi_minus` or `all` (the default).
    #[arg(long)]
    pub variant: Option<String>,
}

#[derive(Serialize)]
struct HeckeConfig {
    #[serde(flatten)]
    common: Common,
    n: usize,
    m: usize,
    variant: String,
    #[serde(skip)]
    variants: Vec<Variant>,
}

pub fn run(args: &HeckeArgs) -> anyhow::Result<Run> {
    let r = args.common.resolve("hecke", &["n", "m", "variant"])?;
    let n: usize = require(args.n, &r.file, "n")?;
    let m = pick(args.m, &r.file, "m", DEFAULT_SITES)?;
    let variant = pick(args.variant.clone(), &r.file, "variant", "all".to_string())?;
    let variants = if variant == "all" {
        Variant::ALL.to_vec()
    } else {
        vec![variant.parse::<Variant>().map_err(|e| usage(e.to_string()))?]
    };
    let config = HeckeConfig {
        common: r.common,
        n,
        m,
        variant,
        variants,
    };
    let outcome = by_mode!(config.common.mode, body(&config))?;
    Ok(Run {
        config: serde_json::to_value(&config)?,
        format: config.common.format,
        out: r.out,
        outcome,
    })
}

fn body<S: Scalar>(cfg: &HeckeConfig) -> anyhow::Result<Outcome> {
    let q = parse_q::<S>(&cfg.common.q)?;
    let mut outcome = Outcome::default();
    let mut scalars = Vec::new();
    for &variant in &cfg.variants {
        let report = check_hecke(cfg.n, cfg.m, &q, variant).map_err(|e| usage(e.to_string()))?;
        let json = hecke_report_json(&report);
        outcome.check(
            &format!("relations_{variant}"),
            report.relations_hold(DEFAULT_TOLERANCE),
            json["residuals"].clone(),
        );
        // pi_+- contract to scalars; pi does not.
        let expected_scalar = variant != Variant::Pi;
        outcome.check(
            &format!("expectation_{variant}"),
            report.expectation.is_scalar() == expected_scalar,
            json["expectation"].clone(),
        );
        if let Expectation::Scalar(c) = &report.expectation {
            scalars.push(c.clone());
        }
        outcome.json(&format!("hecke_{variant}"), json);
    }
    if scalars.len() == 2 {
        outcome.check(
            "expectation_plus_equals_minus",
            scalars[0].approx_eq(&scalars[1], DEFAULT_TOLERANCE),
            json!({}),
        );
    }
    Ok(outcome)
}
