use clap::Args;
use qboundary::export::{fmt_scalar, fusion_table, Table};
use qboundary::qarith::qdim_sun;
use qboundary::weights::{
    ball, check_sum_rules, equality_criterion, DominantWeight, FusionRing, DEFAULT_BALL_RADIUS,
};
use qboundary::{Scalar, DEFAULT_TOLERANCE};
use serde::Serialize;
use serde_json::json;

use super::{parse_q, CommonArgs, Run};
use crate::by_mode;
use crate::config::{pick, require, usage, Common};
use crate::output::Outcome;

#[derive(Args, Debug, Clone)]
pub struct FusionArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// The group is SU(n).
    #[arg(long)]
    pub n: Option<usize>,
    /// Tabulate all weights with |lambda| <= ball.
    #[arg(long)]
    pub ball: Option<u32>,
}

#[derive(Serialize)]
struct FusionConfig {
    #[serde(flatten)]
    common: Common,
    n: usize,
    ball: u32,
}

pub fn run(args: &FusionArgs) -> anyhow::Result<Run> {
    let r = args.common.resolve("fusion", &["n", "ball"])?;
    let n: usize = require(args.n, &r.file, "n")?;
    if n < 2 {
        return Err(usage(format!("--n must be at least 2, got {n}")));
    }
    let radius = pick(args.ball, &r.file, "ball", DEFAULT_BALL_RADIUS)?;
    let outcome = by_mode!(r.common.mode, body(n, radius, &r.common.q))?;
    let config = FusionConfig {
        common: r.common,
        n,
        ball: radius,
    };
    Ok(Run {
        config: serde_json::to_value(&config)?,
        format: config.common.format,
        out: r.out,
        outcome,
    })
}

fn body<S: Scalar>(n: usize, radius: u32, q: &str) -> anyhow::Result<Outcome> {
    let q = parse_q::<S>(q)?;
    let ring = FusionRing::new(n)?;
    let states = ball(n, radius);
    let mut outcome = Outcome::default();

    let mut products = Vec::with_capacity(states.len() * states.len());
    let mut failures = Vec::new();
    for a in &states {
        for b in &states {
            let p = ring.product(a, b)?;
            let rules = check_sum_rules(a, b, &p, &q, DEFAULT_TOLERANCE);
            if !rules.hold() {
                failures.push(json!({
                    "lambda": a, "mu": b,
                    "classical": rules.classical, "quantum": rules.quantum,
                }));
            }
            products.push((a, b, p));
        }
    }
    outcome.check(
        "sum_rules",
        failures.is_empty(),
        json!({ "products": products.len(), "failures": failures }),
    );
    outcome.table(fusion_table(products.iter().map(|(a, b, p)| (*a, *b, p.as_ref()))));

    let mut m0 = Table::new("zero_weight", &["weight", "dim", "qdim", "m0"]);
    for w in &states {
        m0.push(vec![
            w.to_string(),
            w.dim().to_string(),
            fmt_scalar(&qdim_sun(w, &q)),
            ring.zero_weight_dim(w)?.to_string(),
        ]);
    }
    outcome.table(m0);

    let mut report = Table::new(
        "multiplicity_bound",
        &["U", "V", "N_UUV", "m0_V", "criterion", "bound_holds", "equality_holds"],
    );
    let (mut bound_ok, mut equality_ok, mut criterion_pairs) = (true, true, 0usize);
    for u in &states {
        for v in &states {
            let mult = ring.mult_in_self_tensor(u, v)?;
            let m0 = ring.zero_weight_dim(v)?;
            let criterion = equality_criterion(u, v)?;
            let bound = mult <= m0;
            let equality = !criterion || mult == m0;
            bound_ok &= bound;
            equality_ok &= equality;
            criterion_pairs += usize::from(criterion);
            report.push(row(u, v, mult, m0, criterion, bound, equality));
        }
    }
    outcome.check("multiplicity_bound", bound_ok, json!({ "pairs": states.len().pow(2) }));
    outcome.check(
        "equality_criterion",
        equality_ok,
        json!({ "pairs_meeting_criterion": criterion_pairs }),
    );
    outcome.table(report);
    Ok(outcome)
}

fn row(
    u: &DominantWeight,
    v: &DominantWeight,
    mult: u64,
    m0: u64,
    criterion: bool,
    bound: bool,
    equality: bool,
) -> Vec<String> {
    vec![
        u.to_string(),
        v.to_string(),
        mult.to_string(),
        m0.to_string(),
        criterion.to_string(),
        bound.to_string(),
        equality.to_string(),
    ]
}
