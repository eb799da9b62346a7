use clap::Args;
use qboundary::cosetwalk::{
    chebyshev_p, eigen_sequence, eigen_values, measure_path, positivity_rewrite_check, Grid,
    GridFunction, GridMeasure,
};
use qboundary::export::{
    certificate_json, coset_sequence_table, fmt_scalar, measure_table, scalar_json, Table,
};
use qboundary::qarith::{asym_const, q_int};
use qboundary::{QParam, Scalar, DEFAULT_TOLERANCE};
use serde::Serialize;
use serde_json::json;

use super::{parse_q, CommonArgs, Run};
use crate::by_mode;
use crate::config::{pick, usage, Common};
use crate::output::Outcome;

pub const DEFAULT_DEPTH: usize = 300;
pub const DEFAULT_STEPS: usize = 100;
pub const DEFAULT_TERMS: usize = 128;
/// Allowed relative gap between `a_K` and `K q^K C(q)`.
pub const ASYMPTOTIC_TOLERANCE: f64 = 0.01;

#[derive(Args, Debug, Clone)]
pub struct CosetArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Grid depth: points t_k = q^{2k} for k <= K, plus 0.
    #[arg(long = "K", alias = "k")]
    pub depth: Option<usize>,
    /// Steps of the dual action applied to the point mass at t_0 = 1.
    #[arg(long)]
    pub steps: Option<usize>,
    /// Tabulate a_k / (k q^k C(q)) in floating point.
    #[arg(long)]
    pub asymptotics: bool,
    /// Tabulate p_{2s}(2/[2]_q) against (2s+1)/[2s+1]_q for 2s <= N.
    #[arg(long)]
    pub p2s: Option<usize>,
    /// Factors kept in the product defining C(q).
    #[arg(long)]
    pub terms: Option<usize>,
}

#[derive(Serialize)]
struct CosetConfig {
    #[serde(flatten)]
    common: Common,
    #[serde(rename = "K")]
    depth: usize,
    steps: usize,
    asymptotics: bool,
    p2s: Option<usize>,
    terms: usize,
}

pub fn run(args: &CosetArgs) -> anyhow::Result<Run> {
    let r = args.common.resolve("coset", &["K", "steps", "asymptotics", "p2s", "terms"])?;
    let f = &r.file;
    let depth = pick(args.depth, f, "K", DEFAULT_DEPTH)?;
    if depth == 0 {
        return Err(usage("--K must be at least 1"));
    }
    let asymptotics = args.asymptotics || f.get("asymptotics")?.unwrap_or(false);
    let p2s = match args.p2s {
        Some(v) => Some(v),
        None => f.get("p2s")?,
    };
    let config = CosetConfig {
        depth,
        steps: pick(args.steps, f, "steps", DEFAULT_STEPS)?,
        asymptotics,
        p2s,
        terms: pick(args.terms, f, "terms", DEFAULT_TERMS)?,
        common: r.common,
    };
    let outcome = by_mode!(config.common.mode, body(&config))?;
    Ok(Run {
        config: serde_json::to_value(&config)?,
        format: config.common.format,
        out: r.out,
        outcome,
    })
}

fn close<S: Scalar>(a: &S, b: &S) -> bool {
    a.approx_eq(b, DEFAULT_TOLERANCE)
}

fn body<S: Scalar>(cfg: &CosetConfig) -> anyhow::Result<Outcome> {
    let q = parse_q::<S>(&cfg.common.q)?;
    let grid = Grid::new(&q, cfg.depth)?;
    let cert = eigen_sequence(&q, cfg.depth)?;
    let mut outcome = Outcome::default();

    let eigen_ok = close(&cert.residual, &S::zero())
        && cert.min_f > S::zero()
        && cert.dominates_geometric
        && positivity_rewrite_check(&cert);
    outcome.check("eigen_certificate", eigen_ok, certificate_json(&cert));
    outcome.json("certificate", certificate_json(&cert));
    outcome.table(coset_sequence_table(&cert, &grid));

    let path = measure_path(&GridMeasure::dirac(&grid, 0)?, &grid, cfg.steps)?;
    measure_checks(&mut outcome, &cert, &grid, &path);
    outcome.table(measure_table(&path, &grid));

    if cfg.asymptotics {
        asymptotics(&mut outcome, &q.to_float(), cfg.depth, cfg.terms)?;
    }
    if let Some(top) = cfg.p2s {
        polynomial_identity(&mut outcome, &q, top)?;
    }
    Ok(outcome)
}

fn measure_checks<S: Scalar>(
    outcome: &mut Outcome,
    cert: &qboundary::cosetwalk::EigenCertificate<S>,
    grid: &Grid<S>,
    path: &[GridMeasure<S>],
) {
    let conserved = path.iter().all(|nu| close(&nu.total(), &S::one()));
    let monotone = path.windows(2).all(|w| w[1].at_zero >= w[0].at_zero);
    outcome.check("mass_conserved", conserved, json!({ "steps": path.len() - 1 }));
    outcome.check("mass_at_zero_monotone", monotone, json!({}));

    // nu A^n f = lambda^n f(t_0) while no mass has reached the truncation boundary.
    let f = &cert.f;
    let mut lambda_n = S::one();
    let mut pairing_ok = true;
    let mut bound_ok = true;
    let mut worst = Vec::new();
    for (n, nu) in path.iter().enumerate() {
        let pairing = nu.integrate(f);
        let target = lambda_n.clone() * cert.a(0);
        let exact_regime = n < grid.depth();
        pairing_ok &= if exact_regime { close(&pairing, &target) } else { pairing <= target };
        for (k, mass) in nu.masses.iter().enumerate() {
            let bound = cert.a(0).clone() / cert.a(k) * &lambda_n;
            if *mass > bound && !close(mass, &bound) {
                bound_ok = false;
                worst.push(json!({ "n": n, "k": k, "mass": scalar_json(mass), "bound": scalar_json(&bound) }));
            }
        }
        lambda_n = lambda_n * &cert.lambda;
    }
    outcome.check("eigen_pairing", pairing_ok, json!({ "function": "f = (a_k)" }));
    outcome.check("transience_bound", bound_ok, json!({ "violations": worst }));

    let last = path.last().expect("non-empty");
    let zero = GridFunction::indicator_of_zero(grid);
    outcome.json(
        "measure_summary",
        json!({
            "steps": path.len() - 1,
            "mass_at_zero": scalar_json(&last.integrate(&zero)),
            "pairing_with_f": scalar_json(&last.integrate(f)),
            "lambda": scalar_json(&cert.lambda),
        }),
    );
}

fn asymptotics(outcome: &mut Outcome, q: &QParam<f64>, depth: usize, terms: usize) -> anyhow::Result<()> {
    let c = asym_const(q, terms)?.value;
    let a = eigen_values(q, depth);
    let qv = *q.value();
    let mut table = Table::new("asymptotics", &["k", "a_k", "ratio"]);
    let mut last = f64::NAN;
    for (k, ak) in a.iter().enumerate().skip(1) {
        let ratio = ak / (k as f64 * qv.powi(k as i32) * c);
        table.push(vec![k.to_string(), fmt_scalar(ak), fmt_scalar(&ratio)]);
        last = ratio;
    }
    outcome.check(
        "asymptotic_constant",
        (last - 1.0).abs() <= ASYMPTOTIC_TOLERANCE,
        json!({ "k": depth, "ratio": last, "C": c, "terms": terms, "tolerance": ASYMPTOTIC_TOLERANCE }),
    );
    outcome.table(table);
    Ok(())
}

fn polynomial_identity<S: Scalar>(outcome: &mut Outcome, q: &QParam<S>, top: usize) -> anyhow::Result<()> {
    let lambda = S::from_i64(2) / q_int(2, q)?;
    let mut table = Table::new("p2s_identity", &["two_s", "p_2s(lambda)", "rhs", "equal"]);
    let mut all = true;
    for two_s in 0..=top {
        let d = two_s as i64 + 1;
        let lhs = chebyshev_p(two_s, q).eval(&lambda);
        let rhs = S::from_i64(d) / q_int(d, q)?;
        let equal = close(&lhs, &rhs);
        all &= equal;
        table.push(vec![two_s.to_string(), fmt_scalar(&lhs), fmt_scalar(&rhs), equal.to_string()]);
    }
    outcome.check("p2s_identity", all, json!({ "max_two_s": top }));
    outcome.table(table);
    Ok(())
}
