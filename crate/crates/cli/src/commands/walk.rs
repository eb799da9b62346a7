use clap::Args;
use qboundary::centerwalk::{
    build_kernel, dim_ratio, distribution_after, escape_fraction, martingale_trace, sample_paths,
    step_counts, LevyMeasure, TransitionKernel, RNG_ALGORITHM,
};
use qboundary::export::{distribution_table, kernel_table, scalar_json, Table, CEMETERY_LABEL};
use qboundary::weights::{DominantWeight, DEFAULT_BALL_RADIUS};
use qboundary::{QParam, Scalar, DEFAULT_TOLERANCE};
use serde::Serialize;
use serde_json::{json, Value};

use super::{parse_q, CommonArgs, Run};
use crate::by_mode;
use crate::config::{pick, require, usage, Common};
use crate::output::{Check, Outcome};

pub const DEFAULT_STEPS: usize = 200;
pub const DEFAULT_PATHS: usize = 10_000;
pub const DEFAULT_LAW_STEPS: usize = 2;
pub const DEFAULT_ESCAPE_SIZE: u32 = 50;
pub const DEFAULT_WINDOW: usize = 20;
pub const DEFAULT_THRESHOLD: f64 = 1e-6;
/// Empirical counts must lie within this many standard deviations of the exact law.
pub const SIGMA_BOUND: f64 = 4.0;
pub const ESCAPE_TARGET: f64 = 0.99;

#[derive(Args, Debug, Clone)]
pub struct WalkArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// The group is SU(n).
    #[arg(long)]
    pub n: Option<usize>,
    /// Kernel window |s| <= ball. Defaults to steps * max|nu| + 1 for SU(2), where no path
    /// can reach the cemetery, and to 8 otherwise.
    #[arg(long)]
    pub ball: Option<u32>,
    /// Measure as `w:mass;w:mass`, e.g. `1,0:1/2;2,1:1/2`. Defaults to the fundamental.
    #[arg(long)]
    pub levy: Option<String>,
    /// Path length.
    #[arg(long)]
    pub steps: Option<usize>,
    /// Number of sampled paths.
    #[arg(long)]
    pub paths: Option<usize>,
    /// Exact laws of s_1..s_k written and compared against the samples.
    #[arg(long)]
    pub law_steps: Option<usize>,
    /// A path has escaped when its final |s| exceeds this.
    #[arg(long)]
    pub escape_size: Option<u32>,
    /// Tail window for the martingale oscillation summary.
    #[arg(long)]
    pub window: Option<usize>,
    /// Oscillation threshold for the martingale summary.
    #[arg(long)]
    pub threshold: Option<f64>,
}

#[derive(Serialize)]
struct WalkConfig {
    #[serde(flatten)]
    common: Common,
    n: usize,
    ball: u32,
    levy: String,
    steps: usize,
    paths: usize,
    law_steps: usize,
    escape_size: u32,
    window: usize,
    threshold: f64,
    rng: &'static str,
}

const KEYS: [&str; 10] = [
    "n", "ball", "levy", "steps", "paths", "law_steps", "escape_size", "window", "threshold", "rng",
];

pub fn run(args: &WalkArgs) -> anyhow::Result<Run> {
    let r = args.common.resolve("walk", &KEYS)?;
    let f = &r.file;
    let n: usize = require(args.n, f, "n")?;
    if n < 2 {
        return Err(usage(format!("--n must be at least 2, got {n}")));
    }
    let levy = pick(args.levy.clone(), f, "levy", DominantWeight::fundamental(n).to_string())?;
    let steps = pick(args.steps, f, "steps", DEFAULT_STEPS)?;
    let paths = pick(args.paths, f, "paths", DEFAULT_PATHS)?;
    if steps == 0 || paths == 0 {
        return Err(usage("--steps and --paths must be positive"));
    }
    // Validate the measure up front so a bad spec is a usage error.
    let max_size = LevyMeasure::<f64>::parse(&levy, n)
        .map_err(|e| usage(format!("--levy: {e}")))?
        .max_size();
    let default_ball = if n == 2 {
        (steps as u32).saturating_mul(max_size.max(1)).saturating_add(1)
    } else {
        DEFAULT_BALL_RADIUS * 2
    };
    let config = WalkConfig {
        n,
        ball: pick(args.ball, f, "ball", default_ball)?,
        levy,
        steps,
        paths,
        law_steps: pick(args.law_steps, f, "law_steps", DEFAULT_LAW_STEPS)?.min(steps),
        escape_size: pick(args.escape_size, f, "escape_size", DEFAULT_ESCAPE_SIZE)?,
        window: pick(args.window, f, "window", DEFAULT_WINDOW)?,
        threshold: pick(args.threshold, f, "threshold", DEFAULT_THRESHOLD)?,
        rng: RNG_ALGORITHM,
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

fn body<S: Scalar>(cfg: &WalkConfig) -> anyhow::Result<Outcome> {
    let q = parse_q::<S>(&cfg.common.q)?;
    let levy = LevyMeasure::<S>::parse(&cfg.levy, cfg.n).map_err(|e| usage(format!("--levy: {e}")))?;
    let kernel = build_kernel(cfg.ball, &levy, &q).map_err(|e| usage(e.to_string()))?;
    let mut outcome = Outcome::default();

    let bad_rows: Vec<String> = (0..kernel.len())
        .filter(|&i| !kernel.row_sum_with_cemetery(i).approx_eq(&S::one(), DEFAULT_TOLERANCE))
        .map(|i| kernel.states()[i].to_string())
        .collect();
    outcome.check(
        "row_stochastic",
        bad_rows.is_empty(),
        json!({ "states": kernel.len(), "bad_rows": bad_rows }),
    );

    let eigen = kernel.eigencheck();
    let eigen_ok = eigen.residual.approx_eq(&S::zero(), DEFAULT_TOLERANCE)
        && (!levy.is_nontrivial() || eigen.eigenvalue < S::one());
    let certificate = json!({
        "eigenvalue": scalar_json(&eigen.eigenvalue),
        "residual": scalar_json(&eigen.residual),
        "interior_states": eigen.interior_states,
        "states": eigen.states,
        "policy": kernel.policy(),
    });
    outcome.check("eigenfunction", eigen_ok, certificate.clone());
    outcome.table(kernel_table(&kernel));

    let dists: Vec<_> = (0..=cfg.law_steps).map(|k| distribution_after(&kernel, k)).collect();
    outcome.table(distribution_table(&kernel, &dists));
    outcome.json("eigen_certificate", certificate);

    let samples = sample_paths(&kernel, cfg.paths, cfg.steps, cfg.common.seed)?;
    let mut laws = Vec::new();
    let mut laws_ok = true;
    for d in &dists[1..] {
        let (ok, detail) = compare_law(&kernel, &samples, d.step, &d.masses, &d.cemetery, cfg.paths);
        laws_ok &= ok;
        laws.push(detail);
    }
    outcome.check("monte_carlo_laws", laws_ok, json!({ "sigma_bound": SIGMA_BOUND, "steps": laws }));

    let escape = if cfg.ball > cfg.escape_size {
        let fraction = escape_fraction(&samples, &kernel, cfg.escape_size);
        Check::new(
            "escape_fraction",
            fraction >= ESCAPE_TARGET,
            json!({ "fraction": fraction, "target": ESCAPE_TARGET, "escape_size": cfg.escape_size }),
        )
    } else {
        Check::skipped("escape_fraction", "ball does not exceed escape_size")
    };
    outcome.checks.push(escape);

    let qf: QParam<f64> = q.to_float();
    let h: Vec<f64> = kernel.states().iter().map(|w| dim_ratio(w, &qf)).collect();
    let trace = martingale_trace(
        &samples,
        &kernel,
        |w| w.and_then(|w| kernel.index_of(w)).map_or(0.0, |i| h[i]),
        cfg.window,
        cfg.threshold,
    );
    let mean_final =
        trace.values.iter().map(|v| *v.last().expect("non-empty")).sum::<f64>() / samples.len() as f64;
    let hits = samples
        .iter()
        .filter(|p| p.last() == kernel.cemetery_index())
        .count();
    outcome.json(
        "monte_carlo",
        json!({
            "rng": RNG_ALGORITHM,
            "seed": cfg.common.seed,
            "paths": cfg.paths,
            "length": cfg.steps,
            "laws": laws,
            "paths_in_cemetery": hits,
            "martingale": {
                "function": "dim/qdim",
                "window": trace.window,
                "threshold": trace.threshold,
                "settled_fraction": trace.settled_fraction,
                "mean_final_value": mean_final,
            },
        }),
    );

    let mut finals = Table::new("final_states", &["t", "count", "step"]);
    for (i, count) in step_counts(&samples, &kernel, cfg.steps).into_iter().enumerate() {
        if count > 0 {
            finals.push(vec![label(&kernel, i), count.to_string(), cfg.steps.to_string()]);
        }
    }
    outcome.table(finals);
    Ok(outcome)
}

fn label<S: Scalar>(kernel: &TransitionKernel<S>, i: usize) -> String {
    kernel
        .states()
        .get(i)
        .map_or_else(|| CEMETERY_LABEL.to_string(), ToString::to_string)
}

// Each state's count is binomial(paths, p); zero-probability states must be empty.
fn compare_law<S: Scalar>(
    kernel: &TransitionKernel<S>,
    samples: &[qboundary::centerwalk::PathSample],
    step: usize,
    masses: &[S],
    cemetery: &S,
    paths: usize,
) -> (bool, Value) {
    let counts = step_counts(samples, kernel, step);
    let n = paths as f64;
    let mut ok = true;
    let mut worst = 0.0f64;
    let mut rows = Vec::new();
    for (i, &count) in counts.iter().enumerate() {
        let p = masses.get(i).unwrap_or(cemetery).to_f64();
        if p == 0.0 && count == 0 {
            continue;
        }
        let expected = n * p;
        let sigma = (n * p * (1.0 - p)).max(0.0).sqrt();
        let gap = (count as f64 - expected).abs();
        let within = if sigma > 0.0 { gap <= SIGMA_BOUND * sigma } else { gap < 0.5 };
        if sigma > 0.0 {
            worst = worst.max(gap / sigma);
        }
        ok &= within;
        rows.push(json!({
            "t": label(kernel, i), "count": count, "expected": expected, "sigma": sigma,
        }));
    }
    (ok, json!({ "step": step, "max_z": worst, "states": rows }))
}
