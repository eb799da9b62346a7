//! Tabular and JSON views of computed objects.
//!
//! Scalars are written as `p/r` in exact mode and as shortest round-trip floats otherwise,
//! so output is byte-stable across runs.

use std::io::Write;

use serde::Serialize;
use serde_json::{json, Value};

use crate::centerwalk::{Distribution, TransitionKernel};
use crate::cosetwalk::{EigenCertificate, Grid, GridMeasure};
use crate::hecke::{Expectation, HeckeReport};
use crate::scalar::{Mode, Scalar};
use crate::weights::{DominantWeight, FusionResult};
use crate::Result;

/// Label used for the absorbing coordinate in exported tables.
pub const CEMETERY_LABEL: &str = "cemetery";

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Self {
            name: name.to_string(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Writes `# line` comments, then the header and rows.
    pub fn write_csv<W: Write>(&self, out: W, comments: &[String]) -> Result<()> {
        let mut out = out;
        for line in comments {
            writeln!(out, "# {line}")?;
        }
        let mut writer = csv::Writer::from_writer(out);
        writer.write_record(&self.columns)?;
        for row in &self.rows {
            writer.write_record(row)?;
        }
        writer.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self, comments: &[String]) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf, comments)?;
        Ok(String::from_utf8(buf).expect("csv output is utf-8"))
    }

    /// `{"name", "columns", "rows"}` with cells kept as strings.
    pub fn to_json(&self) -> Value {
        json!({ "name": self.name, "columns": self.columns, "rows": self.rows })
    }
}

/// `p/r` in exact mode; in float mode the shortest round-trip form, switching to
/// exponent notation for very small or large magnitudes.
pub fn fmt_scalar<S: Scalar>(x: &S) -> String {
    match S::MODE {
        Mode::Exact => x.to_string(),
        Mode::Float => format!("{:?}", x.to_f64()),
    }
}

/// A scalar as JSON: a string in exact mode, a number in float mode.
pub fn scalar_json<S: Scalar>(x: &S) -> Value {
    match S::MODE {
        Mode::Exact => Value::String(x.to_string()),
        Mode::Float => json!(x.to_f64()),
    }
}

/// `lambda, mu, nu, mult` for every listed product.
pub fn fusion_table<'a>(
    products: impl IntoIterator<Item = (&'a DominantWeight, &'a DominantWeight, &'a FusionResult)>,
) -> Table {
    let mut table = Table::new("fusion", &["lambda", "mu", "nu", "mult"]);
    for (lam, mu, result) in products {
        for (nu, mult) in result.iter() {
            table.push(vec![
                lam.to_string(),
                mu.to_string(),
                nu.to_string(),
                mult.to_string(),
            ]);
        }
    }
    table
}

/// `s, t, p` for every non-zero transition, cemetery moves included.
pub fn kernel_table<S: Scalar>(kernel: &TransitionKernel<S>) -> Table {
    let mut table = Table::new("kernel", &["s", "t", "p"]);
    for (i, s) in kernel.states().iter().enumerate() {
        for (j, p) in kernel.row(i) {
            table.push(vec![s.to_string(), kernel.states()[*j].to_string(), fmt_scalar(p)]);
        }
        if !kernel.is_interior(i) {
            table.push(vec![
                s.to_string(),
                CEMETERY_LABEL.to_string(),
                fmt_scalar(kernel.escape_mass(i)),
            ]);
        }
    }
    table
}

/// `t, mass, step` for the non-zero entries of each distribution.
pub fn distribution_table<S: Scalar>(kernel: &TransitionKernel<S>, dists: &[Distribution<S>]) -> Table {
    let mut table = Table::new("distribution", &["t", "mass", "step"]);
    for d in dists {
        for (t, mass) in kernel.states().iter().zip(&d.masses) {
            if !mass.is_zero() {
                table.push(vec![t.to_string(), fmt_scalar(mass), d.step.to_string()]);
            }
        }
        if !d.cemetery.is_zero() {
            table.push(vec![
                CEMETERY_LABEL.to_string(),
                fmt_scalar(&d.cemetery),
                d.step.to_string(),
            ]);
        }
    }
    table
}

/// `k, t_k, a_k, f_residual` along the grid.
pub fn coset_sequence_table<S: Scalar>(cert: &EigenCertificate<S>, grid: &Grid<S>) -> Table {
    let mut table = Table::new("coset_sequence", &["k", "t_k", "a_k", "f_residual"]);
    for k in 0..=cert.depth {
        table.push(vec![
            k.to_string(),
            fmt_scalar(grid.point(k)),
            fmt_scalar(cert.a(k)),
            fmt_scalar(&cert.point_residuals[k]),
        ]);
    }
    table
}

/// `step, point, mass` with the point written as `t_k`, and `0` for the counit.
pub fn measure_table<S: Scalar>(path: &[GridMeasure<S>], grid: &Grid<S>) -> Table {
    let mut table = Table::new("measure_evolution", &["step", "point", "mass"]);
    for (step, nu) in path.iter().enumerate() {
        for (k, mass) in nu.masses.iter().enumerate() {
            if !mass.is_zero() {
                table.push(vec![step.to_string(), fmt_scalar(grid.point(k)), fmt_scalar(mass)]);
            }
        }
        table.push(vec![step.to_string(), "0".to_string(), fmt_scalar(&nu.at_zero)]);
    }
    table
}

/// `{q, K, lambda, min_f, residual, policy}`.
pub fn certificate_json<S: Scalar>(cert: &EigenCertificate<S>) -> Value {
    json!({
        "q": scalar_json(&cert.q),
        "K": cert.depth,
        "lambda": scalar_json(&cert.lambda),
        "min_f": scalar_json(&cert.min_f),
        "residual": scalar_json(&cert.residual),
        "policy": cert.policy,
    })
}

pub fn hecke_report_json<S: Scalar>(report: &HeckeReport<S>) -> Value {
    let opt = |x: &Option<S>| x.as_ref().map_or(Value::Null, scalar_json);
    let list = |xs: &[S]| Value::Array(xs.iter().map(scalar_json).collect());
    let expectation = match &report.expectation {
        Expectation::Scalar(c) => json!({ "scalar": scalar_json(c) }),
        Expectation::Diagonal(d) => json!({ "diagonal": list(d) }),
        Expectation::General(d) => json!({ "general_diagonal": list(d) }),
    };
    json!({
        "variant": report.variant.to_string(),
        "n": report.n,
        "m": report.m,
        "q": report.q,
        "residuals": {
            "quadratic": scalar_json(&report.quadratic),
            "braid": opt(&report.braid),
            "commutation": opt(&report.commutation),
        },
        "expectation": expectation,
    })
}
