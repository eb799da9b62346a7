//! Python bindings. `q` is passed either as a string such as `"1/2"` (exact arithmetic,
//! results come back as `fractions.Fraction`) or as a float (results are floats).

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyFloat, PyList, PyString};

use qboundary::centerwalk::{
    build_kernel, distribution_after, escape_fraction, sample_paths, LevyMeasure, TransitionKernel,
};
use qboundary::cosetwalk::{chebyshev_p, eigen_sequence, measure_path, Grid, GridMeasure};
use qboundary::export::CEMETERY_LABEL;
use qboundary::hecke::{check_hecke, g1_matrix, Expectation, Variant};
use qboundary::qarith::{asym_const, q_int as core_q_int, qdim_sun};
use qboundary::weights::{self, ball as core_ball, lr_coeffs, FusionRing};
use qboundary::{DominantWeight, Mode, QParam, Rational, Scalar};

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

enum AnyQ {
    Exact(QParam<Rational>),
    Float(QParam<f64>),
}

fn parse_q(q: &Bound<'_, PyAny>) -> PyResult<AnyQ> {
    if q.is_instance_of::<PyFloat>() {
        return QParam::new(q.extract::<f64>()?).map(AnyQ::Float).map_err(err);
    }
    let text = if q.is_instance_of::<PyString>() {
        q.extract::<String>()?
    } else {
        q.str()?.to_string()
    };
    if text.contains(['.', 'e', 'E']) {
        QParam::parse(&text).map(AnyQ::Float).map_err(err)
    } else {
        QParam::parse(&text).map(AnyQ::Exact).map_err(err)
    }
}

macro_rules! with_q {
    ($q:expr, |$qp:ident| $body:expr) => {
        match parse_q($q)? {
            AnyQ::Exact($qp) => $body,
            AnyQ::Float($qp) => $body,
        }
    };
}

fn to_py<'py, S: Scalar>(py: Python<'py>, x: &S) -> PyResult<Bound<'py, PyAny>> {
    match S::MODE {
        Mode::Exact => py.import("fractions")?.getattr("Fraction")?.call1((x.to_string(),)),
        Mode::Float => Ok(PyFloat::new(py, x.to_f64()).into_any()),
    }
}

fn to_py_list<'py, S: Scalar>(py: Python<'py>, xs: &[S]) -> PyResult<Bound<'py, PyList>> {
    let items = xs.iter().map(|x| to_py(py, x)).collect::<PyResult<Vec<_>>>()?;
    PyList::new(py, items)
}

fn weight(label: &str, n: usize) -> PyResult<DominantWeight> {
    DominantWeight::parse(label, n).map_err(err)
}

/// The q-integer `[n]_q`.
#[pyfunction]
fn q_int<'py>(py: Python<'py>, n: i64, q: &Bound<'py, PyAny>) -> PyResult<Bound<'py, PyAny>> {
    with_q!(q, |qp| to_py(py, &core_q_int(n, &qp).map_err(err)?))
}

/// Quantum dimension of the SU_q(n) irreducible labelled `weight`.
#[pyfunction]
fn qdim<'py>(py: Python<'py>, weight_label: &str, n: usize, q: &Bound<'py, PyAny>) -> PyResult<Bound<'py, PyAny>> {
    let w = weight(weight_label, n)?;
    with_q!(q, |qp| to_py(py, &qdim_sun(&w, &qp)))
}

/// `C(q) = (q; q^2)^2 / (q^2; q^2)^2` with `terms` factors kept in each product.
#[pyfunction]
#[pyo3(signature = (q, terms = 128))]
fn asymptotic_constant<'py>(py: Python<'py>, q: &Bound<'py, PyAny>, terms: usize) -> PyResult<Bound<'py, PyAny>> {
    with_q!(q, |qp| to_py(py, &asym_const(&qp, terms).map_err(err)?.value))
}

/// Classical dimension of an irreducible.
#[pyfunction]
fn dim(weight_label: &str, n: usize) -> PyResult<u64> {
    Ok(weight(weight_label, n)?.dim())
}

/// Dominant weights with `|w| <= radius`, as labels.
#[pyfunction]
fn ball(n: usize, radius: u32) -> Vec<String> {
    core_ball(n, radius).iter().map(ToString::to_string).collect()
}

/// Littlewood-Richardson decomposition of `lam (x) mu` as `{nu: multiplicity}`.
#[pyfunction]
fn fusion<'py>(py: Python<'py>, lam: &str, mu: &str, n: usize) -> PyResult<Bound<'py, PyDict>> {
    let product = lr_coeffs(&weight(lam, n)?, &weight(mu, n)?).map_err(err)?;
    let out = PyDict::new(py);
    for (nu, mult) in product.iter() {
        out.set_item(nu.to_string(), mult)?;
    }
    Ok(out)
}

/// Dimension of the zero-weight space.
#[pyfunction]
fn zero_weight_dim(weight_label: &str, n: usize) -> PyResult<u64> {
    Ok(weights::zero_weight_dim(&weight(weight_label, n)?))
}

/// Multiplicity of `u` in `v (x) conj(v)`.
#[pyfunction]
fn mult_in_self_tensor(u: &str, v: &str, n: usize) -> PyResult<u64> {
    let ring = FusionRing::new(n).map_err(err)?;
    ring.mult_in_self_tensor(&weight(u, n)?, &weight(v, n)?).map_err(err)
}

/// Whether `(u, v)` satisfies the sufficient condition for equality in the multiplicity bound.
#[pyfunction]
fn equality_criterion(u: &str, v: &str, n: usize) -> PyResult<bool> {
    weights::equality_criterion(&weight(u, n)?, &weight(v, n)?).map_err(err)
}

enum AnyKernel {
    Exact(TransitionKernel<Rational>),
    Float(TransitionKernel<f64>),
}

macro_rules! with_kernel {
    ($k:expr, |$kp:ident| $body:expr) => {
        match $k {
            AnyKernel::Exact($kp) => $body,
            AnyKernel::Float($kp) => $body,
        }
    };
}

/// Transition kernel of the central walk on the ball `|s| <= radius`, with a cemetery
/// collecting the mass that leaves the ball.
#[pyclass(frozen)]
struct Kernel {
    inner: AnyKernel,
    n: usize,
}

impl Kernel {
    fn label<S: Scalar>(kernel: &TransitionKernel<S>, i: usize) -> String {
        kernel
            .states()
            .get(i)
            .map_or(CEMETERY_LABEL.to_string(), ToString::to_string)
    }
}

#[pymethods]
impl Kernel {
    /// `levy` is `"w:mass;w:mass"`; by default the point mass at the fundamental weight.
    #[new]
    #[pyo3(signature = (n, radius, q, levy = None))]
    fn new(n: usize, radius: u32, q: &Bound<'_, PyAny>, levy: Option<&str>) -> PyResult<Self> {
        fn build<S: Scalar>(n: usize, radius: u32, q: &QParam<S>, levy: Option<&str>) -> PyResult<TransitionKernel<S>> {
            let levy = match levy {
                Some(spec) => LevyMeasure::parse(spec, n).map_err(err)?,
                None => LevyMeasure::point(DominantWeight::fundamental(n)),
            };
            build_kernel(radius, &levy, q).map_err(err)
        }
        let inner = match parse_q(q)? {
            AnyQ::Exact(qp) => AnyKernel::Exact(build(n, radius, &qp, levy)?),
            AnyQ::Float(qp) => AnyKernel::Float(build(n, radius, &qp, levy)?),
        };
        Ok(Self { inner, n })
    }

    #[getter]
    fn states(&self) -> Vec<String> {
        with_kernel!(&self.inner, |k| k.states().iter().map(ToString::to_string).collect())
    }

    /// `p(s, t)`; `t` may be the cemetery label.
    fn probability<'py>(&self, py: Python<'py>, s: &str, t: &str) -> PyResult<Bound<'py, PyAny>> {
        let n = self.n;
        with_kernel!(&self.inner, |k| {
            let find = |label: &str| -> PyResult<usize> {
                if label == CEMETERY_LABEL {
                    return Ok(k.cemetery_index());
                }
                k.index_of(&weight(label, n)?)
                    .ok_or_else(|| err(format!("{label} is outside the ball")))
            };
            to_py(py, &k.probability(find(s)?, find(t)?))
        })
    }

    /// `(eigenvalue, residual)` for `h(s) = dim(s) / qdim(s)` on interior states.
    fn eigencheck<'py>(&self, py: Python<'py>) -> PyResult<(Bound<'py, PyAny>, Bound<'py, PyAny>)> {
        with_kernel!(&self.inner, |k| {
            let check = k.eigencheck();
            Ok((to_py(py, &check.eigenvalue)?, to_py(py, &check.residual)?))
        })
    }

    /// Exact law after `steps` steps from the trivial weight, as `{state: mass}`.
    fn distribution<'py>(&self, py: Python<'py>, steps: usize) -> PyResult<Bound<'py, PyDict>> {
        with_kernel!(&self.inner, |k| {
            let law = distribution_after(k, steps);
            let out = PyDict::new(py);
            for (i, mass) in law.masses.iter().enumerate() {
                if !mass.is_zero() {
                    out.set_item(Self::label(k, i), to_py(py, mass)?)?;
                }
            }
            if !law.cemetery.is_zero() {
                out.set_item(CEMETERY_LABEL, to_py(py, &law.cemetery)?)?;
            }
            Ok(out)
        })
    }

    /// Sampled paths as lists of state labels; reproducible for a fixed seed.
    #[pyo3(signature = (paths, length, seed = 7))]
    fn sample(&self, paths: usize, length: usize, seed: u64) -> PyResult<Vec<Vec<String>>> {
        with_kernel!(&self.inner, |k| {
            let sample = sample_paths(k, paths, length, seed).map_err(err)?;
            Ok(sample
                .iter()
                .map(|p| p.states.iter().map(|&i| Self::label(k, i)).collect())
                .collect())
        })
    }

    /// Fraction of sampled paths ending outside `|s| <= min_size`.
    #[pyo3(signature = (paths, length, min_size, seed = 7))]
    fn escape_fraction(&self, paths: usize, length: usize, min_size: u32, seed: u64) -> PyResult<f64> {
        with_kernel!(&self.inner, |k| {
            let sample = sample_paths(k, paths, length, seed).map_err(err)?;
            Ok(escape_fraction(&sample, k, min_size))
        })
    }

    fn __len__(&self) -> usize {
        with_kernel!(&self.inner, |k| k.len())
    }
}

/// Positive eigenvector `(a_k)` of the double-coset operator on the grid `t_k = q^{2k}`,
/// `k <= depth`, with its eigenvalue and interior residual.
#[pyfunction]
#[pyo3(signature = (q, depth = 300))]
fn coset_certificate<'py>(py: Python<'py>, q: &Bound<'py, PyAny>, depth: usize) -> PyResult<Bound<'py, PyDict>> {
    with_q!(q, |qp| {
        let cert = eigen_sequence(&qp, depth).map_err(err)?;
        let out = PyDict::new(py);
        out.set_item("lambda", to_py(py, &cert.lambda)?)?;
        out.set_item("residual", to_py(py, &cert.residual)?)?;
        out.set_item("a", to_py_list(py, &cert.f.values)?)?;
        out.set_item("dominates_geometric", cert.dominates_geometric)?;
        Ok(out)
    })
}

/// `nu, nu A, ..., nu A^steps` for `nu` the point mass at `t_start`. Each entry is
/// `(masses on t_0..t_K, mass at 0)`.
#[pyfunction]
#[pyo3(signature = (q, depth, steps, start = 0))]
fn coset_measures<'py>(
    py: Python<'py>,
    q: &Bound<'py, PyAny>,
    depth: usize,
    steps: usize,
    start: usize,
) -> PyResult<Vec<(Bound<'py, PyList>, Bound<'py, PyAny>)>> {
    with_q!(q, |qp| {
        let grid = Grid::new(&qp, depth).map_err(err)?;
        let nu = GridMeasure::dirac(&grid, start).map_err(err)?;
        measure_path(&nu, &grid, steps)
            .map_err(err)?
            .iter()
            .map(|m| Ok((to_py_list(py, &m.masses)?, to_py(py, &m.at_zero)?)))
            .collect()
    })
}

/// `p_{2s}(x)`; `x` defaults to `2 / [2]_q`.
#[pyfunction]
#[pyo3(signature = (two_s, q, x = None))]
fn p2s<'py>(py: Python<'py>, two_s: usize, q: &Bound<'py, PyAny>, x: Option<&str>) -> PyResult<Bound<'py, PyAny>> {
    fn eval<S: Scalar>(two_s: usize, q: &QParam<S>, x: Option<&str>) -> PyResult<S> {
        let x = match x {
            Some(s) => S::parse_scalar(s).map_err(err)?,
            None => S::from_i64(2) / core_q_int(2, q).map_err(err)?,
        };
        Ok(chebyshev_p(two_s, q).eval(&x))
    }
    with_q!(q, |qp| to_py(py, &eval(two_s, &qp, x)?))
}

fn variant(name: &str) -> PyResult<Variant> {
    name.parse().map_err(err)
}

/// The matrix of `g_1` on two sites as a list of rows.
#[pyfunction]
#[pyo3(signature = (n, q, variant_name = "pi"))]
fn hecke_generator<'py>(py: Python<'py>, n: usize, q: &Bound<'py, PyAny>, variant_name: &str) -> PyResult<Bound<'py, PyList>> {
    let v = variant(variant_name)?;
    with_q!(q, |qp| {
        let g = g1_matrix(n, &qp, v).map_err(err)?;
        let d = g.dim();
        let rows = (0..d)
            .map(|i| to_py_list(py, &(0..d).map(|j| g.get(i, j).clone()).collect::<Vec<_>>()))
            .collect::<PyResult<Vec<_>>>()?;
        PyList::new(py, rows)
    })
}

/// Hecke relation residuals and the conditional expectation of the generator.
#[pyfunction]
#[pyo3(signature = (n, m, q, variant_name = "pi"))]
fn hecke_check<'py>(
    py: Python<'py>,
    n: usize,
    m: usize,
    q: &Bound<'py, PyAny>,
    variant_name: &str,
) -> PyResult<Bound<'py, PyDict>> {
    let v = variant(variant_name)?;
    with_q!(q, |qp| {
        let report = check_hecke(n, m, &qp, v).map_err(err)?;
        let out = PyDict::new(py);
        out.set_item("variant", v.to_string())?;
        out.set_item("quadratic", to_py(py, &report.quadratic)?)?;
        out.set_item("braid", report.braid.as_ref().map(|r| to_py(py, r)).transpose()?)?;
        out.set_item("commutation", report.commutation.as_ref().map(|r| to_py(py, r)).transpose()?)?;
        out.set_item("relations_hold", report.relations_hold(qboundary::DEFAULT_TOLERANCE))?;
        let (kind, value) = match &report.expectation {
            Expectation::Scalar(c) => ("scalar", to_py(py, c)?),
            Expectation::Diagonal(d) => ("diagonal", to_py_list(py, d)?.into_any()),
            Expectation::General(d) => ("general", to_py_list(py, d)?.into_any()),
        };
        out.set_item("expectation_kind", kind)?;
        out.set_item("expectation", value)?;
        Ok(out)
    })
}

#[pymodule]
fn qboundary_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(q_int, m)?)?;
    m.add_function(wrap_pyfunction!(qdim, m)?)?;
    m.add_function(wrap_pyfunction!(asymptotic_constant, m)?)?;
    m.add_function(wrap_pyfunction!(dim, m)?)?;
    m.add_function(wrap_pyfunction!(ball, m)?)?;
    m.add_function(wrap_pyfunction!(fusion, m)?)?;
    m.add_function(wrap_pyfunction!(zero_weight_dim, m)?)?;
    m.add_function(wrap_pyfunction!(mult_in_self_tensor, m)?)?;
    m.add_function(wrap_pyfunction!(equality_criterion, m)?)?;
    m.add_function(wrap_pyfunction!(coset_certificate, m)?)?;
    m.add_function(wrap_pyfunction!(coset_measures, m)?)?;
    m.add_function(wrap_pyfunction!(p2s, m)?)?;
    m.add_function(wrap_pyfunction!(hecke_generator, m)?)?;
    m.add_function(wrap_pyfunction!(hecke_check, m)?)?;
    m.add_class::<Kernel>()?;
    Ok(())
}
