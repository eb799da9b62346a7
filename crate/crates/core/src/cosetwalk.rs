//! The birth–death chain on the double-coset space of `SU_q(2)`.
//!
//! Functions on the torus double cosets are functions on the spectrum
//! `{0} u {q^{2k} : k >= 0}`. The Markov operator of the spin-1/2 state acts by
//!
//! ```text
//! (A h)(t) = ( q^-1 ((1 - q^2 t) h(q^2 t) + q^2 t h(t)) + q (t h(t) + (1 - t) h(q^-2 t)) ) / [2]_q
//! ```
//!
//! so from `t_k = q^{2k}` the walk steps to `t_{k+1}`, stays, or steps back to `t_{k-1}`.
//! The point `0` is absorbing and corresponds to the counit. The grid is truncated at
//! depth `K`: the `h(q^2 t)` term at `t_K` reads `h(0)`, so in measure form mass stepping
//! past `K` lands on `0`.
//!
//! The sequence `a_0 = 1`,
//! `2(1 - q^{2k+1}) a_k = q^-1 (1 - q^{2k+2}) a_{k+1} + q (1 - q^{2k}) a_{k-1}`
//! gives a strictly positive eigenvector `f(t_k) = a_k`, `f(0) = 0`, with eigenvalue
//! `2 / [2]_q < 1`, which certifies transience and forces `nu A^n -> delta_0`.

use serde::Serialize;

use crate::centerwalk::LevyMeasure;
use crate::qarith::q_int_raw;
use crate::scalar::{QParam, Scalar, Truncated};
use crate::{Error, Result};

/// Smallest admissible `|1 - q^{2j+1} z|` when evaluating the generating function.
pub const POLE_MARGIN: f64 = 1e-6;

/// Boundary policy tag recorded in certificates.
pub const BOUNDARY_POLICY: &str = "virtual t_{K+1} reads h(0); mass past K goes to 0";

/// The truncated spectrum `t_k = q^{2k}`, `k = 0..=K`, plus the point `0`.
#[derive(Debug, Clone)]
pub struct Grid<S> {
    q: QParam<S>,
    points: Vec<S>,
    /// Per point: probabilities of stepping to `k + 1`, staying, stepping to `k - 1`.
    moves: Vec<[S; 3]>,
}

impl<S: Scalar> Grid<S> {
    pub fn new(q: &QParam<S>, depth: usize) -> Result<Self> {
        if depth < 1 {
            return Err(Error::domain("grid depth must be at least 1"));
        }
        let q2 = q.pow(2);
        let qv = q.value().clone();
        let qinv = q.inv();
        let qint2 = qv.clone() + &qinv;
        let mut points = Vec::with_capacity(depth + 1);
        let mut moves = Vec::with_capacity(depth + 1);
        let mut t = S::one();
        for _ in 0..=depth {
            let up = qinv.clone() * (S::one() - q2.clone() * &t) / &qint2;
            let stay = (qinv.clone() * &q2 * &t + qv.clone() * &t) / &qint2;
            let down = qv.clone() * (S::one() - &t) / &qint2;
            moves.push([up, stay, down]);
            points.push(t.clone());
            t = t * &q2;
        }
        Ok(Self {
            q: q.clone(),
            points,
            moves,
        })
    }

    pub fn q(&self) -> &QParam<S> {
        &self.q
    }

    /// `K`, the index of the last non-zero point.
    pub fn depth(&self) -> usize {
        self.points.len() - 1
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, k: usize) -> &S {
        &self.points[k]
    }

    pub fn points(&self) -> &[S] {
        &self.points
    }

    /// `(up, stay, down)` transition probabilities out of `t_k`.
    pub fn moves(&self, k: usize) -> &[S; 3] {
        &self.moves[k]
    }

    /// `q^-1 (1 - q^2 t) + q^-1 q^2 t + q t + q (1 - t)` at `t_k`; equals `[2]_q`.
    pub fn coefficient_sum(&self, k: usize) -> S {
        let q2 = self.q.pow(2);
        let qv = self.q.value().clone();
        let qinv = self.q.inv();
        let t = &self.points[k];
        qinv.clone() * (S::one() - q2.clone() * t)
            + qinv * &q2 * t
            + qv.clone() * t
            + qv * (S::one() - t)
    }
}

/// A function on the grid: `values[k] = h(t_k)` and `h(0)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridFunction<S> {
    pub values: Vec<S>,
    pub at_zero: S,
}

impl<S: Scalar> GridFunction<S> {
    pub fn constant(grid: &Grid<S>, c: S) -> Self {
        Self {
            values: vec![c.clone(); grid.len()],
            at_zero: c,
        }
    }

    /// Indicator of the absorbing point `0`.
    pub fn indicator_of_zero(grid: &Grid<S>) -> Self {
        Self {
            values: vec![S::zero(); grid.len()],
            at_zero: S::one(),
        }
    }

    pub fn max_abs(&self) -> S {
        self.values
            .iter()
            .chain(std::iter::once(&self.at_zero))
            .fold(S::zero(), |m, v| {
                let a = v.abs();
                if a > m {
                    a
                } else {
                    m
                }
            })
    }

    fn axpy(&mut self, c: &S, other: &Self) {
        for (v, o) in self.values.iter_mut().zip(&other.values) {
            *v += c.clone() * o;
        }
        self.at_zero += c.clone() * &other.at_zero;
    }
}

/// A probability measure on the grid: `masses[k]` at `t_k` and `at_zero` at `0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridMeasure<S> {
    pub masses: Vec<S>,
    pub at_zero: S,
}

impl<S: Scalar> GridMeasure<S> {
    /// Point mass at `t_k`.
    pub fn dirac(grid: &Grid<S>, k: usize) -> Result<Self> {
        if k > grid.depth() {
            return Err(Error::domain(format!(
                "index {k} beyond grid depth {}",
                grid.depth()
            )));
        }
        let mut masses = vec![S::zero(); grid.len()];
        masses[k] = S::one();
        Ok(Self {
            masses,
            at_zero: S::zero(),
        })
    }

    /// The counit `delta_0`.
    pub fn counit(grid: &Grid<S>) -> Self {
        Self {
            masses: vec![S::zero(); grid.len()],
            at_zero: S::one(),
        }
    }

    pub fn total(&self) -> S {
        self.masses.iter().fold(self.at_zero.clone(), |a, m| a + m)
    }

    /// `nu(h)`.
    pub fn integrate(&self, h: &GridFunction<S>) -> S {
        self.masses
            .iter()
            .zip(&h.values)
            .fold(self.at_zero.clone() * &h.at_zero, |acc, (m, v)| {
                acc + m.clone() * v
            })
    }
}

fn check_size<S: Scalar>(grid: &Grid<S>, len: usize) -> Result<()> {
    if len != grid.len() {
        return Err(Error::SizeMismatch {
            expected: grid.len(),
            found: len,
        });
    }
    Ok(())
}

/// `A_{omega_{1/2}} h`.
pub fn apply_a_half<S: Scalar>(h: &GridFunction<S>, grid: &Grid<S>) -> Result<GridFunction<S>> {
    check_size(grid, h.values.len())?;
    let depth = grid.depth();
    let values = (0..=depth)
        .map(|k| {
            let [up, stay, down] = grid.moves(k);
            let next = if k < depth {
                &h.values[k + 1]
            } else {
                &h.at_zero
            };
            let mut v = up.clone() * next + stay.clone() * &h.values[k];
            if k > 0 {
                v += down.clone() * &h.values[k - 1];
            }
            v
        })
        .collect();
    Ok(GridFunction {
        values,
        at_zero: h.at_zero.clone(),
    })
}

/// `A_omega h` for `omega = sum_s lambda_s omega_s`, computed as
/// `sum_s lambda_s p_{2s}(A_{omega_{1/2}}) h`.
pub fn apply_a<S: Scalar>(
    levy: &LevyMeasure<S>,
    h: &GridFunction<S>,
    grid: &Grid<S>,
) -> Result<GridFunction<S>> {
    let spins = spin_masses(levy)?;
    check_size(grid, h.values.len())?;
    let max_degree = spins.iter().map(|(m, _)| *m).max().unwrap_or(0);
    let mut powers = vec![h.clone()];
    for _ in 0..max_degree {
        let next = apply_a_half(powers.last().expect("non-empty"), grid)?;
        powers.push(next);
    }
    let mut out = GridFunction {
        values: vec![S::zero(); grid.len()],
        at_zero: S::zero(),
    };
    for (two_s, mass) in spins {
        let p = chebyshev_p(two_s, grid.q());
        for (c, power) in p.coeffs.iter().zip(&powers) {
            out.axpy(&(mass.clone() * c), power);
        }
    }
    Ok(out)
}

fn spin_masses<S: Scalar>(levy: &LevyMeasure<S>) -> Result<Vec<(usize, S)>> {
    if levy.rank() != 2 {
        return Err(Error::RankMismatch {
            expected: 2,
            found: levy.rank(),
        });
    }
    Ok(levy
        .iter()
        .map(|(w, m)| (w.twice_spin().expect("rank 2") as usize, m.clone()))
        .collect())
}

/// The positive eigenvector with its verification data.
#[derive(Debug, Clone, Serialize)]
pub struct EigenCertificate<S> {
    pub q: S,
    pub depth: usize,
    pub f: GridFunction<S>,
    /// `2 / [2]_q`.
    pub lambda: S,
    /// `max |(A f)(t_k) - lambda f(t_k)|` over interior points `k < K`.
    pub residual: S,
    /// Per-point residuals (the last point sits on the truncation boundary).
    pub point_residuals: Vec<S>,
    pub min_f: S,
    /// `a_k >= q^k` for every computed `k`.
    pub dominates_geometric: bool,
    pub policy: &'static str,
}

impl<S: Scalar> EigenCertificate<S> {
    pub fn a(&self, k: usize) -> &S {
        &self.f.values[k]
    }
}

/// The sequence `a_0..=a_K` from the forward recurrence.
pub fn eigen_values<S: Scalar>(q: &QParam<S>, depth: usize) -> Vec<S> {
    let qv = q.value().clone();
    let q2 = q.pow(2);
    let two = S::from_i64(2);
    let mut a = Vec::with_capacity(depth + 1);
    a.push(S::one());
    let mut prev = S::zero();
    // q^{2k} and q^{2k+1}
    let mut even = S::one();
    let mut odd = qv.clone();
    for k in 0..depth {
        let cur = a[k].clone();
        let next_even = even.clone() * &q2;
        let rhs = two.clone() * (S::one() - &odd) * &cur - qv.clone() * (S::one() - &even) * &prev;
        let next = qv.clone() * rhs / (S::one() - &next_even);
        prev = cur;
        a.push(next);
        even = next_even;
        odd = odd * &q2;
    }
    a
}

/// Computes `a_k`, applies the operator, and records the eigen-residual.
pub fn eigen_sequence<S: Scalar>(q: &QParam<S>, depth: usize) -> Result<EigenCertificate<S>> {
    let grid = Grid::new(q, depth)?;
    let f = GridFunction {
        values: eigen_values(q, depth),
        at_zero: S::zero(),
    };
    let lambda = S::from_i64(2) / q_int_raw(2, q);
    let af = apply_a_half(&f, &grid)?;
    let point_residuals: Vec<S> = af
        .values
        .iter()
        .zip(&f.values)
        .map(|(a, v)| (a.clone() - lambda.clone() * v).abs())
        .collect();
    let residual = point_residuals[..depth]
        .iter()
        .fold(S::zero(), |m, r| if *r > m { r.clone() } else { m });
    let min_f = f
        .values
        .iter()
        .fold(f.values[0].clone(), |m, v| if *v < m { v.clone() } else { m });
    let mut qk = S::one();
    let mut dominates_geometric = true;
    for v in &f.values {
        dominates_geometric &= *v >= qk;
        qk = qk * q.value();
    }
    Ok(EigenCertificate {
        q: q.value().clone(),
        depth,
        f,
        lambda,
        residual,
        point_residuals,
        min_f,
        dominates_geometric,
        policy: BOUNDARY_POLICY,
    })
}

/// Verifies
/// `q^-1 (1 - q^{2k+2})(a_{k+1} - q a_k) = (1 - q^{2k})(a_k - q a_{k-1}) + q^{2k} (1 - q)^2 a_k`
/// for `k < K`, and `a_{k+1} - q a_k >= 0` throughout.
pub fn positivity_rewrite_check<S: Scalar>(cert: &EigenCertificate<S>) -> bool {
    let q = cert.q.clone();
    let qinv = q.recip();
    let q2 = q.clone() * &q;
    let one_minus_q_sq = (S::one() - &q) * (S::one() - &q);
    let a = &cert.f.values;
    let mut even = S::one();
    for k in 0..cert.depth {
        let prev = if k == 0 { S::zero() } else { a[k - 1].clone() };
        let step = a[k + 1].clone() - q.clone() * &a[k];
        let lhs = qinv.clone() * (S::one() - even.clone() * &q2) * &step;
        let rhs = (S::one() - &even) * (a[k].clone() - q.clone() * &prev)
            + even.clone() * &one_minus_q_sq * &a[k];
        if !lhs.approx_eq(&rhs, crate::DEFAULT_TOLERANCE) || step < S::zero() {
            return false;
        }
        even = even * &q2;
    }
    true
}

/// `g(z) = prod_{j < terms} ((1 - q^{2j+2} z) / (1 - q^{2j+1} z))^2`.
pub fn gen_fun<S: Scalar>(z: &S, q: &QParam<S>, terms: usize) -> Result<Truncated<S>> {
    let zf = z.to_f64();
    let qf = q.value().to_f64();
    for j in 0..=terms {
        let gap = (1.0 - qf.powi(2 * j as i32 + 1) * zf).abs();
        if gap < POLE_MARGIN {
            return Err(Error::domain(format!(
                "z = {z} lies within {POLE_MARGIN} of the pole q^-{}",
                2 * j + 1
            )));
        }
    }
    let q2 = q.pow(2);
    let mut odd = q.value().clone();
    let mut value = S::one();
    for _ in 0..terms {
        let even = odd.clone() * q.value();
        let ratio = (S::one() - even * z) / (S::one() - odd.clone() * z);
        value = value * ratio.clone() * ratio;
        odd = odd * &q2;
    }
    Ok(Truncated { value, terms })
}

/// The first `degree + 1` Taylor coefficients of the truncated product `g`.
pub fn gen_fun_coeffs<S: Scalar>(q: &QParam<S>, terms: usize, degree: usize) -> Vec<S> {
    let mut series = vec![S::zero(); degree + 1];
    series[0] = S::one();
    let q2 = q.pow(2);
    let mut odd = q.value().clone();
    for _ in 0..terms {
        let even = odd.clone() * q.value();
        for _ in 0..2 {
            // multiply by (1 - even z)
            for m in (1..=degree).rev() {
                let shifted = even.clone() * &series[m - 1];
                series[m] -= shifted;
            }
            // divide by (1 - odd z)
            for m in 1..=degree {
                let carried = odd.clone() * &series[m - 1];
                series[m] += carried;
            }
        }
        odd = odd * &q2;
    }
    series
}

/// Dense polynomial, coefficients from the constant term up.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Polynomial<S> {
    pub coeffs: Vec<S>,
}

impl<S: Scalar> Polynomial<S> {
    pub fn degree(&self) -> usize {
        self.coeffs
            .iter()
            .rposition(|c| !c.is_zero())
            .unwrap_or(0)
    }

    pub fn eval(&self, x: &S) -> S {
        self.coeffs
            .iter()
            .rev()
            .fold(S::zero(), |acc, c| acc * x + c)
    }
}

/// `p_{2s}` with `p_{2s}(omega_{1/2}) = omega_s`, from
/// `p_{m+1} = ([m+1]_q [2]_q x p_m - [m]_q p_{m-1}) / [m+2]_q`, `p_0 = 1`, `p_1 = x`.
pub fn chebyshev_p<S: Scalar>(two_s: usize, q: &QParam<S>) -> Polynomial<S> {
    let q2 = q_int_raw(2, q);
    let mut prev: Vec<S> = Vec::new();
    let mut cur = vec![S::one()];
    for m in 0..two_s {
        let mi = m as i64;
        let lead = q_int_raw(mi + 1, q) * &q2;
        let back = q_int_raw(mi, q);
        let norm = q_int_raw(mi + 2, q);
        let mut next = vec![S::zero(); m + 2];
        for (i, c) in cur.iter().enumerate() {
            next[i + 1] += lead.clone() * c;
        }
        for (i, c) in prev.iter().enumerate() {
            next[i] -= back.clone() * c;
        }
        for c in next.iter_mut() {
            *c = c.clone() / &norm;
        }
        prev = cur;
        cur = next;
    }
    Polynomial { coeffs: cur }
}

/// `sum_s lambda_s (2s + 1) / [2s + 1]_q` for a measure on `SU(2)` spins.
pub fn levy_eigenvalue<S: Scalar>(levy: &LevyMeasure<S>, q: &QParam<S>) -> Result<S> {
    Ok(spin_masses(levy)?
        .into_iter()
        .fold(S::zero(), |acc, (two_s, mass)| {
            let d = two_s as i64 + 1;
            acc + mass * S::from_i64(d) / q_int_raw(d, q)
        }))
}

/// `f(t_from) / f(t_to) * lambda^n`, an upper bound on the `n`-step probability of
/// moving from `t_from` to `t_to`.
pub fn transience_bound<S: Scalar>(
    cert: &EigenCertificate<S>,
    from: usize,
    to: usize,
    steps: u32,
) -> Result<S> {
    if from > cert.depth || to > cert.depth {
        return Err(Error::domain(format!(
            "indices ({from}, {to}) beyond certificate depth {}",
            cert.depth
        )));
    }
    Ok(cert.a(from).clone() / cert.a(to) * cert.lambda.powi(steps as i64))
}

/// One step of the dual action `nu -> nu A`.
fn push_once<S: Scalar>(nu: &GridMeasure<S>, grid: &Grid<S>) -> GridMeasure<S> {
    let depth = grid.depth();
    let mut masses = vec![S::zero(); grid.len()];
    let mut at_zero = nu.at_zero.clone();
    for (k, m) in nu.masses.iter().enumerate() {
        if m.is_zero() {
            continue;
        }
        let [up, stay, down] = grid.moves(k);
        if k < depth {
            masses[k + 1] += m.clone() * up;
        } else {
            at_zero += m.clone() * up;
        }
        masses[k] += m.clone() * stay;
        if k > 0 {
            masses[k - 1] += m.clone() * down;
        }
    }
    GridMeasure { masses, at_zero }
}

/// `nu A^n`.
pub fn push_measure<S: Scalar>(nu: &GridMeasure<S>, grid: &Grid<S>, steps: usize) -> Result<GridMeasure<S>> {
    Ok(measure_path(nu, grid, steps)?.pop().expect("non-empty"))
}

/// `nu, nu A, ..., nu A^n`.
pub fn measure_path<S: Scalar>(
    nu: &GridMeasure<S>,
    grid: &Grid<S>,
    steps: usize,
) -> Result<Vec<GridMeasure<S>>> {
    check_size(grid, nu.masses.len())?;
    if nu.masses.iter().any(|m| *m < S::zero()) || nu.at_zero < S::zero() {
        return Err(Error::domain("measure has negative mass"));
    }
    if !nu.total().approx_eq(&S::one(), crate::DEFAULT_TOLERANCE) {
        return Err(Error::domain(format!("measure has total mass {}", nu.total())));
    }
    let mut out = Vec::with_capacity(steps + 1);
    out.push(nu.clone());
    for _ in 0..steps {
        let next = push_once(out.last().expect("non-empty"), grid);
        out.push(next);
    }
    Ok(out)
}
