//! Tensor-chain representations of the Hecke algebra `H_inf(q)` on `(C^n)^{(x) m}`.
//!
//! With matrix units `m_ij`, the two-site generators are
//!
//! ```text
//! pi(g_1)    = q sum_i m_ii (x) m_ii + (q - q^-1) sum_{i<j} m_ii (x) m_jj +   sum_{i!=j} m_ij (x) m_ji
//! pi_+-(g_1) = q sum_i m_ii (x) m_ii + (q - q^-1) sum_{i>j} m_ii (x) m_jj +/- sum_{i!=j} m_ij (x) m_ji
//! ```
//!
//! and `g_k` acts on sites `(k, k+1)`. Contracting the last site against the invariant
//! density `diag(q^{2(n-1)}, ..., 1) (1 - q^2) / (1 - q^{2n})` sends `pi_+-(g_1)` to the
//! scalar `c q^{2n-1}` while `pi(g_1)` keeps distinct diagonal entries.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::scalar::{QParam, Scalar};
use crate::{Error, Result};

pub const MAX_SITE_DIM: usize = 4;
pub const MAX_SITES: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    Pi,
    PiPlus,
    PiMinus,
}

impl Variant {
    pub const ALL: [Variant; 3] = [Variant::Pi, Variant::PiPlus, Variant::PiMinus];
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Pi => "pi",
            Variant::PiPlus => "pi_plus",
            Variant::PiMinus => "pi_minus",
        })
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pi" => Ok(Variant::Pi),
            "pi_plus" | "pi+" => Ok(Variant::PiPlus),
            "pi_minus" | "pi-" => Ok(Variant::PiMinus),
            _ => Err(Error::Parse {
                what: "Hecke variant",
                input: s.to_string(),
            }),
        }
    }
}

/// A dense operator on `m` sites of dimension `n`, row-major over the lexicographic
/// basis `e_{i_1} (x) ... (x) e_{i_m}` (first site most significant).
#[derive(Debug, Clone, PartialEq)]
pub struct ChainOperator<S> {
    site_dim: usize,
    sites: usize,
    data: Vec<S>,
    variant: Option<Variant>,
}

impl<S: Scalar> ChainOperator<S> {
    pub fn zeros(site_dim: usize, sites: usize) -> Self {
        let dim = site_dim.pow(sites as u32);
        Self {
            site_dim,
            sites,
            data: vec![S::zero(); dim * dim],
            variant: None,
        }
    }

    pub fn identity(site_dim: usize, sites: usize) -> Self {
        let mut out = Self::zeros(site_dim, sites);
        let d = out.dim();
        for i in 0..d {
            out.data[i * d + i] = S::one();
        }
        out
    }

    /// The tensor flip `sum_{i,j} m_ij (x) m_ji` on two sites.
    pub fn flip(site_dim: usize) -> Self {
        let mut out = Self::zeros(site_dim, 2);
        for i in 0..site_dim {
            for j in 0..site_dim {
                out.set(i * site_dim + j, j * site_dim + i, S::one());
            }
        }
        out
    }

    pub fn site_dim(&self) -> usize {
        self.site_dim
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn variant(&self) -> Option<Variant> {
        self.variant
    }

    /// Matrix size `n^m`.
    pub fn dim(&self) -> usize {
        self.site_dim.pow(self.sites as u32)
    }

    pub fn get(&self, row: usize, col: usize) -> &S {
        &self.data[row * self.dim() + col]
    }

    fn set(&mut self, row: usize, col: usize, v: S) {
        let d = self.dim();
        self.data[row * d + col] = v;
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        if self.site_dim != other.site_dim || self.sites != other.sites {
            return Err(Error::domain(format!(
                "operator shapes differ: {}^{} vs {}^{}",
                self.site_dim, self.sites, other.site_dim, other.sites
            )));
        }
        Ok(())
    }

    fn sparse_rows(&self) -> Vec<Vec<(usize, &S)>> {
        let d = self.dim();
        (0..d)
            .map(|i| {
                (0..d)
                    .filter_map(|j| {
                        let v = self.get(i, j);
                        (!v.is_zero()).then_some((j, v))
                    })
                    .collect()
            })
            .collect()
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        let d = self.dim();
        let left = self.sparse_rows();
        let right = other.sparse_rows();
        let mut out = Self::zeros(self.site_dim, self.sites);
        for (i, row) in left.iter().enumerate() {
            for (k, a) in row {
                for (j, b) in &right[*k] {
                    out.data[i * d + j] += (*a).clone() * *b;
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        let mut out = self.clone();
        out.variant = None;
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a += b;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-S::one()))
    }

    pub fn scale(&self, c: &S) -> Self {
        Self {
            site_dim: self.site_dim,
            sites: self.sites,
            data: self.data.iter().map(|v| v.clone() * c).collect(),
            variant: None,
        }
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> S {
        self.data.iter().fold(S::zero(), |m, v| {
            let a = v.abs();
            if a > m {
                a
            } else {
                m
            }
        })
    }

    pub fn diagonal(&self) -> Vec<S> {
        (0..self.dim()).map(|i| self.get(i, i).clone()).collect()
    }

    /// `Some(c)` when the operator is exactly `c` times the identity.
    pub fn as_scalar(&self) -> Option<S> {
        let c = self.get(0, 0).clone();
        let d = self.dim();
        let scalar = (0..d).all(|i| {
            (0..d).all(|j| {
                let v = self.get(i, j);
                if i == j {
                    *v == c
                } else {
                    v.is_zero()
                }
            })
        });
        scalar.then_some(c)
    }
}

/// The two-site generator for `variant`.
pub fn g1_matrix<S: Scalar>(n: usize, q: &QParam<S>, variant: Variant) -> Result<ChainOperator<S>> {
    if n < 2 {
        return Err(Error::domain(format!("site dimension must be at least 2, got {n}")));
    }
    if n > MAX_SITE_DIM {
        return Err(Error::domain(format!(
            "site dimension {n} exceeds the dense cap {MAX_SITE_DIM}"
        )));
    }
    let qv = q.value().clone();
    let gap = qv.clone() - q.inv();
    let flip_sign = match variant {
        Variant::PiMinus => -S::one(),
        _ => S::one(),
    };
    let mut out = ChainOperator::zeros(n, 2);
    out.variant = Some(variant);
    for i in 0..n {
        out.set(i * n + i, i * n + i, qv.clone());
        for j in 0..n {
            if i == j {
                continue;
            }
            let diag_carrier = match variant {
                Variant::Pi => i < j,
                Variant::PiPlus | Variant::PiMinus => i > j,
            };
            if diag_carrier {
                out.set(i * n + j, i * n + j, gap.clone());
            }
            // m_ij (x) m_ji sends e_j (x) e_i to e_i (x) e_j.
            out.set(i * n + j, j * n + i, flip_sign.clone());
        }
    }
    Ok(out)
}

/// Places a two-site operator on sites `(k, k+1)` (1-based) of an `m`-site chain.
pub fn embed_gk<S: Scalar>(g1: &ChainOperator<S>, k: usize, m: usize) -> Result<ChainOperator<S>> {
    if g1.sites != 2 {
        return Err(Error::domain("only two-site operators can be embedded"));
    }
    if k < 1 || k + 1 > m {
        return Err(Error::domain(format!("site {k} out of range for a {m}-site chain")));
    }
    if m > MAX_SITES {
        return Err(Error::domain(format!("{m} sites exceed the dense cap {MAX_SITES}")));
    }
    let n = g1.site_dim;
    let left = n.pow((k - 1) as u32);
    let right = n.pow((m - k - 1) as u32);
    let block = n * n;
    let mut out = ChainOperator::zeros(n, m);
    out.variant = g1.variant;
    for a in 0..block {
        for b in 0..block {
            let v = g1.get(a, b);
            if v.is_zero() {
                continue;
            }
            for l in 0..left {
                for r in 0..right {
                    let row = (l * block + a) * right + r;
                    let col = (l * block + b) * right + r;
                    out.set(row, col, v.clone());
                }
            }
        }
    }
    Ok(out)
}

/// The invariant state on `B(C^n)`: `w_i = c q^{2(n-i)}`, `c = (1 - q^2) / (1 - q^{2n})`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvariantDensity<S> {
    pub weights: Vec<S>,
}

impl<S: Scalar> InvariantDensity<S> {
    pub fn site_dim(&self) -> usize {
        self.weights.len()
    }

    pub fn normalisation(q: &QParam<S>, n: usize) -> S {
        (S::one() - q.pow(2)) / (S::one() - q.pow(2 * n as i64))
    }
}

pub fn invariant_density<S: Scalar>(n: usize, q: &QParam<S>) -> Result<InvariantDensity<S>> {
    if n < 2 {
        return Err(Error::domain(format!("site dimension must be at least 2, got {n}")));
    }
    let c = InvariantDensity::normalisation(q, n);
    let weights = (1..=n)
        .map(|i| c.clone() * q.pow(2 * (n - i) as i64))
        .collect();
    Ok(InvariantDensity { weights })
}

/// The density-preserving conditional expectation onto the first `m - 1` sites:
/// `E(x)_{I,J} = sum_k w_k x_{(I,k),(J,k)}`.
pub fn cond_expect_last<S: Scalar>(
    x: &ChainOperator<S>,
    density: &InvariantDensity<S>,
) -> Result<ChainOperator<S>> {
    if density.site_dim() != x.site_dim {
        return Err(Error::SizeMismatch {
            expected: x.site_dim,
            found: density.site_dim(),
        });
    }
    if x.sites == 0 {
        return Err(Error::domain("no site to contract"));
    }
    let n = x.site_dim;
    let mut out = ChainOperator::zeros(n, x.sites - 1);
    let d = out.dim();
    for i in 0..d {
        for j in 0..d {
            let v = density
                .weights
                .iter()
                .enumerate()
                .fold(S::zero(), |acc, (k, w)| {
                    acc + w.clone() * x.get(i * n + k, j * n + k)
                });
            out.set(i, j, v);
        }
    }
    Ok(out)
}

/// What the conditional expectation does to the generator.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Expectation<S> {
    Scalar(S),
    Diagonal(Vec<S>),
    /// Neither scalar nor diagonal; the diagonal is still reported.
    General(Vec<S>),
}

impl<S: Scalar> Expectation<S> {
    pub fn of(op: &ChainOperator<S>) -> Self {
        if let Some(c) = op.as_scalar() {
            return Expectation::Scalar(c);
        }
        let d = op.dim();
        let diagonal = (0..d).all(|i| (0..d).all(|j| i == j || op.get(i, j).is_zero()));
        if diagonal {
            Expectation::Diagonal(op.diagonal())
        } else {
            Expectation::General(op.diagonal())
        }
    }

    pub fn is_scalar(&self) -> bool {
        matches!(self, Expectation::Scalar(_))
    }
}

/// Relation residuals (max absolute entry of the defect) and the expectation of the
/// generator sitting on the last two sites.
#[derive(Debug, Clone, Serialize)]
pub struct HeckeReport<S> {
    pub variant: Variant,
    pub n: usize,
    pub m: usize,
    pub q: String,
    /// `g_i^2 - (q - q^-1) g_i - 1`
    pub quadratic: S,
    /// `g_i g_{i+1} g_i - g_{i+1} g_i g_{i+1}`; absent when `m < 3`.
    pub braid: Option<S>,
    /// `g_i g_j - g_j g_i`, `|i - j| >= 2`; absent when `m < 4`.
    pub commutation: Option<S>,
    pub expectation: Expectation<S>,
}

impl<S: Scalar> HeckeReport<S> {
    /// Every computed residual equals zero (within `tol` in float mode).
    pub fn relations_hold(&self, tol: f64) -> bool {
        let ok = |r: &S| r.approx_eq(&S::zero(), tol);
        ok(&self.quadratic)
            && self.braid.as_ref().is_none_or(ok)
            && self.commutation.as_ref().is_none_or(ok)
    }
}

fn keep_max<S: Scalar>(slot: &mut Option<S>, v: S) {
    match slot {
        Some(cur) if *cur >= v => {}
        _ => *slot = Some(v),
    }
}

pub fn check_hecke<S: Scalar>(
    n: usize,
    m: usize,
    q: &QParam<S>,
    variant: Variant,
) -> Result<HeckeReport<S>> {
    if m < 2 {
        return Err(Error::domain(format!("need at least two sites, got {m}")));
    }
    let g1 = g1_matrix(n, q, variant)?;
    let gens: Vec<ChainOperator<S>> = (1..m)
        .map(|k| embed_gk(&g1, k, m))
        .collect::<Result<_>>()?;
    let gap = q.value().clone() - q.inv();
    let id = ChainOperator::identity(n, m);

    let mut quadratic = S::zero();
    for g in &gens {
        let defect = g.matmul(g)?.sub(&g.scale(&gap))?.sub(&id)?;
        let r = defect.max_abs();
        if r > quadratic {
            quadratic = r;
        }
    }
    let mut braid = None;
    for pair in gens.windows(2) {
        let (a, b) = (&pair[0], &pair[1]);
        let lhs = a.matmul(b)?.matmul(a)?;
        let rhs = b.matmul(a)?.matmul(b)?;
        keep_max(&mut braid, lhs.sub(&rhs)?.max_abs());
    }
    let mut commutation = None;
    for i in 0..gens.len() {
        for j in (i + 2)..gens.len() {
            let ab = gens[i].matmul(&gens[j])?;
            let ba = gens[j].matmul(&gens[i])?;
            keep_max(&mut commutation, ab.sub(&ba)?.max_abs());
        }
    }
    let density = invariant_density(n, q)?;
    let last = gens.last().expect("m >= 2");
    let expectation = Expectation::of(&cond_expect_last(last, &density)?);
    Ok(HeckeReport {
        variant,
        n,
        m,
        q: q.to_string(),
        quadratic,
        braid,
        commutation,
        expectation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn r(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    fn half() -> QParam<Rational> {
        QParam::exact(1, 2).unwrap()
    }

    #[test]
    fn hand_written_n2_pi() {
        // basis 11, 12, 21, 22
        let q = r(1, 2);
        let gap = r(-3, 2);
        let z = Rational::zero();
        let o = Rational::one();
        let expected = [
            [q.clone(), z.clone(), z.clone(), z.clone()],
            [z.clone(), gap.clone(), o.clone(), z.clone()],
            [z.clone(), o.clone(), z.clone(), z.clone()],
            [z.clone(), z.clone(), z.clone(), q.clone()],
        ];
        let g = g1_matrix(2, &half(), Variant::Pi).unwrap();
        for (i, row) in expected.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                assert_eq!(g.get(i, j), v, "({i}, {j})");
            }
        }
        let plus = g1_matrix(2, &half(), Variant::PiPlus).unwrap();
        assert_eq!(plus.get(1, 1), &z);
        assert_eq!(plus.get(2, 2), &gap);
        assert_eq!(plus.get(1, 2), &o);
        let minus = g1_matrix(2, &half(), Variant::PiMinus).unwrap();
        assert_eq!(minus.get(1, 2), &-o.clone());
        assert_eq!(minus.get(2, 1), &-o);
    }

    #[test]
    fn classical_limit_is_flip() {
        let q = QParam::float(1.0 - 1e-6).unwrap();
        for variant in [Variant::Pi, Variant::PiPlus] {
            let g = g1_matrix(3, &q, variant).unwrap();
            let diff = g.sub(&ChainOperator::flip(3)).unwrap();
            assert!(diff.max_abs() < 1e-5);
        }
    }

    #[test]
    fn embedding() {
        let g = g1_matrix(2, &half(), Variant::Pi).unwrap();
        assert_eq!(embed_gk(&g, 1, 2).unwrap(), g);
        assert!(embed_gk(&g, 0, 3).is_err());
        assert!(embed_gk(&g, 3, 3).is_err());
        // Contracting the untouched third site returns g itself.
        let e = embed_gk(&g, 1, 3).unwrap();
        let density = invariant_density(2, &half()).unwrap();
        assert_eq!(cond_expect_last(&e, &density).unwrap(), {
            let mut g = g.clone();
            g.variant = None;
            g
        });
        let g1 = embed_gk(&g, 1, 4).unwrap();
        let g3 = embed_gk(&g, 3, 4).unwrap();
        assert_eq!(g1.matmul(&g3).unwrap(), g3.matmul(&g1).unwrap());
    }

    #[test]
    fn relations_exact() {
        for variant in Variant::ALL {
            let report = check_hecke(2, 3, &half(), variant).unwrap();
            assert!(report.relations_hold(0.0), "{variant}");
            assert!(report.commutation.is_none());
            let report = check_hecke(3, 3, &QParam::exact(1, 3).unwrap(), variant).unwrap();
            assert!(report.relations_hold(0.0), "{variant}");
        }
    }

    #[test]
    fn flip_is_a_symmetric_group_rep() {
        let flip = ChainOperator::<Rational>::flip(2);
        let a = embed_gk(&flip, 1, 3).unwrap();
        let b = embed_gk(&flip, 2, 3).unwrap();
        assert_eq!(a.matmul(&a).unwrap(), ChainOperator::identity(2, 3));
        assert_eq!(
            a.matmul(&b).unwrap().matmul(&a).unwrap(),
            b.matmul(&a).unwrap().matmul(&b).unwrap()
        );
    }

    #[test]
    fn density_examples() {
        let w = invariant_density(2, &half()).unwrap();
        assert_eq!(w.weights, vec![r(1, 5), r(4, 5)]);
        for n in 2..6 {
            let w = invariant_density(n, &QParam::exact(2, 3).unwrap()).unwrap();
            let total = w.weights.iter().fold(Rational::zero(), |a, b| a + b);
            assert_eq!(total, Rational::one());
            assert!(w.weights.windows(2).all(|p| p[0] < p[1]));
        }
        let near_one = invariant_density(4, &QParam::float(1.0 - 1e-9).unwrap()).unwrap();
        assert!(near_one.weights.iter().all(|w| (w - 0.25).abs() < 1e-7));
        assert!(invariant_density(1, &half()).is_err());
    }

    #[test]
    fn expectation_dichotomy_n2() {
        let q = half();
        let density = invariant_density(2, &q).unwrap();
        let id = ChainOperator::identity(2, 2);
        assert_eq!(
            cond_expect_last(&id, &density).unwrap(),
            ChainOperator::identity(2, 1)
        );
        for variant in [Variant::PiPlus, Variant::PiMinus] {
            let e = cond_expect_last(&g1_matrix(2, &q, variant).unwrap(), &density).unwrap();
            assert_eq!(e.as_scalar(), Some(r(1, 10)));
        }
        let e = cond_expect_last(&g1_matrix(2, &q, Variant::Pi).unwrap(), &density).unwrap();
        assert_eq!(Expectation::of(&e), Expectation::Diagonal(vec![r(-11, 10), r(2, 5)]));
    }

    #[test]
    fn expectation_scalar_closed_form() {
        for n in 2..=4 {
            for (a, b) in [(1, 3), (1, 2), (2, 3)] {
                let q = QParam::<Rational>::exact(a, b).unwrap();
                let density = invariant_density(n, &q).unwrap();
                let expected =
                    InvariantDensity::normalisation(&q, n) * q.pow(2 * n as i64 - 1);
                let plus = cond_expect_last(&g1_matrix(n, &q, Variant::PiPlus).unwrap(), &density)
                    .unwrap();
                let minus =
                    cond_expect_last(&g1_matrix(n, &q, Variant::PiMinus).unwrap(), &density)
                        .unwrap();
                assert_eq!(plus.as_scalar(), Some(expected.clone()), "n={n} q={a}/{b}");
                assert_eq!(minus.as_scalar(), Some(expected));
                let pi = cond_expect_last(&g1_matrix(n, &q, Variant::Pi).unwrap(), &density)
                    .unwrap();
                let mut diag = pi.diagonal();
                diag.dedup();
                assert!(diag.len() >= 2);
            }
        }
    }

    #[test]
    fn flip_under_uniform_density() {
        for n in 2..=4 {
            let uniform = InvariantDensity {
                weights: vec![Rational::from_ratio(1, n as i64); n],
            };
            let e = cond_expect_last(&ChainOperator::flip(n), &uniform).unwrap();
            assert_eq!(e.as_scalar(), Some(Rational::from_ratio(1, n as i64)));
        }
    }

    #[test]
    fn relation_grid() {
        for (n, m) in [(2, 3), (2, 4), (3, 3)] {
            for (a, b) in [(1, 3), (1, 2), (2, 3)] {
                let q = QParam::<Rational>::exact(a, b).unwrap();
                for variant in Variant::ALL {
                    let report = check_hecke(n, m, &q, variant).unwrap();
                    assert!(report.relations_hold(0.0), "{variant} n={n} m={m} q={a}/{b}");
                    assert_eq!(report.commutation.is_some(), m >= 4);
                }
            }
        }
    }

    #[test]
    fn classical_limit_relations() {
        let q = QParam::float(1.0 - 1e-9).unwrap();
        for variant in Variant::ALL {
            let report = check_hecke(3, 3, &q, variant).unwrap();
            assert!(report.relations_hold(1e-6));
        }
    }

    #[test]
    fn variant_parsing() {
        assert_eq!("pi_plus".parse::<Variant>().unwrap(), Variant::PiPlus);
        assert_eq!("pi-".parse::<Variant>().unwrap(), Variant::PiMinus);
        assert!("sigma".parse::<Variant>().is_err());
    }

    #[test]
    fn caps() {
        assert!(g1_matrix(5, &half(), Variant::Pi).is_err());
        assert!(g1_matrix(1, &half(), Variant::Pi).is_err());
        let g = g1_matrix(2, &half(), Variant::Pi).unwrap();
        assert!(embed_gk(&g, 1, 6).is_err());
    }
}
