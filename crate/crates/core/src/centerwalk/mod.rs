//! The random walk on the centre `l^inf(I)` of the discrete dual of `SU_q(n)`.
//!
//! A finitely supported measure on irreducibles induces the transition probabilities
//! `p(s, t) = sum_nu lambda_nu N^t_{nu, s} d_t / (d_nu d_s)`. Stochasticity of every row
//! is the quantum-dimension sum rule, and `h(s) = dim(s) / d_s` is an exact eigenfunction
//! with eigenvalue `sum_nu lambda_nu dim(nu) / d_nu`, which is `< 1` for every non-trivial
//! measure: the positive-eigenvector certificate of transience.

mod kernel;
mod sampling;

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::qarith::qdim_sun;
use crate::scalar::{QParam, Scalar, DEFAULT_TOLERANCE};
use crate::weights::{lr_coeffs, DominantWeight, FusionRing};
use crate::{Error, Result};

pub use kernel::{build_kernel, distribution_after, BoundaryPolicy, Distribution, TransitionKernel};
pub use sampling::{
    escape_fraction, martingale_trace, sample_paths, step_counts, MartingaleTrace, PathSample,
    RNG_ALGORITHM,
};

/// A normalised, finitely supported measure on the irreducibles of one rank.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevyMeasure<S> {
    rank: usize,
    entries: BTreeMap<DominantWeight, S>,
}

impl<S: Scalar> LevyMeasure<S> {
    /// Masses must be non-negative and sum to one (exactly in exact mode, within
    /// [`DEFAULT_TOLERANCE`] in float mode). Repeated weights are merged.
    pub fn new(entries: impl IntoIterator<Item = (DominantWeight, S)>) -> Result<Self> {
        Self::with_tolerance(entries, DEFAULT_TOLERANCE)
    }

    pub fn with_tolerance(
        entries: impl IntoIterator<Item = (DominantWeight, S)>,
        tol: f64,
    ) -> Result<Self> {
        let mut map: BTreeMap<DominantWeight, S> = BTreeMap::new();
        let mut rank = None;
        for (w, mass) in entries {
            match rank {
                None => rank = Some(w.rank()),
                Some(r) if r != w.rank() => {
                    return Err(Error::RankMismatch {
                        expected: r,
                        found: w.rank(),
                    })
                }
                Some(_) => {}
            }
            if mass < S::zero() {
                return Err(Error::domain(format!("negative mass {mass} at {w}")));
            }
            *map.entry(w).or_insert_with(S::zero) += mass;
        }
        let rank = rank.ok_or_else(|| Error::domain("empty Levy measure"))?;
        map.retain(|_, m| !m.is_zero());
        let total = map.values().fold(S::zero(), |acc, m| acc + m);
        if !total.approx_eq(&S::one(), tol) {
            return Err(Error::domain(format!("Levy masses sum to {total}, not 1")));
        }
        Ok(Self { rank, entries: map })
    }

    /// Parses `"w:mass;w:mass"` with weights in the comma-joined encoding, e.g.
    /// `"1,0:1/2;2,1:1/2"`. A single entry without a mass is a point mass.
    pub fn parse(spec: &str, n: usize) -> Result<Self> {
        let entries: Vec<&str> = spec.split(';').map(str::trim).filter(|e| !e.is_empty()).collect();
        if let [only] = entries.as_slice() {
            if !only.contains(':') {
                return Ok(Self::point(DominantWeight::parse(only, n)?));
            }
        }
        let parsed = entries
            .iter()
            .map(|entry| {
                let (w, mass) = entry.rsplit_once(':').ok_or_else(|| Error::Parse {
                    what: "Levy entry",
                    input: entry.to_string(),
                })?;
                Ok((DominantWeight::parse(w, n)?, S::parse_scalar(mass.trim())?))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(parsed)
    }

    pub fn point(w: DominantWeight) -> Self {
        Self {
            rank: w.rank(),
            entries: BTreeMap::from([(w, S::one())]),
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn iter(&self) -> impl Iterator<Item = (&DominantWeight, &S)> {
        self.entries.iter()
    }

    pub fn mass(&self, w: &DominantWeight) -> S {
        self.entries.get(w).cloned().unwrap_or_else(S::zero)
    }

    /// Whether some mass sits off the trivial representation.
    pub fn is_nontrivial(&self) -> bool {
        self.entries.keys().any(|w| !w.is_trivial())
    }

    /// Largest `|nu|` in the support: one step never grows `|s|` by more than this.
    pub fn max_size(&self) -> u32 {
        self.entries.keys().map(|w| w.size()).max().unwrap_or(0)
    }
}

/// Quantum dimensions memoised for the duration of one computation.
pub(crate) struct QDims<'a, S> {
    q: &'a QParam<S>,
    cache: HashMap<DominantWeight, S>,
}

impl<'a, S: Scalar> QDims<'a, S> {
    pub(crate) fn new(q: &'a QParam<S>) -> Self {
        Self {
            q,
            cache: HashMap::new(),
        }
    }

    pub(crate) fn get(&mut self, w: &DominantWeight) -> S {
        if let Some(d) = self.cache.get(w) {
            return d.clone();
        }
        let d = qdim_sun(w, self.q);
        self.cache.insert(w.clone(), d.clone());
        d
    }
}

/// The row `t -> p(s, t)` of the transition kernel.
pub fn transition_row<S: Scalar>(
    s: &DominantWeight,
    levy: &LevyMeasure<S>,
    q: &QParam<S>,
) -> Result<BTreeMap<DominantWeight, S>> {
    let mut dims = QDims::new(q);
    row_with(s, levy, &mut dims, |a, b| lr_coeffs(a, b).map(std::sync::Arc::new))
}

pub(crate) fn transition_row_cached<S: Scalar>(
    s: &DominantWeight,
    levy: &LevyMeasure<S>,
    dims: &mut QDims<'_, S>,
    ring: &FusionRing,
) -> Result<BTreeMap<DominantWeight, S>> {
    row_with(s, levy, dims, |a, b| ring.product(a, b))
}

fn row_with<S: Scalar>(
    s: &DominantWeight,
    levy: &LevyMeasure<S>,
    dims: &mut QDims<'_, S>,
    product: impl Fn(
        &DominantWeight,
        &DominantWeight,
    ) -> Result<std::sync::Arc<crate::weights::FusionResult>>,
) -> Result<BTreeMap<DominantWeight, S>> {
    if s.rank() != levy.rank() {
        return Err(Error::RankMismatch {
            expected: levy.rank(),
            found: s.rank(),
        });
    }
    let d_s = dims.get(s);
    let mut row: BTreeMap<DominantWeight, S> = BTreeMap::new();
    for (nu, mass) in levy.iter() {
        let scale = mass.clone() / (dims.get(nu) * &d_s);
        for (t, mult) in product(nu, s)?.iter() {
            let p = scale.clone() * dims.get(t) * S::from_i64(mult as i64);
            *row.entry(t.clone()).or_insert_with(S::zero) += p;
        }
    }
    Ok(row)
}

/// Result of checking `P h = lambda h` for `h(s) = dim(s) / d_s` on a finite ball.
#[derive(Debug, Clone, Serialize)]
pub struct EigenCheck<S> {
    pub eigenvalue: S,
    /// `max |(P h)(s) - lambda h(s)|` over interior states.
    pub residual: S,
    pub interior_states: usize,
    pub states: usize,
}

/// `sum_nu lambda_nu dim(nu) / d_nu`.
pub fn dim_ratio_eigenvalue<S: Scalar>(levy: &LevyMeasure<S>, q: &QParam<S>) -> S {
    levy.iter().fold(S::zero(), |acc, (nu, mass)| {
        acc + mass.clone() * S::from_i64(nu.dim() as i64) / qdim_sun(nu, q)
    })
}

/// The function `h(s) = dim(s) / d_s`.
pub fn dim_ratio<S: Scalar>(s: &DominantWeight, q: &QParam<S>) -> S {
    S::from_i64(s.dim() as i64) / qdim_sun(s, q)
}

/// Builds the kernel on the ball `|s| <= radius` and checks the eigen-identity on every
/// interior row (rows that route no mass to the cemetery).
pub fn dim_ratio_eigencheck<S: Scalar>(
    levy: &LevyMeasure<S>,
    q: &QParam<S>,
    radius: u32,
) -> Result<EigenCheck<S>> {
    let kernel = build_kernel(radius, levy, q)?;
    Ok(kernel.eigencheck())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn half() -> QParam<Rational> {
        QParam::exact(1, 2).unwrap()
    }

    fn r(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    #[test]
    fn levy_validation() {
        let a = DominantWeight::spin(1);
        let b = DominantWeight::spin(2);
        assert!(LevyMeasure::new(vec![(a.clone(), r(1, 2)), (b.clone(), r(1, 2))]).is_ok());
        assert!(LevyMeasure::new(vec![(a.clone(), r(1, 2))]).is_err());
        assert!(LevyMeasure::new(vec![(a.clone(), r(3, 2)), (b.clone(), r(-1, 2))]).is_err());
        assert!(LevyMeasure::<Rational>::new(vec![]).is_err());
        assert!(LevyMeasure::new(vec![(a, r(1, 2)), (DominantWeight::fundamental(3), r(1, 2))]).is_err());
        let merged =
            LevyMeasure::new(vec![(b.clone(), r(1, 4)), (b.clone(), r(3, 4))]).unwrap();
        assert_eq!(merged.mass(&b), Rational::one());
        assert!(merged.is_nontrivial());
        assert!(!LevyMeasure::<Rational>::point(DominantWeight::trivial(3)).is_nontrivial());
    }

    #[test]
    fn levy_parsing() {
        let levy = LevyMeasure::<Rational>::parse("1,0:1/2; 2,1:1/2", 3).unwrap();
        assert_eq!(levy.mass(&DominantWeight::new(3, &[2, 1]).unwrap()), r(1, 2));
        let point = LevyMeasure::<Rational>::parse("1", 2).unwrap();
        assert_eq!(point, LevyMeasure::point(DominantWeight::spin(1)));
        let float = LevyMeasure::<f64>::parse("1:0.25;2:0.75", 2).unwrap();
        assert_eq!(float.mass(&DominantWeight::spin(2)), 0.75);
        assert!(LevyMeasure::<Rational>::parse("1:1/2", 2).is_err());
        assert!(LevyMeasure::<Rational>::parse("x:1", 2).is_err());
        assert!(LevyMeasure::<Rational>::parse("", 2).is_err());
    }

    #[test]
    fn row_from_trivial_is_the_measure() {
        let nu = DominantWeight::new(3, &[2, 1]).unwrap();
        let levy = LevyMeasure::<Rational>::point(nu.clone());
        let row = transition_row(&DominantWeight::trivial(3), &levy, &half()).unwrap();
        assert_eq!(row.len(), 1);
        assert_eq!(row[&nu], Rational::one());
    }

    #[test]
    fn su2_rows_match_fusion_identity() {
        let q = half();
        let levy = LevyMeasure::point(DominantWeight::spin(1));
        let row = transition_row(&DominantWeight::spin(1), &levy, &q).unwrap();
        assert_eq!(row[&DominantWeight::spin(0)], r(4, 25));
        assert_eq!(row[&DominantWeight::spin(2)], r(21, 25));
        for k in 1..15u32 {
            let s = DominantWeight::spin(k);
            let row = transition_row(&s, &levy, &q).unwrap();
            let d = |j: u32| qdim_sun(&DominantWeight::spin(j), &q);
            let up = d(k + 1) / (d(1) * d(k));
            let down = d(k - 1) / (d(1) * d(k));
            assert_eq!(row[&DominantWeight::spin(k + 1)], up);
            assert_eq!(row[&DominantWeight::spin(k - 1)], down);
            assert_eq!(row.values().fold(Rational::zero(), |a, b| a + b), Rational::one());
        }
    }

    #[test]
    fn eigenvalues() {
        let q = half();
        let su2 = LevyMeasure::point(DominantWeight::spin(1));
        assert_eq!(dim_ratio_eigenvalue(&su2, &q), r(4, 5));
        let su3 = LevyMeasure::point(DominantWeight::fundamental(3));
        assert_eq!(dim_ratio_eigenvalue(&su3, &q), r(4, 7));
        let trivial = LevyMeasure::point(DominantWeight::trivial(4));
        assert_eq!(dim_ratio_eigenvalue(&trivial, &q), Rational::one());
    }

    #[test]
    fn eigencheck_exact_on_interior() {
        let q = half();
        let levy = LevyMeasure::new(vec![
            (DominantWeight::new(3, &[1, 0]).unwrap(), r(1, 3)),
            (DominantWeight::new(3, &[2, 1]).unwrap(), r(2, 3)),
        ])
        .unwrap();
        let check = dim_ratio_eigencheck(&levy, &q, 7).unwrap();
        assert_eq!(check.residual, Rational::zero());
        assert!(check.interior_states > 0 && check.interior_states < check.states);
        assert!(check.eigenvalue < Rational::one());
    }

    #[test]
    fn rank_mismatch_in_row() {
        let levy = LevyMeasure::<Rational>::point(DominantWeight::spin(1));
        assert!(transition_row(&DominantWeight::fundamental(3), &levy, &half()).is_err());
    }
}
