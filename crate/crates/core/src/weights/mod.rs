//! The fusion ring of `SU(n)`.
//!
//! Irreducibles are labelled by reduced partitions: non-increasing lists of
//! length `n - 1` (the last coordinate of the weight is implicitly zero, full
//! columns of height `n` are stripped). `SU(2)` spins are handled through the
//! twice-spin codec [`DominantWeight::spin`] / [`DominantWeight::twice_spin`].

mod kostka;
mod lr;
mod ring;

use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;
use serde::{Serialize, Serializer};

use crate::qarith::qdim_sun;
use crate::scalar::{QParam, Scalar};
use crate::{Error, Result};

pub use kostka::{kostka_number, weight_multiplicity, zero_weight_dim};
pub use lr::lr_coeffs;
pub use ring::FusionRing;

/// Default size bound `|lambda| <= 4` for test balls.
pub const DEFAULT_BALL_RADIUS: u32 = 4;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DominantWeight {
    rank: usize,
    rows: Vec<u32>,
}

/// Strips full columns of height `n` from a partition.
pub fn reduce(partition: &[u32], n: usize) -> Result<DominantWeight> {
    if n < 2 {
        return Err(Error::domain(format!("rank must be at least 2, got {n}")));
    }
    if partition.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::domain(format!(
            "partition {partition:?} is not non-increasing"
        )));
    }
    if partition.iter().skip(n).any(|&r| r != 0) {
        return Err(Error::domain(format!(
            "partition {partition:?} has more than {n} rows and vanishes for SU({n})"
        )));
    }
    let mut rows = vec![0u32; n];
    for (slot, &r) in rows.iter_mut().zip(partition) {
        *slot = r;
    }
    let last = rows[n - 1];
    rows.truncate(n - 1);
    rows.iter_mut().for_each(|r| *r -= last);
    Ok(DominantWeight { rank: n, rows })
}

impl DominantWeight {
    /// Same as [`reduce`].
    pub fn new(n: usize, partition: &[u32]) -> Result<Self> {
        reduce(partition, n)
    }

    pub fn trivial(n: usize) -> Self {
        assert!(n >= 2, "rank must be at least 2");
        Self {
            rank: n,
            rows: vec![0; n - 1],
        }
    }

    /// The defining representation `(1, 0, ..., 0)`.
    pub fn fundamental(n: usize) -> Self {
        let mut w = Self::trivial(n);
        w.rows[0] = 1;
        w
    }

    /// The `SU(2)` irreducible of spin `twice_spin / 2`.
    pub fn spin(twice_spin: u32) -> Self {
        Self {
            rank: 2,
            rows: vec![twice_spin],
        }
    }

    pub fn twice_spin(&self) -> Option<u32> {
        (self.rank == 2).then(|| self.rows[0])
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// The reduced partition, always of length `rank - 1`.
    pub fn rows(&self) -> &[u32] {
        &self.rows
    }

    /// The reduced partition padded with the implicit trailing zero (length `rank`).
    pub fn full_rows(&self) -> Vec<u32> {
        let mut rows = self.rows.clone();
        rows.push(0);
        rows
    }

    /// The partition without trailing zeros.
    pub fn parts(&self) -> Vec<u32> {
        self.rows.iter().copied().filter(|&r| r > 0).collect()
    }

    /// Number of boxes `|lambda|` of the reduced partition.
    pub fn size(&self) -> u32 {
        self.rows.iter().sum()
    }

    pub fn is_trivial(&self) -> bool {
        self.rows.iter().all(|&r| r == 0)
    }

    /// Highest weight of the dual representation: `lambda_i -> lambda_1 - lambda_{n+1-i}`.
    pub fn conjugate(&self) -> Self {
        let full = self.full_rows();
        let top = full[0];
        let n = self.rank;
        let rows = (0..n - 1).map(|i| top - full[n - 1 - i]).collect();
        Self { rank: n, rows }
    }

    /// The classical dimension (Weyl's formula).
    pub fn dim(&self) -> u64 {
        let full = self.full_rows();
        let mut num: u128 = 1;
        let mut den: u128 = 1;
        for i in 0..self.rank {
            for j in (i + 1)..self.rank {
                num *= (full[i] - full[j]) as u128 + (j - i) as u128;
                den *= (j - i) as u128;
                let g = gcd(num, den);
                num /= g;
                den /= g;
            }
        }
        debug_assert_eq!(den, 1);
        num as u64
    }

    /// The weight as an integer vector of length `rank`.
    pub fn weight_vector(&self) -> Vec<i64> {
        self.full_rows().into_iter().map(i64::from).collect()
    }

    /// Parses the comma-joined partition encoding (`"2,1"`). Shorter lists are
    /// padded with zeros; a list of length `n` is reduced.
    pub fn parse(s: &str, n: usize) -> Result<Self> {
        let parse_err = || Error::Parse {
            what: "weight",
            input: s.to_string(),
        };
        let s = s.trim().trim_start_matches('(').trim_end_matches(')');
        let parts: Vec<u32> = if s.is_empty() {
            Vec::new()
        } else {
            s.split(',')
                .map(|p| p.trim().parse::<u32>().map_err(|_| parse_err()))
                .collect::<Result<_>>()?
        };
        reduce(&parts, n)
    }

    pub fn check_rank(&self, other: &Self) -> Result<()> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch {
                expected: self.rank,
                found: other.rank,
            });
        }
        Ok(())
    }
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl fmt::Display for DominantWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.rows.iter().join(","))
    }
}

impl fmt::Debug for DominantWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SU({})[{}]", self.rank, self)
    }
}

impl Serialize for DominantWeight {
    fn serialize<Ser: Serializer>(&self, serializer: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

/// All reduced weights of `SU(n)` with `|lambda| <= radius`, ordered by size, then
/// reverse-lexicographically.
pub fn ball(n: usize, radius: u32) -> Vec<DominantWeight> {
    assert!(n >= 2, "rank must be at least 2");
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(n - 1);
    for size in 0..=radius {
        partitions_into(size, n - 1, size, &mut current, &mut out, n);
    }
    out
}

fn partitions_into(
    remaining: u32,
    slots: usize,
    max_part: u32,
    current: &mut Vec<u32>,
    out: &mut Vec<DominantWeight>,
    n: usize,
) {
    if slots == 0 {
        if remaining == 0 {
            out.push(DominantWeight {
                rank: n,
                rows: current.clone(),
            });
        }
        return;
    }
    for part in (0..=max_part.min(remaining)).rev() {
        if (slots as u32 - 1) * part < remaining - part {
            break;
        }
        current.push(part);
        partitions_into(remaining - part, slots - 1, part, current, out, n);
        current.pop();
    }
}

/// Decomposition of a tensor product: irreducible -> multiplicity (absent keys are zero).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FusionResult {
    rank: usize,
    entries: BTreeMap<DominantWeight, u64>,
}

impl FusionResult {
    pub(crate) fn from_entries(rank: usize, entries: BTreeMap<DominantWeight, u64>) -> Self {
        debug_assert!(entries.values().all(|&m| m >= 1));
        Self { rank, entries }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn multiplicity(&self, nu: &DominantWeight) -> u64 {
        self.entries.get(nu).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&DominantWeight, u64)> {
        self.entries.iter().map(|(w, &m)| (w, m))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `sum_nu N_nu dim(nu)`.
    pub fn total_dim(&self) -> u64 {
        self.iter().map(|(w, m)| m * w.dim()).sum()
    }
}

/// Whether a product satisfies `dim(l) dim(m) = sum N dim(n)` and the same identity for
/// quantum dimensions (exact in exact mode, within `tol` in float mode).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SumRules {
    pub classical: bool,
    pub quantum: bool,
}

impl SumRules {
    pub fn hold(&self) -> bool {
        self.classical && self.quantum
    }
}

pub fn check_sum_rules<S: Scalar>(
    lam: &DominantWeight,
    mu: &DominantWeight,
    product: &FusionResult,
    q: &QParam<S>,
    tol: f64,
) -> SumRules {
    let classical = lam.dim() * mu.dim() == product.total_dim();
    let lhs = qdim_sun(lam, q) * qdim_sun(mu, q);
    let rhs = product.iter().fold(S::zero(), |acc, (nu, m)| {
        acc + qdim_sun(nu, q) * S::from_i64(m as i64)
    });
    SumRules {
        classical,
        quantum: lhs.approx_eq(&rhs, tol),
    }
}

/// `N^U_{U,V}`: the multiplicity of `u` inside `u (x) v`.
pub fn mult_in_self_tensor(u: &DominantWeight, v: &DominantWeight) -> Result<u64> {
    Ok(lr_coeffs(u, v)?.multiplicity(u))
}

/// True when `u + w v` is dominant for every permutation `w` of the coordinates of `v`.
///
/// This is a sufficient condition for `N^U_{U,V} = m_0(V)`.
pub fn equality_criterion(u: &DominantWeight, v: &DominantWeight) -> Result<bool> {
    u.check_rank(v)?;
    let base = u.weight_vector();
    let vv = v.weight_vector();
    let n = vv.len();
    Ok(vv.iter().permutations(n).all(|perm| {
        let shifted: Vec<i64> = base.iter().zip(perm).map(|(a, b)| a + b).collect();
        shifted.windows(2).all(|w| w[0] >= w[1])
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(n: usize, rows: &[u32]) -> DominantWeight {
        DominantWeight::new(n, rows).unwrap()
    }

    #[test]
    fn sum_rules_on_su3_ball() {
        let q = QParam::<crate::Rational>::exact(1, 2).unwrap();
        let states = ball(3, 3);
        for a in &states {
            for b in &states {
                let p = lr_coeffs(a, b).unwrap();
                assert!(check_sum_rules(a, b, &p, &q, 0.0).hold(), "{a:?} {b:?}");
            }
        }
        let a = w(3, &[1, 0]);
        let mut wrong = lr_coeffs(&a, &a).unwrap();
        wrong.entries.remove(&w(3, &[1, 1]));
        let rules = check_sum_rules(&a, &a, &wrong, &q, 0.0);
        assert!(!rules.classical && !rules.quantum);
    }

    #[test]
    fn reduce_examples() {
        assert_eq!(reduce(&[1, 1, 1], 3).unwrap(), DominantWeight::trivial(3));
        assert_eq!(reduce(&[2, 1, 1], 3).unwrap(), w(3, &[1, 0]));
        assert_eq!(reduce(&[3, 2], 3).unwrap().rows(), &[3, 2]);
        assert!(reduce(&[1, 2], 3).is_err());
        assert!(reduce(&[1, 1, 1, 1], 3).is_err());
        assert!(reduce(&[1], 1).is_err());
    }

    #[test]
    fn conjugate_examples() {
        for k in 0..8 {
            assert_eq!(DominantWeight::spin(k).conjugate(), DominantWeight::spin(k));
        }
        assert_eq!(w(3, &[1, 0]).conjugate(), w(3, &[1, 1]));
        assert_eq!(w(4, &[3, 1, 0]).conjugate(), w(4, &[3, 3, 2]));
        for n in 2..6 {
            assert_eq!(
                DominantWeight::trivial(n).conjugate(),
                DominantWeight::trivial(n)
            );
        }
        for lam in ball(4, 5) {
            assert_eq!(lam.conjugate().conjugate(), lam);
            assert_eq!(lam.conjugate().dim(), lam.dim());
        }
    }

    #[test]
    fn classical_dimensions() {
        assert_eq!(DominantWeight::spin(5).dim(), 6);
        assert_eq!(w(3, &[1, 0]).dim(), 3);
        assert_eq!(w(3, &[2, 1]).dim(), 8);
        assert_eq!(w(3, &[2, 0]).dim(), 6);
        assert_eq!(w(4, &[1, 1, 0]).dim(), 6);
        assert_eq!(w(4, &[2, 1, 0]).dim(), 20);
    }

    #[test]
    fn encoding_round_trip() {
        let lam = w(4, &[3, 1, 0]);
        assert_eq!(lam.to_string(), "3,1,0");
        assert_eq!(DominantWeight::parse("3,1", 4).unwrap(), lam);
        assert_eq!(DominantWeight::parse("(4,2,1,1)", 4).unwrap(), lam);
        assert_eq!(DominantWeight::parse("", 3).unwrap(), DominantWeight::trivial(3));
        assert!(DominantWeight::parse("1,x", 3).is_err());
    }

    #[test]
    fn ball_counts() {
        assert_eq!(ball(2, 10).len(), 11);
        // SU(3): sizes 0..=4 contribute 1, 1, 2, 2, 3.
        assert_eq!(ball(3, 4).len(), 9);
        let b = ball(3, 4);
        assert!(b.windows(2).all(|p| p[0].size() <= p[1].size()));
        assert_eq!(b[0], DominantWeight::trivial(3));
    }

    #[test]
    fn twice_spin_codec() {
        assert_eq!(DominantWeight::spin(3).twice_spin(), Some(3));
        assert_eq!(DominantWeight::spin(3), w(2, &[3]));
        assert_eq!(w(3, &[1, 0]).twice_spin(), None);
    }

    #[test]
    fn equality_criterion_examples() {
        for lam in ball(3, 4) {
            assert!(equality_criterion(&lam, &DominantWeight::trivial(3)).unwrap());
        }
        assert!(equality_criterion(&DominantWeight::spin(6), &DominantWeight::spin(2)).unwrap());
        assert!(!equality_criterion(&DominantWeight::spin(1), &DominantWeight::spin(2)).unwrap());
        // U = (4,2), V = (2,1): every permutation of (2,1,0) added to (4,2,0) stays dominant.
        assert!(equality_criterion(&w(3, &[4, 2]), &w(3, &[2, 1])).unwrap());
        assert!(!equality_criterion(&w(3, &[2, 1]), &w(3, &[2, 1])).unwrap());
        assert!(equality_criterion(&w(3, &[1]), &w(4, &[1])).is_err());
    }

    #[test]
    fn multiplicity_examples() {
        let adj = w(3, &[2, 1]);
        assert_eq!(mult_in_self_tensor(&w(3, &[1, 0]), &adj).unwrap(), 1);
        assert_eq!(mult_in_self_tensor(&adj, &adj).unwrap(), 2);
        assert_eq!(mult_in_self_tensor(&w(3, &[4, 2]), &adj).unwrap(), 2);
        for s in 2..10 {
            assert_eq!(
                mult_in_self_tensor(&DominantWeight::spin(s), &DominantWeight::spin(2)).unwrap(),
                1
            );
        }
        for lam in ball(3, 4) {
            assert_eq!(
                mult_in_self_tensor(&lam, &DominantWeight::trivial(3)).unwrap(),
                1
            );
        }
    }
}
