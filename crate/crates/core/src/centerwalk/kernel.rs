use std::collections::HashMap;

use serde::Serialize;

use super::{dim_ratio, transition_row_cached, EigenCheck, LevyMeasure, QDims};
use crate::scalar::{QParam, Scalar};
use crate::weights::{ball, DominantWeight, FusionRing};
use crate::{Error, Result};

/// What happens to transitions that leave the finite window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryPolicy {
    /// Mass leaving the ball is collected in one absorbing coordinate.
    Cemetery,
}

/// The transition kernel restricted to the ball `|s| <= radius`, with a cemetery.
#[derive(Debug, Clone)]
pub struct TransitionKernel<S> {
    q: QParam<S>,
    levy: LevyMeasure<S>,
    radius: u32,
    states: Vec<DominantWeight>,
    index: HashMap<DominantWeight, usize>,
    rows: Vec<Vec<(usize, S)>>,
    escape: Vec<S>,
    policy: BoundaryPolicy,
    cumulative: Vec<Vec<f64>>,
}

/// Builds every row `p(s, .)` for `|s| <= radius`. Mass landing outside the ball goes to
/// the cemetery, which is absorbing.
pub fn build_kernel<S: Scalar>(
    radius: u32,
    levy: &LevyMeasure<S>,
    q: &QParam<S>,
) -> Result<TransitionKernel<S>> {
    if radius < 1 {
        return Err(Error::domain("ball radius must be at least 1"));
    }
    let rank = levy.rank();
    let ring = FusionRing::new(rank)?;
    let states = ball(rank, radius);
    let index: HashMap<DominantWeight, usize> = states
        .iter()
        .enumerate()
        .map(|(i, w)| (w.clone(), i))
        .collect();
    let mut dims = QDims::new(q);
    let mut rows = Vec::with_capacity(states.len());
    let mut escape = Vec::with_capacity(states.len());
    for s in &states {
        let full = transition_row_cached(s, levy, &mut dims, &ring)?;
        let mut row = Vec::with_capacity(full.len());
        let mut lost = S::zero();
        for (t, p) in full {
            match index.get(&t) {
                Some(&j) => row.push((j, p)),
                None => lost += p,
            }
        }
        row.sort_by_key(|&(j, _)| j);
        rows.push(row);
        escape.push(lost);
    }
    let cumulative = rows
        .iter()
        .zip(&escape)
        .map(|(row, lost)| cumulative_row(row, lost))
        .collect();
    Ok(TransitionKernel {
        q: q.clone(),
        levy: levy.clone(),
        radius,
        states,
        index,
        rows,
        escape,
        policy: BoundaryPolicy::Cemetery,
        cumulative,
    })
}

// Partial sums are formed in the kernel's own scalar and rounded once.
fn cumulative_row<S: Scalar>(row: &[(usize, S)], lost: &S) -> Vec<f64> {
    let mut acc = S::zero();
    let mut out = Vec::with_capacity(row.len() + 1);
    for (_, p) in row {
        acc += p;
        out.push(acc.to_f64());
    }
    if !lost.is_zero() {
        acc += lost;
        out.push(acc.to_f64());
    }
    out
}

impl<S: Scalar> TransitionKernel<S> {
    pub fn q(&self) -> &QParam<S> {
        &self.q
    }

    pub fn levy(&self) -> &LevyMeasure<S> {
        &self.levy
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn policy(&self) -> BoundaryPolicy {
        self.policy
    }

    pub fn states(&self) -> &[DominantWeight] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn index_of(&self, w: &DominantWeight) -> Option<usize> {
        self.index.get(w).copied()
    }

    /// Index one past the last state, standing for the cemetery.
    pub fn cemetery_index(&self) -> usize {
        self.states.len()
    }

    /// The trivial weight, where every path starts.
    pub fn origin(&self) -> usize {
        0
    }

    /// In-ball entries of row `i` as `(state index, probability)`.
    pub fn row(&self, i: usize) -> &[(usize, S)] {
        &self.rows[i]
    }

    pub fn escape_mass(&self, i: usize) -> &S {
        &self.escape[i]
    }

    /// `p(states[i], states[j])`, zero when absent.
    pub fn probability(&self, i: usize, j: usize) -> S {
        self.rows[i]
            .iter()
            .find(|(k, _)| *k == j)
            .map_or_else(S::zero, |(_, p)| p.clone())
    }

    /// Row `i` is interior when none of its mass leaves the ball.
    pub fn is_interior(&self, i: usize) -> bool {
        self.escape[i].is_zero()
    }

    pub fn row_sum(&self, i: usize) -> S {
        self.rows[i].iter().fold(S::zero(), |acc, (_, p)| acc + p)
    }

    pub fn row_sum_with_cemetery(&self, i: usize) -> S {
        self.row_sum(i) + &self.escape[i]
    }

    pub(crate) fn cumulative(&self, i: usize) -> &[f64] {
        &self.cumulative[i]
    }

    /// Checks `P h = lambda h` for `h = dim / qdim` on interior rows.
    pub fn eigencheck(&self) -> EigenCheck<S> {
        let eigenvalue = super::dim_ratio_eigenvalue(&self.levy, &self.q);
        let h: Vec<S> = self.states.iter().map(|s| dim_ratio(s, &self.q)).collect();
        let mut residual = S::zero();
        let mut interior = 0;
        for (i, row) in self.rows.iter().enumerate() {
            if !self.is_interior(i) {
                continue;
            }
            interior += 1;
            let ph = row
                .iter()
                .fold(S::zero(), |acc, (j, p)| acc + p.clone() * &h[*j]);
            let gap = (ph - eigenvalue.clone() * &h[i]).abs();
            if gap > residual {
                residual = gap;
            }
        }
        EigenCheck {
            eigenvalue,
            residual,
            interior_states: interior,
            states: self.states.len(),
        }
    }
}

/// The law of `s_n` started at the trivial weight.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Distribution<S> {
    pub step: usize,
    pub masses: Vec<S>,
    pub cemetery: S,
}

impl<S: Scalar> Distribution<S> {
    pub fn total(&self) -> S {
        self.masses.iter().fold(self.cemetery.clone(), |acc, m| acc + m)
    }
}

/// Pushes the point mass at the trivial weight through `steps` transitions.
pub fn distribution_after<S: Scalar>(kernel: &TransitionKernel<S>, steps: usize) -> Distribution<S> {
    let mut masses = vec![S::zero(); kernel.len()];
    masses[kernel.origin()] = S::one();
    let mut cemetery = S::zero();
    for _ in 0..steps {
        let mut next = vec![S::zero(); kernel.len()];
        for (i, mass) in masses.iter().enumerate() {
            if mass.is_zero() {
                continue;
            }
            for (j, p) in kernel.row(i) {
                next[*j] += mass.clone() * p;
            }
            cemetery += mass.clone() * kernel.escape_mass(i);
        }
        masses = next;
    }
    Distribution {
        step: steps,
        masses,
        cemetery,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn half() -> QParam<Rational> {
        QParam::exact(1, 2).unwrap()
    }

    #[test]
    fn su2_kernel_is_tridiagonal() {
        let levy = LevyMeasure::point(DominantWeight::spin(1));
        let kernel = build_kernel(10, &levy, &half()).unwrap();
        assert_eq!(kernel.len(), 11);
        for i in 0..kernel.len() {
            assert!(kernel.row(i).iter().all(|(j, _)| j.abs_diff(i) == 1));
            assert_eq!(kernel.row_sum_with_cemetery(i), Rational::one());
        }
        assert!(kernel.is_interior(9));
        assert!(!kernel.is_interior(10));
        assert!(kernel.escape_mass(10) > &Rational::zero());
    }

    #[test]
    fn trivial_measure_gives_identity() {
        let levy = LevyMeasure::point(DominantWeight::trivial(3));
        let kernel = build_kernel(4, &levy, &half()).unwrap();
        for i in 0..kernel.len() {
            assert_eq!(kernel.row(i), &[(i, Rational::one())]);
        }
    }

    #[test]
    fn rows_sum_to_one_with_cemetery() {
        let levy = LevyMeasure::new(vec![
            (DominantWeight::new(3, &[1, 0]).unwrap(), Rational::from_ratio(1, 2)),
            (DominantWeight::new(3, &[1, 1]).unwrap(), Rational::from_ratio(1, 4)),
            (DominantWeight::new(3, &[2, 1]).unwrap(), Rational::from_ratio(1, 4)),
        ])
        .unwrap();
        let kernel = build_kernel(5, &levy, &QParam::exact(2, 3).unwrap()).unwrap();
        for i in 0..kernel.len() {
            assert_eq!(kernel.row_sum_with_cemetery(i), Rational::one());
            assert!(kernel.row(i).iter().all(|(_, p)| *p >= Rational::zero()));
        }
    }

    #[test]
    fn two_step_law() {
        let levy = LevyMeasure::point(DominantWeight::spin(1));
        let kernel = build_kernel(10, &levy, &half()).unwrap();
        let d0 = distribution_after(&kernel, 0);
        assert_eq!(d0.masses[0], Rational::one());
        let d2 = distribution_after(&kernel, 2);
        assert_eq!(d2.masses[0], Rational::from_ratio(4, 25));
        assert_eq!(d2.masses[2], Rational::from_ratio(21, 25));
        assert_eq!(d2.total(), Rational::one());
    }

    #[test]
    fn mass_escapes_small_ball() {
        let levy = LevyMeasure::point(DominantWeight::spin(1));
        let kernel = build_kernel(6, &levy, &QParam::float(0.5).unwrap()).unwrap();
        let d = distribution_after(&kernel, 400);
        assert!((d.total() - 1.0).abs() < 1e-12);
        assert!(d.cemetery > 0.999);
    }

    #[test]
    fn rejects_zero_radius() {
        let levy = LevyMeasure::<Rational>::point(DominantWeight::spin(1));
        assert!(build_kernel(0, &levy, &half()).is_err());
    }
}
