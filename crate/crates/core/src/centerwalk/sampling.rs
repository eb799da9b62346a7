use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::TransitionKernel;
use crate::scalar::Scalar;
use crate::weights::DominantWeight;
use crate::{Error, Result};

/// Identifier of the generator recorded in experiment metadata. Path `i` of a run with
/// seed `s` draws from `ChaCha8Rng::seed_from_u64(s)` switched to stream `i`, so each
/// path is reproducible on its own and independent of thread scheduling.
pub const RNG_ALGORITHM: &str = "rand_chacha::ChaCha8Rng/seed_from_u64/stream=path_index";

/// One trajectory `s_1, ..., s_L` started from the trivial weight. States are kernel
/// indices; [`TransitionKernel::cemetery_index`] marks a path that has left the ball.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PathSample {
    pub seed: u64,
    pub index: u64,
    pub states: Vec<usize>,
}

impl PathSample {
    /// The weights along the path, `None` once the path is in the cemetery.
    pub fn weights<'k, S: Scalar>(
        &self,
        kernel: &'k TransitionKernel<S>,
    ) -> Vec<Option<&'k DominantWeight>> {
        self.states
            .iter()
            .map(|&i| kernel.states().get(i))
            .collect()
    }

    pub fn last(&self) -> usize {
        *self.states.last().expect("paths are non-empty")
    }
}

/// Draws `count` independent paths of `length` steps under the truncated path measure.
pub fn sample_paths<S: Scalar>(
    kernel: &TransitionKernel<S>,
    count: usize,
    length: usize,
    seed: u64,
) -> Result<Vec<PathSample>> {
    if count == 0 || length == 0 {
        return Err(Error::domain("path count and length must be at least 1"));
    }
    Ok((0..count as u64)
        .into_par_iter()
        .map(|index| sample_one(kernel, length, seed, index))
        .collect())
}

fn sample_one<S: Scalar>(
    kernel: &TransitionKernel<S>,
    length: usize,
    seed: u64,
    index: u64,
) -> PathSample {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let cemetery = kernel.cemetery_index();
    let mut current = kernel.origin();
    let mut states = Vec::with_capacity(length);
    for _ in 0..length {
        if current != cemetery {
            let cum = kernel.cumulative(current);
            let u: f64 = rng.random();
            let pos = cum.partition_point(|&c| c <= u).min(cum.len() - 1);
            let row = kernel.row(current);
            current = if pos < row.len() { row[pos].0 } else { cemetery };
        }
        states.push(current);
    }
    PathSample {
        seed,
        index,
        states,
    }
}

/// Visit counts per state (cemetery last) at 1-based `step`.
pub fn step_counts<S: Scalar>(
    paths: &[PathSample],
    kernel: &TransitionKernel<S>,
    step: usize,
) -> Vec<u64> {
    let mut counts = vec![0u64; kernel.len() + 1];
    for path in paths {
        counts[path.states[step - 1]] += 1;
    }
    counts
}

/// Fraction of paths whose final state lies outside `|s| <= min_size` (the cemetery counts
/// as outside).
pub fn escape_fraction<S: Scalar>(
    paths: &[PathSample],
    kernel: &TransitionKernel<S>,
    min_size: u32,
) -> f64 {
    if paths.is_empty() {
        return 0.0;
    }
    let escaped = paths
        .iter()
        .filter(|p| {
            kernel
                .states()
                .get(p.last())
                .is_none_or(|w| w.size() > min_size)
        })
        .count();
    escaped as f64 / paths.len() as f64
}

/// `h(s_n)` along each path together with tail oscillation diagnostics.
#[derive(Debug, Clone, Serialize)]
pub struct MartingaleTrace {
    pub values: Vec<Vec<f64>>,
    /// `max - min` of `h(s_n)` over the last `window` steps of each path.
    pub oscillation: Vec<f64>,
    pub window: usize,
    pub threshold: f64,
    /// Fraction of paths whose tail oscillation is at most `threshold`.
    pub settled_fraction: f64,
}

/// Evaluates `h` along every path. `h` receives `None` for the cemetery.
pub fn martingale_trace<S: Scalar>(
    paths: &[PathSample],
    kernel: &TransitionKernel<S>,
    h: impl Fn(Option<&DominantWeight>) -> f64,
    window: usize,
    threshold: f64,
) -> MartingaleTrace {
    let values: Vec<Vec<f64>> = paths
        .iter()
        .map(|p| p.weights(kernel).into_iter().map(&h).collect())
        .collect();
    let oscillation: Vec<f64> = values
        .iter()
        .map(|v| {
            let tail = &v[v.len().saturating_sub(window.max(1))..];
            let hi = tail.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let lo = tail.iter().copied().fold(f64::INFINITY, f64::min);
            hi - lo
        })
        .collect();
    let settled = oscillation.iter().filter(|&&o| o <= threshold).count();
    let settled_fraction = if paths.is_empty() {
        0.0
    } else {
        settled as f64 / paths.len() as f64
    };
    MartingaleTrace {
        values,
        oscillation,
        window,
        threshold,
        settled_fraction,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::centerwalk::{build_kernel, dim_ratio, LevyMeasure};
    use crate::scalar::QParam;
    use crate::Rational;

    fn su2_kernel(radius: u32) -> TransitionKernel<Rational> {
        let levy = LevyMeasure::point(DominantWeight::spin(1));
        build_kernel(radius, &levy, &QParam::exact(1, 2).unwrap()).unwrap()
    }

    #[test]
    fn deterministic_given_seed() {
        let kernel = su2_kernel(40);
        let a = sample_paths(&kernel, 50, 30, 7).unwrap();
        let b = sample_paths(&kernel, 50, 30, 7).unwrap();
        let c = sample_paths(&kernel, 50, 30, 8).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_eq!(a[3], sample_one(&kernel, 30, 7, 3));
    }

    #[test]
    fn paths_follow_support() {
        let kernel = su2_kernel(12);
        for path in sample_paths(&kernel, 200, 40, 1).unwrap() {
            let mut prev = kernel.origin();
            for &s in &path.states {
                if prev == kernel.cemetery_index() {
                    assert_eq!(s, prev);
                } else if s == kernel.cemetery_index() {
                    assert!(!kernel.is_interior(prev));
                } else {
                    assert!(kernel.probability(prev, s) > Rational::zero());
                }
                prev = s;
            }
        }
    }

    #[test]
    fn rejects_empty_requests() {
        let kernel = su2_kernel(4);
        assert!(sample_paths(&kernel, 0, 3, 1).is_err());
        assert!(sample_paths(&kernel, 3, 0, 1).is_err());
    }

    #[test]
    fn constant_h_does_not_oscillate() {
        let kernel = su2_kernel(30);
        let paths = sample_paths(&kernel, 20, 25, 3).unwrap();
        let trace = martingale_trace(&paths, &kernel, |_| 1.0, 10, 0.0);
        assert!(trace.oscillation.iter().all(|&o| o == 0.0));
        assert_eq!(trace.settled_fraction, 1.0);
    }

    #[test]
    fn eigenfunction_decays_along_paths() {
        let kernel = su2_kernel(220);
        let q = QParam::float(0.5).unwrap();
        let paths = sample_paths(&kernel, 300, 200, 11).unwrap();
        let h = |w: Option<&DominantWeight>| w.map_or(0.0, |w| dim_ratio(w, &q));
        let trace = martingale_trace(&paths, &kernel, h, 20, 1e-6);
        assert!(trace.values.iter().all(|v| *v.last().unwrap() < 1e-6));
        assert!(trace.settled_fraction > 0.99);
    }
}
