//! q-integers, quantum dimensions and truncated q-Pochhammer products.

use crate::scalar::{QParam, Scalar, Truncated};
use crate::weights::DominantWeight;
use crate::{Error, Result};

/// The q-integer `[n]_q = (q^n - q^-n) / (q - q^-1)`.
pub fn q_int<S: Scalar>(n: i64, q: &QParam<S>) -> Result<S> {
    if n < 1 {
        return Err(Error::domain(format!("q-integer needs n >= 1, got {n}")));
    }
    Ok(q_int_raw(n, q))
}

/// `[n]_q` for any integer `n` (odd in `n`, so `[0]_q = 0`).
pub(crate) fn q_int_raw<S: Scalar>(n: i64, q: &QParam<S>) -> S {
    let num = q.pow(n) - q.pow(-n);
    let den = q.value().clone() - q.inv();
    num / den
}

/// Quantum dimension of the irreducible of `SU_q(n)` with highest weight `lam`:
/// the product over positive roots of `[lam_i - lam_j + j - i]_q / [j - i]_q`.
pub fn qdim_sun<S: Scalar>(lam: &DominantWeight, q: &QParam<S>) -> S {
    let rows = lam.full_rows();
    let n = rows.len();
    let mut num = S::one();
    let mut den = S::one();
    for i in 0..n {
        for j in (i + 1)..n {
            let shift = (j - i) as i64;
            num = num * q_int_raw(rows[i] as i64 - rows[j] as i64 + shift, q);
            den = den * q_int_raw(shift, q);
        }
    }
    num / den
}

/// `prod_{k < terms} (1 - a * step^k)`.
pub fn q_pochhammer_trunc<S: Scalar>(a: &S, step: &S, terms: usize) -> Result<Truncated<S>> {
    if terms == 0 {
        return Err(Error::domain("q-Pochhammer truncation needs at least one term"));
    }
    if a.abs() >= S::one() || step.abs() >= S::one() {
        return Err(Error::domain(format!(
            "q-Pochhammer needs |a| < 1 and |step| < 1, got a = {a}, step = {step}"
        )));
    }
    let mut value = S::one();
    let mut factor = a.clone();
    for _ in 0..terms {
        value = value * (S::one() - &factor);
        factor = factor * step;
    }
    Ok(Truncated { value, terms })
}

/// The constant `(q; q^2)_inf^2 / (q^2; q^2)_inf^2` governing the growth `a_k ~ k q^k C`
/// of the double-coset eigenvector, with both products truncated at `terms` factors.
pub fn asym_const<S: Scalar>(q: &QParam<S>, terms: usize) -> Result<Truncated<S>> {
    let q2 = q.pow(2);
    let odd = q_pochhammer_trunc(q.value(), &q2, terms)?.value;
    let even = q_pochhammer_trunc(&q2, &q2, terms)?.value;
    let ratio = odd / even;
    Ok(Truncated {
        value: ratio.clone() * ratio,
        terms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;
    use proptest::prelude::*;

    fn half() -> QParam<Rational> {
        QParam::exact(1, 2).unwrap()
    }

    #[test]
    fn q_int_examples() {
        let q = half();
        assert_eq!(q_int(1, &q).unwrap(), Rational::one());
        assert_eq!(q_int(2, &q).unwrap(), Rational::from_ratio(5, 2));
        assert_eq!(q_int(3, &q).unwrap(), Rational::from_ratio(21, 4));
        assert!(q_int(0, &q).is_err());
        assert!(q_int(-3, &q).is_err());
    }

    #[test]
    fn qdim_examples() {
        let q = half();
        let spin_half = DominantWeight::spin(1);
        assert_eq!(qdim_sun(&spin_half, &q), q_int(2, &q).unwrap());
        for n in 2..6 {
            assert_eq!(qdim_sun(&DominantWeight::trivial(n), &q), Rational::one());
        }
        let fund = DominantWeight::new(3, &[1, 0]).unwrap();
        assert_eq!(qdim_sun(&fund, &q), Rational::from_ratio(21, 4));
    }

    #[test]
    fn qdim_approaches_classical_dimension() {
        let q = QParam::float(1.0 - 1e-6).unwrap();
        for rows in [[2u32, 1], [3, 0], [4, 2], [0, 0]] {
            let lam = DominantWeight::new(3, &rows).unwrap();
            let d = qdim_sun(&lam, &q);
            assert!((d - lam.dim() as f64).abs() < 1e-4, "{lam}: {d}");
        }
    }

    #[test]
    fn pochhammer_examples() {
        let a = Rational::from_ratio(1, 3);
        let step = Rational::from_ratio(1, 5);
        let one = q_pochhammer_trunc(&a, &step, 1).unwrap();
        assert_eq!(one.value, Rational::from_ratio(2, 3));
        assert_eq!(one.terms, 1);
        assert_eq!(
            q_pochhammer_trunc(&Rational::zero(), &step, 17)
                .unwrap()
                .value,
            Rational::one()
        );
        assert!(q_pochhammer_trunc(&Rational::one(), &step, 3).is_err());
        assert!(q_pochhammer_trunc(&a, &step, 0).is_err());
    }

    #[test]
    fn pochhammer_against_longer_truncation() {
        // The 200-term product is the oracle for the 100-term one.
        let q = 0.5f64;
        let reference: f64 = (0..200).map(|k| 1.0 - q * (q * q).powi(k)).product();
        let got = q_pochhammer_trunc(&q, &(q * q), 100).unwrap().value;
        assert!((got - reference).abs() < 1e-15);
    }

    #[test]
    fn asym_const_limits() {
        let tiny = QParam::float(1e-6).unwrap();
        assert!((asym_const(&tiny, 50).unwrap().value - 1.0).abs() < 1e-5);
        let q = QParam::float(0.5).unwrap();
        let c64 = asym_const(&q, 64).unwrap().value;
        let c128 = asym_const(&q, 128).unwrap().value;
        assert!(c64 > 0.0);
        assert!((c64 - c128).abs() < 1e-12);
    }

    #[test]
    fn asym_const_exact_is_positive() {
        let c = asym_const(&half(), 10).unwrap();
        assert!(c.value > Rational::zero());
        assert_eq!(c.terms, 10);
    }

    fn small_q() -> impl Strategy<Value = (i64, i64)> {
        (2i64..12).prop_flat_map(|den| (1..den, Just(den)))
    }

    proptest! {
        #[test]
        fn q_int_identity((p, r) in small_q(), n in 1i64..40) {
            let q = QParam::exact(p, r).unwrap();
            let lhs = q_int(n, &q).unwrap() * (q.value().clone() - q.inv());
            prop_assert_eq!(lhs, q.pow(n) - q.pow(-n));
        }

        #[test]
        fn q_int_exceeds_n((p, r) in small_q(), n in 2i64..40) {
            let q = QParam::exact(p, r).unwrap();
            prop_assert!(q_int(n, &q).unwrap() > Rational::from_i64(n));
        }

        #[test]
        fn qdim_self_dual((p, r) in small_q(), a in 0u32..4, b in 0u32..4, c in 0u32..3) {
            let q = QParam::exact(p, r).unwrap();
            let lam = DominantWeight::new(4, &[a + b + c, b + c, c]).unwrap();
            prop_assert_eq!(qdim_sun(&lam, &q), qdim_sun(&lam.conjugate(), &q));
        }

        #[test]
        fn pochhammer_monotone(a in 0.01f64..0.99, step in 0.01f64..0.99, terms in 1usize..60) {
            let shorter = q_pochhammer_trunc(&a, &step, terms).unwrap().value;
            let longer = q_pochhammer_trunc(&a, &step, terms + 1).unwrap().value;
            prop_assert!(longer <= shorter);
        }
    }
}
