//! Exact and numerical machinery for random walks on the duals of `SU_q(n)`.
//!
//! The crate is organised bottom-up:
//!
//! - [`scalar`]: the number tower (exact rationals or `f64`) and the deformation parameter.
//! - [`qarith`]: q-integers, quantum dimensions and truncated q-Pochhammer products.
//! - [`weights`]: the fusion ring of `SU(n)`: dominant weights, Littlewood–Richardson
//!   products, weight multiplicities and zero-weight dimensions.
//! - [`centerwalk`]: the random walk on the centre of the discrete dual (kernels,
//!   n-step laws, seeded path sampling, martingale diagnostics).
//! - [`cosetwalk`]: the birth–death chain on the double-coset space of `SU_q(2)`
//!   with its explicit positive eigenvector.
//! - [`hecke`]: tensor-chain representations of the Hecke algebra and the
//!   conditional-expectation test.
//! - [`export`]: CSV/JSON writers shared by the CLI and bindings.
//!
//! Every algorithm is generic over [`Scalar`], so the same code runs in exact mode
//! (`QParam<Rational>`) and float mode (`QParam<f64>`).

pub mod centerwalk;
pub mod cosetwalk;
mod error;
pub mod export;
pub mod hecke;
pub mod qarith;
pub mod scalar;
pub mod weights;

pub use error::{Error, Result};
pub use malachite_q::Rational;
pub use scalar::{Mode, QParam, Scalar, DEFAULT_TOLERANCE};
pub use weights::{DominantWeight, FusionResult};
