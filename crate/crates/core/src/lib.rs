//! Metric adjusted skew information and the lattice of quantum Fisher representing functions.
//!
//! The crate is organised bottom-up:
//!
//! - [`matrix`], [`spectral`], [`density`]: complex Hermitian linear algebra, a cyclic
//!   Jacobi eigensolver, density matrices and functions `k(L_ρ, R_ρ)` of the
//!   left/right multiplication operators.
//! - [`fisher`]: representing functions `f` (closed-form catalog plus weight-defined
//!   functions) and the transforms `c`, `č`, `f̃`, `d_c`.
//! - [`weight`] and [`quadrature`]: the exponential integral representation of `f` and
//!   `f(0)/f` through a weight function `h`, closed-form weights and boundary-value
//!   extraction.
//! - [`membership`]: sampled operator-monotonicity checks.
//! - [`order`]: the order `f ⪯ g`, meet and join by weight max/min, and `f^♯(t) = t/f(t)`.
//! - [`output`]: CSV emission.
//! - [`skew`] and [`suites`]: variance, covariance, skew information in both forms, the
//!   Gram matrix inequalities and seeded randomized verification suites.

// `!(x > 0.0)` style checks are used on purpose so that NaN is rejected
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod density;
pub mod error;
pub mod fisher;
pub mod matrix;
pub mod membership;
pub mod order;
pub mod output;
pub mod quadrature;
pub mod random;
pub mod skew;
pub mod spectral;
pub mod suites;
pub mod weight;

pub use density::{apply_bivariate, matrix_power, validate_density, DensityMatrix, Tolerances};
pub use error::{Error, Result};
pub use fisher::FisherFunction;
pub use matrix::{commutator, ComplexMatrix, HermitianMatrix, C64};
pub use quadrature::QuadratureConfig;
pub use spectral::{psd_min_eigenvalue, spectral_decompose, SpectralDecomposition};
pub use weight::WeightFunction;
pub use membership::{verify_fop_membership, MembershipReport, VerifyConfig};
pub use order::{join, meet, preceq, preceq_with, sharp, OrderMethod, OrderVerdict};
pub use skew::{
    covariance, gram_pair, skew_bilinear, skew_info, skew_info_alt, variance, wyd_direct, GramPair,
    InequalityReport, ObservableTuple,
};
pub use suites::{run_suite, Suite, SuiteConfig};
