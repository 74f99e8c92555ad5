//! Exact arithmetic for regular (a,b)-modules over `Q[[b]]`.
//!
//! A rank `k` module is described by its a-matrix `A(b)` in a fixed basis,
//! acting by `a(x) = A x + b^2 x'`. All series are truncated power series
//! with rational coefficients; every algorithm tracks the precision it
//! consumes and reports [`AbError::PrecisionExhausted`] instead of
//! returning an uncertified answer.

pub mod bernstein;
pub mod constructors;
pub mod duality;
pub mod error;
pub mod fixpoint;
pub mod jordan;
pub mod lattice;
pub mod matrix;
pub mod module;
pub mod poly;
pub mod series;

pub use bernstein::{
    bernstein, dual_bernstein, pole_prediction, predict_poles, spectral_classes, BernsteinPoly,
    PolePrediction, PoleReport, SpectralClass,
};
pub use constructors::{
    e_lambda, jordan_module, perturbed_jordan, pham, random_regular, PhamSpec, RandomProfile,
};
pub use duality::{
    e_delta, find_self_duality, hom_ab, morphism_space, reflection_check, twist, verify_bidual,
    verify_isomorphism, verify_prop_dual, verify_twist_hom, DualityCertificate, IsoCheck,
    MorphismSpace,
};
pub use error::{AbError, Result};
pub use fixpoint::{
    biggest_simple_pole_sub, is_regular, saturate, submodule_closure, FixedPointConfig,
    SubModuleResult,
};
pub use jordan::{chain_residuals, jordan_chain_lift};
pub use lattice::{canonical_form, Lattice, LaurentVector};
pub use matrix::{QMatrix, SeriesMatrix};
pub use module::{default_trunc, AbModule};
pub use poly::{
    characteristic_polynomial, factor, minimal_polynomial, Factorization, RationalPolynomial,
};
pub use series::{int, rat, Rational, Series};
