//! Exact computation of degenerate multi-poly-Bernoulli numbers and
//! polynomials, their supporting sequences, and machine checks of the
//! identities relating them.
//!
//! All arithmetic is over exact rationals ([`Rational`]); generating
//! functions are dense truncated power series ([`TruncatedSeries`]).

pub mod bernoulli;
pub mod cli;
pub mod error;
pub mod harness;
pub mod rational;
pub mod series;
pub mod special;

pub use bernoulli::{
    carlitz_degenerate, degen_multi_poly_bernoulli, evaluate_expansion,
    falling_factorial_expansion, leading_value, multi_poly_bernoulli, poly_bernoulli,
    type2_poly_bernoulli, FallingFactorialTerm, Family, FamilyQuery, SequenceResult,
};
pub use error::{Error, Result};
pub use harness::{
    default_sweep, verify_addition, verify_deriv_recurrences, verify_eq18, verify_li_ones,
    verify_prop1, verify_thm2, verify_thm4, Identity, Status, VerificationReport, VerifyRequest,
};
pub use rational::{int_pow, Rational};
pub use series::TruncatedSeries;
pub use special::{
    degenerate_exp, log1p_series, multi_polylog, one_minus_exp_neg, polyexp_ei, IndexVector,
    StirlingKind, StirlingTable,
};
