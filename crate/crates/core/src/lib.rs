//! Mollified second moment of the Riemann zeta function on the line
//! `Re s = 1/2 - R/log T`, and the resulting lower bound for the proportion
//! of zeta zeros on the critical line.
//!
//! The crate evaluates the main term `c(P, Q, R, theta)` exactly, optimises
//! the mollifier polynomials, and checks the supporting identities and the
//! moment asymptotic numerically at desk scale.

pub mod afe;
pub mod error;
pub mod lgamma;
pub mod mainterm;
pub mod moment;
pub mod optimizer;
pub mod poly;
pub mod quad;
pub mod zeta;

pub use error::{Error, Result};
pub use mainterm::{
    c1_derivative_form, c1_integral_form, c_general, inner_derivative, kappa_bound,
    main_term_closed, main_term_quadrature, MainTermParams, MainTermResult, Method, ShiftPair,
};
pub use poly::{exp_moment, BivariatePolynomial, Polynomial};
