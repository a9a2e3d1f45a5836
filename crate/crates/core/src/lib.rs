//! Asymptotic statistics of finite continued fractions with restricted
//! digits: exact expansion/reconstruction over Q and over the five
//! norm-Euclidean imaginary quadratic fields, pruned enumeration of the
//! bounded-digit sets Sigma_{N,A} / Omega_{N,A} and their thickenings,
//! collocation discretization of the constrained transfer operators, and
//! power-law fits of the resulting counting data.

pub mod asymptotics;
pub mod cf;
pub mod counting;
pub mod error;
pub mod quadratic;
pub mod spectral;

pub use error::{Error, Result};
