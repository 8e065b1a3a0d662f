//! Certification and solving for discrete anisotropic p(k)-Laplacian
//! Dirichlet problems
//!
//! ```text
//! -Δ( w(k-1) |Δu(k-1)|^{p(k-1)-2} Δu(k-1) ) + q(k) |u(k)|^{p(k)-2} u(k) = λ f(k, u(k)),
//! u(0) = u(T+1) = 0,   k in [1, T]
//! ```
//!
//! The library checks the hypotheses of the existence theorems for this
//! problem family on concrete instances, computes the open λ-intervals on
//! which a (nontrivial, localized) solution is guaranteed, and then actually
//! finds and verifies critical points of the energy functional
//! `I_λ = Φ - λΨ` by damped Newton iteration on the Euler–Lagrange system.
//!
//! Everything is double precision with explicit tolerances; independent
//! oracles (brute-force minimization, finite differences, property samplers)
//! live in [`oracle`].

pub mod certify;
pub mod constants;
pub mod examples;
pub mod expr;
pub mod functional;
pub mod problem;
pub mod quad;

pub use certify::{CertificationReport, LambdaInterval, TheoremId};
pub use constants::{derived_constants, DerivedConstants};
pub use problem::{GridFunction, GrowthCertificate, Nonlinearity, ProblemInstance};
