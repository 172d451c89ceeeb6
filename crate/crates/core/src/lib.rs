//! Return- and loop-counting functions of ±1 binary digit walks.
//!
//! A point `x ∈ [-1, 1]` is read as an infinite walk of ±1 steps through its
//! signed binary digits. [`oracle::v_trunc`] weights the walk's returns to the
//! origin by `λ^{n+1}`; [`oracle::u_trunc`] weights every closed segment of the
//! walk. The rest of the crate evaluates integrals of these fractal functions in
//! closed form and checks them against brute-force dyadic-cell integration.
//!
//! The crate is `no_std` and only needs `alloc`. IO, the CLI and parallel
//! drivers live in the `foothills` companion crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod bernoulli;
pub mod closedform;
pub mod digits;
mod error;
pub mod fourier;
pub mod linalg;
pub mod math;
pub mod oracle;
pub mod poly;
pub mod sum;

pub use digits::{DigitExpansion, Params};
pub use error::{Error, Result};
pub use poly::Poly;

pub use num_complex::Complex64;
pub use num_rational::BigRational;
