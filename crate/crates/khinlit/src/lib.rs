//! Optimal constants of Khinchine- and Littlewood-type inequalities for
//! complex scalars, together with roots-of-unity machinery that certifies
//! sup-norms of complex multilinear forms at desk scale.
//!
//! The crate is organised around a handful of small modules:
//!
//! * [`special`] — Gamma function, bracketed root-finding for the critical
//!   exponents, and an adaptive quadrature oracle.
//! * [`constants`] — closed forms for the classical Khinchine constants
//!   (real signs and Steinhaus phases), their multilinear powers, the mixed
//!   Littlewood constants, and the real-scalar case table.
//! * [`torus`] — roots of unity, the apothem of the inscribed polygon, the
//!   polygon-product Minkowski gauge, and an independent membership oracle.
//! * [`tensor`] — coefficient arrays of multilinear forms and their nested
//!   mixed sequence norms.
//! * [`norms`] — exhaustive and mixed grid norms with certified sandwich
//!   bounds, plus a seeded alternating-ascent lower bound.
//! * [`steinhaus`] — exact discrete phase averages, reproducible Monte
//!   Carlo estimates of the continuous averages, and the extremal arrays.
//! * [`verify`] — end-to-end inequality verifiers producing structured
//!   reports.
//!
//! The library is `no_std`-compatible (`alloc` required). The default
//! `std` feature additionally enables data-parallel enumeration; results
//! are bit-identical for any thread count because work is split into a
//! fixed chunk grid and reduced in chunk order.

#![cfg_attr(not(feature = "std"), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod constants;
pub mod error;
pub mod exponent;
pub(crate) mod grid;
pub mod norms;
pub mod special;
pub mod steinhaus;
pub mod tensor;
pub mod torus;
pub mod verify;

pub use error::{Error, Result};
pub use exponent::Exponent;
pub use num_complex::Complex64;
pub use tensor::ComplexTensor;

/// Execution limits for the enumeration and sampling engines.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExecPolicy {
    /// Maximum number of enumerated grid points (or Monte Carlo samples)
    /// a single operation may consume.
    pub budget: u64,
    /// Worker threads for data-parallel enumeration; `0` picks the number
    /// of available cores. Ignored (sequential) without the `std` feature.
    pub threads: usize,
}

impl ExecPolicy {
    /// Default evaluation budget: 1e8 grid points.
    pub const DEFAULT_BUDGET: u64 = 100_000_000;

    pub const fn new(budget: u64, threads: usize) -> Self {
        Self { budget, threads }
    }

    /// Sequential policy with the default budget.
    pub const fn serial() -> Self {
        Self { budget: Self::DEFAULT_BUDGET, threads: 1 }
    }
}

impl Default for ExecPolicy {
    fn default() -> Self {
        Self { budget: Self::DEFAULT_BUDGET, threads: 0 }
    }
}
