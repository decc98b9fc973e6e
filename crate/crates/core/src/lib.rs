//! Exact hidden-subgroup machinery for nil-2 p-groups of exponent p.
//!
//! The crate is organised bottom-up:
//!
//! - [`fp`] and [`fplinalg`]: the prime field and dense linear algebra over it.
//! - [`quadsys`]: the constructive solver for `Σ u_i j_i² = Σ u_i j_i = 0`.
//! - [`nil2`]: group arithmetic from structure constants, automorphisms φ_j, oracles.
//! - [`qsim`]: exact simulation of coset states, hiding sets and Fourier sampling.
//! - [`reduction`]: Sylow splitting, normalizer iteration and G* on explicit groups.

pub mod error;
pub mod fp;
pub mod fplinalg;
pub mod nil2;
pub mod qsim;
pub mod quadsys;
pub mod reduction;

use num_bigint::BigInt;
use num_rational::BigRational;

pub use error::{Error, Result};
pub use fp::{FpElem, Prime};
pub use fplinalg::{FpMatrix, FpVector};
pub use nil2::{Element, GroupSpec};
pub use qsim::cyclotomic::Cyclotomic;
pub use quadsys::{QuadLinSystem, Solution};

/// Cyclotomic integers with machine coefficients: state amplitudes.
pub type CycInt = Cyclotomic<i64>;
/// Cyclotomic integers with unbounded coefficients: tensor-product inner products.
pub type BigCycInt = Cyclotomic<BigInt>;
/// Elements of Q(ω): normalized Gram entries and Fourier weights.
pub type RatCycInt = Cyclotomic<BigRational>;
