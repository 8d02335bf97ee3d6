#![no_std]
#![forbid(unsafe_code)]

//! Exact-arithmetic toolkit for cubic forms over the rationals.
//!
//! The crate is `no_std` (it needs `alloc`) and every operation is a pure
//! function of immutable inputs. It provides:
//!
//! - sparse multivariate polynomials, dense rational matrices and symmetric
//!   cubic tensors ([`poly`], [`matrix`], [`cubic`]),
//! - verified `Σ L_i·Q_i` decompositions and the linear spaces they cut out
//!   ([`hinv`]),
//! - symmetric matrix pencils, congruent diagonalization and full-rank
//!   witnesses ([`pencil`]),
//! - the quadric fibration attached to a split cubic ([`fibration`]),
//! - local solubility: solutions mod `p`, Hensel lifting, Hilbert symbols and
//!   quadric isotropy ([`local`]),
//! - the rational approximation search and the lattice point counter ([`wa`]).
//!
//! IO, file formats, parallel drivers and the command line live in the
//! companion `cubicwa` crate.

extern crate alloc;

pub mod cubic;
pub mod error;
pub mod fibration;
pub mod hinv;
pub mod lattice;
pub mod local;
pub mod matrix;
pub mod pencil;
pub mod poly;
pub mod polymat;
pub mod rat;
pub mod wa;

pub use cubic::{CubicForm, LinearChange};
pub use error::{Error, Result};
pub use matrix::Matrix;
pub use poly::Poly;
pub use polymat::PolyMatrix;
pub use rat::Rat;
