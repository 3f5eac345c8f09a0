//! Exact counting of "lattice" Jenkins-Strebel differentials on the sphere.
//!
//! The crate computes the local polynomials `F_{m,n}` counting half-integer
//! metric ribbon graphs, assembles them over decorated trees into the
//! Masur-Veech volumes of the strata `Q(1^K, -1^{K+4})`, and checks the
//! results against two independent oracles: brute-force ribbon graph lattice
//! enumeration and a character-theoretic count of pillowcase covers.

pub mod arith;
pub mod cli;
pub mod covers;
pub mod error;
pub mod linalg;
pub mod local;
pub mod poly;
pub mod ribbon;
pub mod tree;

pub use arith::{zeta_even, BigRational, PiValue};
pub use error::{Error, Result};
pub use local::LayerSignature;
pub use poly::{Monomial, Polynomial, RationalFunction};
