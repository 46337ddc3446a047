//! Finite-dimensional verification of crossed products by Hilbert C*-bimodules.
//!
//! The crate builds Hilbert bimodules over block matrix algebras, truncated Fock
//! modules with their creation operators, the representations `Λ` and `π`, the
//! gauge action and its spectral projections, and the Fourier picture over the
//! circle. Every identity is checked numerically and recorded in a [`Report`].

pub mod algebra;
pub mod bimodule;
pub mod circle;
pub mod crossed;
pub mod error;
pub mod fock;
pub mod instance;
pub mod linalg;
pub mod report;
pub mod suites;

pub use algebra::{AlgElem, Algebra, Automorphism};
pub use bimodule::{BimElem, Bimodule, Side};
pub use error::{Error, Result};
pub use fock::{GradedOp, GradedVec, Window};
pub use report::{Entry, Report};
