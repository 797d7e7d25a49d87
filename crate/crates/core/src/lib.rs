//! Exact arithmetic for b-KLR algebras: diagram words, the faithful polynomial
//! representation, the tightened basis with a rewriting normal form, the
//! differential `d_N` and its homology, and a quantum-group side (Verma
//! modules, Shapovalov form, formal Laurent series) to compare against.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;

pub mod basisrewrite;
pub mod cartan;
pub mod dgstruct;
pub mod diagram;
pub mod error;
pub mod linalg;
pub mod polyrep;
pub mod qside;
pub mod relations;
pub mod scalar;
pub mod series;

pub use error::Error;
pub use scalar::Scalar;

/// Dense label index into [`cartan::CartanDatum::labels`].
pub type Label = usize;
