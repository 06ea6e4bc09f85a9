//! Planar W-calculus diagrams.
//!
//! Diagrams are built as [`term::TermDiagram`]s and evaluated three ways: a
//! dense oracle ([`oracle`]), a polynomial-time matching count on the planar
//! graph form ([`fkt`]), and rewriting to a reduced WGS-X triple
//! ([`rewrite`]), on which semantic equality is decided. [`matchgate`] covers
//! the tensor side: matchgate identities, closure operations and synthesis.
//!
//! The crate is `no_std` and needs only `alloc`.

#![no_std]

extern crate alloc;

pub mod arc;
pub mod bits;
pub mod complex;
pub mod fkt;
pub mod graph;
pub mod logc;
pub mod matchgate;
pub mod oracle;
pub mod rewrite;
pub mod tensor;
pub mod term;

pub use bits::BitWord;
pub use complex::{Complex, Tolerance};
pub use logc::LogComplex;
pub use tensor::Tensor;
pub use term::{Generator, TermDiagram};
