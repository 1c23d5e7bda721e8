//! Vertex nomination on pairs of richly featured graphs.
//!
//! The crate has two halves. The exact half works on small enumerable
//! distributions over featured graph pairs and builds Bayes-optimal
//! nomination schemes together with their losses and information
//! diagnostics ([`featured_graph`], [`models`], [`oracle`]). The numerical
//! half is the spectral nomination pipeline for larger graphs
//! ([`spectral`], [`gmm_nominate`]).
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;

pub mod error;
pub mod featured_graph;
pub mod gmm_nominate;
pub mod models;
pub mod oracle;
pub mod rng;
pub mod spectral;
pub mod sum;

pub use error::{Error, Result};
