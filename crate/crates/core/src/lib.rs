//! Parametrising families for the gauge-invariant ideals of Toeplitz–Nica–Pimsner
//! algebras of proper product systems over `Z_+^k`, computed at the level of vertex
//! sets.
//!
//! Two finite models are supported: row-finite higher-rank graphs given by their
//! commuting coloured adjacency matrices ([`KGraphSkeleton`]), and C*-dynamical
//! systems over `c0(V)` given by commuting partial maps ([`PartialMapSystem`]).
//! Both expose the inverse-image operators `Φ_i` through [`DirectionModel`], and
//! everything else is written against that trait:
//!
//! - [`calculus`] builds `Φ_n`, the families `J` and `I`, `X_F^{-1}`, `J_F(·)`,
//!   `L_inv,F` and `L_lim,F`;
//! - [`checks`] decides invariance, partial order, T-families, NT-tuples and
//!   relative O-families, reporting a canonical witness on failure;
//! - [`enumerate`] lists T-families and relative O-families with a pruned search;
//! - [`lattice`] orders the enumerated families and computes covers.
//!
//! The crate is `no_std` and only needs `alloc`.
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod calculus;
pub mod checks;
pub mod dynsys;
pub mod enumerate;
mod error;
pub mod family;
pub mod fixtures;
pub mod kgraph;
pub mod lattice;
pub mod model;
pub mod sets;

pub use checks::{CheckReport, Condition, Witness};
pub use dynsys::PartialMapSystem;
pub use enumerate::{Budget, EnumerationResult, Mode};
pub use error::{Error, Result};
pub use family::IdealFamily;
pub use kgraph::KGraphSkeleton;
pub use lattice::LatticeGraph;
pub use model::{DirectionModel, Model, ModelKind, TabulatedModel};
pub use sets::{MultiDegree, SubsetMask, VertexSet};
