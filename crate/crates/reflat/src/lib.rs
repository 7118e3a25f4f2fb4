//! Exact-arithmetic toolkit for lattice polytopes: facet enumeration,
//! lattice points, polar duality, canonical normal forms, weight systems,
//! classification of reflexive classes in low dimension, and the involution
//! statistics used to estimate the size of unclassified populations.

pub mod classify;
pub mod db;
pub mod error;
pub mod hull;
pub mod ipc;
pub mod linalg;
pub mod normal_form;
pub mod polytope;
pub mod stats;
pub mod weights;

pub use error::{Error, Result};
