//! Exact Hochschild-Mitchell homology and cohomology of finite linear categories
//! with finite group actions: skew categories, matrix categories and Galois
//! quotients, conjugacy-class decompositions, and the comparison maps between
//! (co)invariants of a category and the trivial-class part of its skew category.

pub mod check;
pub mod cohomology;
pub mod constructions;
pub mod error;
pub mod fixtures;
pub mod group;
pub mod hochschild;
pub mod lincat;
pub mod linalg;
pub mod verify;

pub use error::{Error, Result};
