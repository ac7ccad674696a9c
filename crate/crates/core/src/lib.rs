//! Exact-arithmetic workbench for Landau-Ginzburg pairs `(W, G)`.
//!
//! The crate constructs state spaces with their bigradings and residue
//! pairing, builds Virasoro differential operators on a truncated super-Weyl
//! algebra, quantizes quadratic Hamiltonians on the symplectic loop space,
//! runs the Berglund-Huebsch/Krawitz mirror map, and verifies every identity
//! in this circle that is checkable by finite exact computation.

pub mod atoms;
pub mod catalog;
pub mod elliptic;
pub mod error;
pub mod fermat;
pub mod jacobian;
pub mod loopspace;
pub mod mirror;
pub mod cli;
pub mod poly;
pub mod rat;
pub mod report;
pub mod series;
pub mod state_space;
pub mod sympoly;
pub mod symmetry;
pub mod virasoro;
pub mod weyl;

pub use error::{Error, Result};
