//! Exact-arithmetic engine for the intermediate Wakimoto realization of
//! affine sl(n+1) on a Fock space, with mechanical checks of its relations
//! and structural properties.

pub mod algebra;
pub mod error;
pub mod linalg;
pub mod oscillator;
pub mod rational;
pub mod relations;
pub mod report;
pub mod sl2;
pub mod sparse;
pub mod structure;
pub mod wakimoto;
pub mod workspace;

pub use algebra::{FockPoly, Monomial, Params, VarId, Weight};
pub use error::{Error, Result};
pub use rational::Rational;
