//! Combinatorics of extended affine Weyl groups: admissible sets, straight
//! σ-conjugacy classes, basic EKOR strata and their Deligne–Lusztig data,
//! with the Siegel case (`GSp_2g`, minuscule `μ`) worked out explicitly.

pub mod admissible;
pub mod affine;
pub mod cli;
pub mod coxeter;
pub mod ekor;
pub mod error;
pub mod export;
pub mod lattice;
pub mod oracle;
pub mod root_datum;
pub mod siegel;

pub use affine::{AffineWeylGroup, ExtAffineElement, NewtonPoint, OmegaElement, Pi1Class, ReducedDecomposition, WeylElement};
pub use coxeter::{CoxeterMatrix, DiagramMap, FiniteTypeLabel, NodeSubset};
pub use error::{AtlasError, Result};
pub use root_datum::RootDatum;
