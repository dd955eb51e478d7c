//! Exact computer algebra for the loop-Witt algebra τ = (A ⋊ Der A) ⊗ B,
//! its tensor-field modules F^α(μ, c) and the operator identities they
//! satisfy. All arithmetic is over the Gaussian rationals, so every identity
//! check is a test for an exactly zero residual.

pub mod coeffalg;
pub mod error;
pub mod glnrep;
pub mod linalg;
pub mod loopalg;
pub mod opcheck;
mod rat;
pub mod report;
pub mod scalar;
pub mod suites;
pub mod syntax;
pub mod tensmod;

pub use coeffalg::{BElem, BKind, BPresentation, BRef};
pub use error::{Error, Result};
pub use glnrep::{build_irrep, burnside_dim, weyl_dim, DominantWeight, Irrep};
pub use linalg::Matrix;
pub use loopalg::{Degree, Key, Kind, LoopAlgebra, LoopElem};
pub use opcheck::{OpFamily, OpResidual, OpSpec, Operator, SubspaceBasis};
pub use report::{Failure, IdentityReport};
pub use scalar::GaussRat;
pub use suites::{run_config, RunConfig, Validated, SUITES};
pub use tensmod::{ModVector, Mode, TensorModule, Window};
