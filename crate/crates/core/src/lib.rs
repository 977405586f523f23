//! Numerical laboratory for Hardy spaces `H^p`, the derivative spaces
//! `S_n^p` / `S_{n,0}^p`, the operator `T = M_z + n·T_z`, and the
//! invariant subspaces `J(G; K_0, …, K_{n−1})`, all computed on truncated
//! power series.

pub mod cli;
pub mod error;
pub mod ideal;
pub mod inner;
pub mod norms;
pub mod operators;
pub mod random;
pub mod report;
pub mod series;
pub mod verify;

pub use error::{Error, Result};
pub use ideal::{membership, sample_element, validate_spec, SubspaceSpec};
pub use inner::InnerFunction;
pub use norms::{hp_norm, sn_norm, QuadratureConfig, QuadratureMode, SpaceParams};
pub use operators::OperatorDescriptor;
pub use report::{ClaimResult, VerificationReport};
pub use series::{ExactSeries, Series, TaylorSeries};
