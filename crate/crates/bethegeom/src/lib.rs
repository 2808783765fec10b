//! Numerical realization of the XXZ / quantum K-theory / QQ-system / tRS
//! correspondence: spin-chain operators, Bethe roots, vertex functions,
//! Miura opers and quantum Wronskians, each checkable against the others.

pub mod bethe;
pub mod error;
pub mod numerics;
pub mod qq;
pub mod spinchain;
pub mod vertex;

pub use error::{Error, Result};
pub use numerics::{c64, Polynomial, Precision, TruncatedSeries, C64};
pub use spinchain::{ChainSpec, Operator, SpinBasisIndex};
