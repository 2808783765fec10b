//! XXZ spin-chain operators on the 2^n space: evaluation modules,
//! L-operators, monodromy and transfer matrices, Bethe vectors, R-matrices,
//! qKZ operators and Baxter Q-operators.

pub mod basis;
pub mod chain;
pub mod monodromy;
pub mod operator;
pub mod qop;
pub mod rmatrix;
pub mod site;

pub use basis::{binomial, block_basis, block_indices, combinations, SpinBasisIndex};
pub use chain::ChainSpec;
pub use monodromy::{
    apply_b, bethe_vector, bethe_vector_full, monodromy, monodromy_twisted, transfer, transfer_eigenvalue, vacuum,
    vacuum_eigenvalues, Monodromy,
};
pub use operator::{relative_commutator, Operator};
pub use qop::{
    classical_exterior_power, fixed_point_basis, operator_identity_residuals, q_operator, quantum_exterior_power,
    BaxterPair, FixedPointBasis, IdentityResiduals, QSign, UniversalFormula,
};
pub use rmatrix::{embed_one_site, embed_two_site, qkz_operator, r_matrix};
pub use site::{evaluation_module, l_operator, LOperator, SiteRep};
