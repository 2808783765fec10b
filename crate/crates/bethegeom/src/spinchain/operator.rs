use crate::error::{Error, Result};
use crate::numerics::linalg::{frobenius, CMat};
use crate::numerics::scalar::c64;

use super::basis::{binomial, block_basis, block_indices, full_basis, SpinBasisIndex};

/// Dense operator on the 2^n space or on one weight-k block.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    matrix: CMat,
    n: usize,
    block: Option<usize>,
}

impl Operator {
    pub fn full(n: usize, matrix: CMat) -> Self {
        assert_eq!(matrix.shape(), (1 << n, 1 << n), "full operator shape");
        Self { matrix, n, block: None }
    }

    pub fn block(n: usize, k: usize, matrix: CMat) -> Self {
        let d = binomial(n, k);
        assert_eq!(matrix.shape(), (d, d), "weight block shape");
        Self {
            matrix,
            n,
            block: Some(k),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::full(n, CMat::identity(1 << n, 1 << n))
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMat {
        self.matrix
    }

    pub fn sites(&self) -> usize {
        self.n
    }

    pub fn weight_block(&self) -> Option<usize> {
        self.block
    }

    pub fn basis(&self) -> Vec<SpinBasisIndex> {
        match self.block {
            Some(k) => block_basis(self.n, k),
            None => full_basis(self.n),
        }
    }

    /// Restriction of a full operator to the weight-k block.
    pub fn restrict(&self, k: usize) -> Result<Operator> {
        if self.block.is_some() {
            return Err(Error::DimensionMismatch("operator is already a block".into()));
        }
        if k > self.n {
            return Err(Error::IndexOutOfRange(format!("block {k} of {} sites", self.n)));
        }
        let idx = block_indices(self.n, k);
        let m = CMat::from_fn(idx.len(), idx.len(), |i, j| self.matrix[(idx[i], idx[j])]);
        Ok(Operator::block(self.n, k, m))
    }

    /// Assembles a full operator from its weight blocks.
    pub fn from_blocks(n: usize, blocks: &[CMat]) -> Result<Operator> {
        if blocks.len() != n + 1 {
            return Err(Error::DimensionMismatch(format!(
                "{} blocks for {n} sites",
                blocks.len()
            )));
        }
        let mut m = CMat::from_element(1 << n, 1 << n, c64(0.0, 0.0));
        for (k, b) in blocks.iter().enumerate() {
            let idx = block_indices(n, k);
            if b.shape() != (idx.len(), idx.len()) {
                return Err(Error::DimensionMismatch(format!("block {k} has wrong shape")));
            }
            for (i, &ii) in idx.iter().enumerate() {
                for (j, &jj) in idx.iter().enumerate() {
                    m[(ii, jj)] = b[(i, j)];
                }
            }
        }
        Ok(Operator::full(n, m))
    }

    /// Largest modulus among entries coupling different weights.
    pub fn off_block_max(&self) -> f64 {
        if self.block.is_some() {
            return 0.0;
        }
        let dim = 1usize << self.n;
        let mut worst: f64 = 0.0;
        for i in 0..dim {
            for j in 0..dim {
                if i.count_ones() != j.count_ones() {
                    worst = worst.max(self.matrix[(i, j)].norm());
                }
            }
        }
        worst
    }

    pub fn compose(&self, rhs: &Operator) -> Result<Operator> {
        self.check_compatible(rhs)?;
        Ok(Operator {
            matrix: &self.matrix * &rhs.matrix,
            n: self.n,
            block: self.block,
        })
    }

    pub fn check_compatible(&self, rhs: &Operator) -> Result<()> {
        if self.n != rhs.n || self.block != rhs.block {
            return Err(Error::DimensionMismatch(format!(
                "operators on (n={}, block={:?}) and (n={}, block={:?})",
                self.n, self.block, rhs.n, rhs.block
            )));
        }
        Ok(())
    }

    pub fn norm(&self) -> f64 {
        frobenius(&self.matrix)
    }
}

/// ‖[A,B]‖ / (‖A‖‖B‖) in the Frobenius norm.
pub fn relative_commutator(a: &Operator, b: &Operator) -> Result<f64> {
    a.check_compatible(b)?;
    let c = a.matrix() * b.matrix() - b.matrix() * a.matrix();
    let den = a.norm() * b.norm();
    Ok(if den == 0.0 { frobenius(&c) } else { frobenius(&c) / den })
}
