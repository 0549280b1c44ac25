use crate::error::{Error, Result};

/// A finite-dimensional von Neumann algebra `M_{n_1} ⊕ … ⊕ M_{n_k}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BlockAlgebra {
    dims: Vec<usize>,
}

impl BlockAlgebra {
    pub fn new(block_dims: impl Into<Vec<usize>>) -> Result<Self> {
        let dims = block_dims.into();
        if dims.is_empty() || dims.contains(&0) {
            return Err(Error::InvalidAlgebra);
        }
        Ok(Self { dims })
    }

    /// The full matrix algebra `M_n`.
    pub fn full(n: usize) -> Result<Self> {
        Self::new(vec![n])
    }

    /// The commutative algebra `C^n` (n one-dimensional blocks).
    pub fn diagonal(n: usize) -> Result<Self> {
        Self::new(vec![1; n])
    }

    pub fn block_dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn num_blocks(&self) -> usize {
        self.dims.len()
    }

    /// Complex dimension of the algebra, `Σ n_k²`.
    pub fn total_dim(&self) -> usize {
        self.dims.iter().map(|n| n * n).sum()
    }

    /// Dimension of the Hilbert space the algebra acts on, `Σ n_k`.
    pub fn space_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn is_commutative(&self) -> bool {
        self.dims.iter().all(|&n| n == 1)
    }

    pub fn ensure_compatible(&self, other: &BlockAlgebra) -> Result<()> {
        if self.dims == other.dims {
            Ok(())
        } else {
            Err(Error::IncompatibleAlgebras {
                left: self.dims.clone(),
                right: other.dims.clone(),
            })
        }
    }

    /// `M ⊗ End(C^m)`: every block dimension multiplied by `m`.
    pub fn amplify(&self, m: usize) -> Result<Self> {
        Self::new(self.dims.iter().map(|n| n * m).collect::<Vec<_>>())
    }

    /// Matrix-unit basis in vectorization order: `(block, row, col)`.
    pub fn matrix_units(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        self.dims
            .iter()
            .enumerate()
            .flat_map(|(k, &n)| (0..n).flat_map(move |i| (0..n).map(move |j| (k, i, j))))
    }
}
