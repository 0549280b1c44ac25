use super::{BlockAlgebra, CMatrix, Element};
use crate::error::{Error, Result};

/// A complex-linear map between block algebras, stored as a dense matrix
/// acting on vectorized elements (see [`Element::to_vector`]).
#[derive(Debug, Clone, PartialEq)]
pub struct LinearMap {
    domain: BlockAlgebra,
    codomain: BlockAlgebra,
    matrix: CMatrix,
}

impl LinearMap {
    pub fn new(domain: &BlockAlgebra, codomain: &BlockAlgebra, matrix: CMatrix) -> Result<Self> {
        if matrix.ncols() != domain.total_dim() {
            return Err(Error::DimensionMismatch {
                expected: domain.total_dim(),
                found: matrix.ncols(),
            });
        }
        if matrix.nrows() != codomain.total_dim() {
            return Err(Error::DimensionMismatch {
                expected: codomain.total_dim(),
                found: matrix.nrows(),
            });
        }
        Ok(Self {
            domain: domain.clone(),
            codomain: codomain.clone(),
            matrix,
        })
    }

    /// Tabulates `f` on the matrix-unit basis of `domain`.
    pub fn from_fn(
        domain: &BlockAlgebra,
        codomain: &BlockAlgebra,
        f: impl Fn(&Element) -> Result<Element>,
    ) -> Result<Self> {
        let mut matrix = CMatrix::zeros(codomain.total_dim(), domain.total_dim());
        for (col, (k, i, j)) in domain.matrix_units().enumerate() {
            let image = f(&Element::matrix_unit(domain, k, i, j))?;
            codomain.ensure_compatible(image.algebra())?;
            matrix.set_column(col, &image.to_vector());
        }
        Ok(Self {
            domain: domain.clone(),
            codomain: codomain.clone(),
            matrix,
        })
    }

    pub fn identity(algebra: &BlockAlgebra) -> Self {
        let n = algebra.total_dim();
        Self {
            domain: algebra.clone(),
            codomain: algebra.clone(),
            matrix: CMatrix::identity(n, n),
        }
    }

    pub fn domain(&self) -> &BlockAlgebra {
        &self.domain
    }

    pub fn codomain(&self) -> &BlockAlgebra {
        &self.codomain
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn apply(&self, x: &Element) -> Result<Element> {
        self.domain.ensure_compatible(x.algebra())?;
        Element::from_vector(&self.codomain, &(&self.matrix * x.to_vector()))
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &LinearMap) -> Result<LinearMap> {
        self.domain.ensure_compatible(&inner.codomain)?;
        Ok(Self {
            domain: inner.domain.clone(),
            codomain: self.codomain.clone(),
            matrix: &self.matrix * &inner.matrix,
        })
    }

    pub fn scale(&self, c: f64) -> Self {
        Self {
            matrix: self.matrix.scale(c),
            ..self.clone()
        }
    }
}
