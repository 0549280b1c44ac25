use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::BlockAlgebra;
use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

/// A block-diagonal complex matrix in a [`BlockAlgebra`].
#[derive(Debug, Clone, PartialEq)]
pub struct Element {
    algebra: BlockAlgebra,
    blocks: Vec<CMatrix>,
}

impl Element {
    /// Validates block count and shapes against the algebra.
    pub fn new(algebra: &BlockAlgebra, blocks: Vec<CMatrix>) -> Result<Self> {
        let dims = algebra.block_dims();
        if blocks.len() != dims.len() {
            return Err(Error::BlockCount {
                expected: dims.len(),
                found: blocks.len(),
            });
        }
        for (k, (b, &n)) in blocks.iter().zip(dims).enumerate() {
            if b.nrows() != n || b.ncols() != n {
                return Err(Error::ShapeMismatch {
                    block: k,
                    expected: n,
                    rows: b.nrows(),
                    cols: b.ncols(),
                });
            }
        }
        Ok(Self {
            algebra: algebra.clone(),
            blocks,
        })
    }

    /// Builds an element from row-major nested vectors, one per block.
    pub fn from_rows(algebra: &BlockAlgebra, rows: &[Vec<Vec<Complex64>>]) -> Result<Self> {
        let mut blocks = Vec::with_capacity(rows.len());
        for (k, b) in rows.iter().enumerate() {
            let r = b.len();
            let c = b.first().map_or(0, Vec::len);
            if b.iter().any(|row| row.len() != c) {
                return Err(Error::ShapeMismatch {
                    block: k,
                    expected: algebra.block_dims().get(k).copied().unwrap_or(0),
                    rows: r,
                    cols: b.iter().map(Vec::len).max().unwrap_or(0),
                });
            }
            blocks.push(CMatrix::from_fn(r, c, |i, j| b[i][j]));
        }
        Self::new(algebra, blocks)
    }

    /// Real-valued convenience constructor.
    pub fn from_real_rows(algebra: &BlockAlgebra, rows: &[Vec<Vec<f64>>]) -> Result<Self> {
        let c: Vec<Vec<Vec<Complex64>>> = rows
            .iter()
            .map(|b| {
                b.iter()
                    .map(|r| r.iter().map(|&v| Complex64::new(v, 0.0)).collect())
                    .collect()
            })
            .collect();
        Self::from_rows(algebra, &c)
    }

    pub(crate) fn from_blocks_unchecked(algebra: &BlockAlgebra, blocks: Vec<CMatrix>) -> Self {
        debug_assert_eq!(algebra.num_blocks(), blocks.len());
        Self {
            algebra: algebra.clone(),
            blocks,
        }
    }

    pub fn zero(algebra: &BlockAlgebra) -> Self {
        let blocks = algebra
            .block_dims()
            .iter()
            .map(|&n| CMatrix::zeros(n, n))
            .collect();
        Self::from_blocks_unchecked(algebra, blocks)
    }

    pub fn identity(algebra: &BlockAlgebra) -> Self {
        Self::scalar(algebra, Complex64::new(1.0, 0.0))
    }

    pub fn scalar(algebra: &BlockAlgebra, c: Complex64) -> Self {
        let blocks = algebra
            .block_dims()
            .iter()
            .map(|&n| CMatrix::from_diagonal_element(n, n, c))
            .collect();
        Self::from_blocks_unchecked(algebra, blocks)
    }

    /// Element whose diagonal, read across all blocks in order, is `diag`.
    pub fn diagonal(algebra: &BlockAlgebra, diag: &[Complex64]) -> Result<Self> {
        if diag.len() != algebra.space_dim() {
            return Err(Error::DimensionMismatch {
                expected: algebra.space_dim(),
                found: diag.len(),
            });
        }
        let mut off = 0;
        let blocks = algebra
            .block_dims()
            .iter()
            .map(|&n| {
                let d = DVector::from_column_slice(&diag[off..off + n]);
                off += n;
                CMatrix::from_diagonal(&d)
            })
            .collect();
        Ok(Self::from_blocks_unchecked(algebra, blocks))
    }

    pub fn real_diagonal(algebra: &BlockAlgebra, diag: &[f64]) -> Result<Self> {
        let d: Vec<Complex64> = diag.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        Self::diagonal(algebra, &d)
    }

    /// The matrix unit `e_ij` in block `block`.
    pub fn matrix_unit(algebra: &BlockAlgebra, block: usize, i: usize, j: usize) -> Self {
        let mut e = Self::zero(algebra);
        e.blocks[block][(i, j)] = Complex64::new(1.0, 0.0);
        e
    }

    pub fn algebra(&self) -> &BlockAlgebra {
        &self.algebra
    }

    pub fn blocks(&self) -> &[CMatrix] {
        &self.blocks
    }

    pub fn block(&self, k: usize) -> &CMatrix {
        &self.blocks[k]
    }

    pub fn into_blocks(self) -> Vec<CMatrix> {
        self.blocks
    }

    pub(crate) fn map_blocks(&self, f: impl FnMut(&CMatrix) -> CMatrix) -> Self {
        Self::from_blocks_unchecked(&self.algebra, self.blocks.iter().map(f).collect())
    }

    fn zip_blocks(
        &self,
        other: &Element,
        mut f: impl FnMut(&CMatrix, &CMatrix) -> CMatrix,
    ) -> Result<Self> {
        self.algebra.ensure_compatible(&other.algebra)?;
        let blocks = self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| f(a, b))
            .collect();
        Ok(Self::from_blocks_unchecked(&self.algebra, blocks))
    }

    pub fn mul(&self, other: &Element) -> Result<Self> {
        self.zip_blocks(other, |a, b| a * b)
    }

    pub fn add(&self, other: &Element) -> Result<Self> {
        self.zip_blocks(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Element) -> Result<Self> {
        self.zip_blocks(other, |a, b| a - b)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        self.map_blocks(|b| b * c)
    }

    pub fn scale_real(&self, c: f64) -> Self {
        self.scale(Complex64::new(c, 0.0))
    }

    /// Conjugate transpose, blockwise.
    pub fn adjoint(&self) -> Self {
        self.map_blocks(|b| b.adjoint())
    }

    /// `(x + x*) / 2`.
    pub fn hermitian_part(&self) -> Self {
        self.map_blocks(|b| (b + b.adjoint()).scale(0.5))
    }

    /// Largest entrywise modulus of `x - x*`.
    pub fn hermitian_defect(&self) -> f64 {
        self.blocks
            .iter()
            .map(|b| (b - b.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max))
            .fold(0.0, f64::max)
    }

    /// Sum of the diagonal entries of all blocks.
    pub fn trace(&self) -> Complex64 {
        self.blocks.iter().map(|b| b.trace()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.iter().all(|b| b.iter().all(|z| *z == Complex64::new(0.0, 0.0)))
    }

    pub fn max_abs(&self) -> f64 {
        self.blocks
            .iter()
            .flat_map(|b| b.iter())
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// Hilbert–Schmidt norm `trace(x*x)^{1/2}`.
    pub fn frobenius_norm(&self) -> f64 {
        self.blocks
            .iter()
            .flat_map(|b| b.iter())
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Entries in vectorization order (blocks concatenated, each row-major).
    pub fn to_vector(&self) -> DVector<Complex64> {
        let mut v = Vec::with_capacity(self.algebra.total_dim());
        for b in &self.blocks {
            for i in 0..b.nrows() {
                for j in 0..b.ncols() {
                    v.push(b[(i, j)]);
                }
            }
        }
        DVector::from_vec(v)
    }

    pub fn from_vector(algebra: &BlockAlgebra, v: &DVector<Complex64>) -> Result<Self> {
        if v.len() != algebra.total_dim() {
            return Err(Error::DimensionMismatch {
                expected: algebra.total_dim(),
                found: v.len(),
            });
        }
        let mut off = 0;
        let blocks = algebra
            .block_dims()
            .iter()
            .map(|&n| {
                let m = CMatrix::from_fn(n, n, |i, j| v[off + i * n + j]);
                off += n * n;
                m
            })
            .collect();
        Ok(Self::from_blocks_unchecked(algebra, blocks))
    }

    /// Assembles an element of `M ⊗ End(C^m)` from an `m×m` grid of elements of `M`.
    /// `None` entries are zero.
    pub fn amplified(algebra: &BlockAlgebra, grid: &[Vec<Option<&Element>>]) -> Result<Self> {
        let m = grid.len();
        let big = algebra.amplify(m)?;
        let mut blocks: Vec<CMatrix> = big
            .block_dims()
            .iter()
            .map(|&n| CMatrix::zeros(n, n))
            .collect();
        for (r, row) in grid.iter().enumerate() {
            if row.len() != m {
                return Err(Error::DimensionMismatch {
                    expected: m,
                    found: row.len(),
                });
            }
            for (c, entry) in row.iter().enumerate() {
                let Some(e) = entry else { continue };
                algebra.ensure_compatible(e.algebra())?;
                for (k, &n) in algebra.block_dims().iter().enumerate() {
                    blocks[k]
                        .view_mut((r * n, c * n), (n, n))
                        .copy_from(&e.blocks[k]);
                }
            }
        }
        Ok(Self::from_blocks_unchecked(&big, blocks))
    }

    /// Entry `(r, c)` of an element of `M ⊗ End(C^m)` viewed as an `m×m` grid over `M`.
    pub fn amplified_entry(&self, algebra: &BlockAlgebra, m: usize, r: usize, c: usize) -> Result<Self> {
        self.algebra.ensure_compatible(&algebra.amplify(m)?)?;
        let blocks = algebra
            .block_dims()
            .iter()
            .enumerate()
            .map(|(k, &n)| self.blocks[k].view((r * n, c * n), (n, n)).into_owned())
            .collect();
        Ok(Self::from_blocks_unchecked(algebra, blocks))
    }
}

impl Add for &Element {
    type Output = Element;
    /// Panics on incompatible algebras; use [`Element::add`] to get an error instead.
    fn add(self, rhs: &Element) -> Element {
        Element::add(self, rhs).expect("incompatible algebras")
    }
}

impl Sub for &Element {
    type Output = Element;
    fn sub(self, rhs: &Element) -> Element {
        Element::sub(self, rhs).expect("incompatible algebras")
    }
}

impl Mul for &Element {
    type Output = Element;
    fn mul(self, rhs: &Element) -> Element {
        Element::mul(self, rhs).expect("incompatible algebras")
    }
}

impl Neg for &Element {
    type Output = Element;
    fn neg(self) -> Element {
        self.map_blocks(|b| -b)
    }
}
