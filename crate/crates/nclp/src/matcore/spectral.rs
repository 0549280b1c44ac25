//! Hermitian eigendecomposition, singular values and functional calculus.

use nalgebra::{DVector, SymmetricEigen};
use num_complex::Complex64;

use super::{CMatrix, Element, Tolerances};
use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Eigendecomposition `h = U diag(λ) U*` of one Hermitian block.
#[derive(Debug, Clone)]
pub struct BlockEig {
    pub values: Vec<f64>,
    /// `None` when the block was already diagonal; the basis is then the standard one.
    pub vectors: Option<CMatrix>,
}

impl BlockEig {
    fn rebuild(&self, f: impl Fn(f64) -> Complex64) -> CMatrix {
        let d = DVector::from_iterator(self.values.len(), self.values.iter().map(|&l| f(l)));
        match &self.vectors {
            None => CMatrix::from_diagonal(&d),
            Some(u) => {
                let mut scaled = u.clone();
                for (j, mut col) in scaled.column_iter_mut().enumerate() {
                    col *= d[j];
                }
                scaled * u.adjoint()
            }
        }
    }
}

/// Blockwise eigendecomposition of a Hermitian element.
#[derive(Debug, Clone)]
pub struct HermitianEig {
    pub blocks: Vec<BlockEig>,
}

impl HermitianEig {
    pub fn min_value(&self) -> f64 {
        self.values().fold(f64::INFINITY, f64::min)
    }

    pub fn max_value(&self) -> f64 {
        self.values().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.blocks.iter().flat_map(|b| b.values.iter().copied())
    }
}

fn is_diagonal(b: &CMatrix) -> bool {
    let n = b.nrows();
    (0..n).all(|i| (0..n).all(|j| i == j || b[(i, j)] == ZERO))
}

/// Eigendecomposition after replacing `h` by `(h + h*)/2`.
///
/// Asymmetry beyond `tol.allowed(max |h_ij|)` is rejected rather than repaired.
pub fn eigh(h: &Element, tol: &Tolerances) -> Result<HermitianEig> {
    let defect = h.hermitian_defect();
    if !tol.close(defect, h.max_abs()) {
        return Err(Error::NotHermitian { asymmetry: defect });
    }
    let blocks = h
        .blocks()
        .iter()
        .map(|b| {
            if is_diagonal(b) {
                BlockEig {
                    values: b.diagonal().iter().map(|z| z.re).collect(),
                    vectors: None,
                }
            } else {
                let herm = (b + b.adjoint()).scale(0.5);
                let e = SymmetricEigen::new(herm);
                BlockEig {
                    values: e.eigenvalues.iter().copied().collect(),
                    vectors: Some(e.eigenvectors),
                }
            }
        })
        .collect();
    Ok(HermitianEig { blocks })
}

/// Eigendecomposition of a positive semidefinite element; negative eigenvalues
/// beyond `tol.allowed(largest)` raise [`Error::NotPositive`].
pub fn eigh_positive(h: &Element, tol: &Tolerances) -> Result<HermitianEig> {
    let e = eigh(h, tol)?;
    let min = e.min_value();
    let max = e.max_value().max(0.0);
    if min < 0.0 && -min > tol.allowed(max) {
        return Err(Error::NotPositive {
            min_eigenvalue: min,
        });
    }
    Ok(e)
}

fn spectral_cutoffs(h: &Element, eig: &HermitianEig, tol: &Tolerances) -> Vec<f64> {
    let largest = eig.max_value().max(0.0);
    h.algebra()
        .block_dims()
        .iter()
        .map(|&n| tol.cutoff(largest, n))
        .collect()
}

/// Applies `f` to the spectrum of a positive element. Eigenvalues at or below
/// the rank cutoff are passed to `f` as exactly `0.0`.
pub fn func_calc(h: &Element, f: impl Fn(f64) -> Complex64, tol: &Tolerances) -> Result<Element> {
    let eig = eigh_positive(h, tol)?;
    Ok(func_calc_with(h, &eig, f, tol))
}

pub(crate) fn func_calc_with(
    h: &Element,
    eig: &HermitianEig,
    f: impl Fn(f64) -> Complex64,
    tol: &Tolerances,
) -> Element {
    let cuts = spectral_cutoffs(h, eig, tol);
    let blocks = eig
        .blocks
        .iter()
        .zip(&cuts)
        .map(|(b, &cut)| b.rebuild(|l| if l <= cut { f(0.0) } else { f(l) }))
        .collect();
    Element::from_blocks_unchecked(h.algebra(), blocks)
}

/// `t ↦ t^a` on `[0, ∞)` with `0^a := 0` for every `a`.
pub fn complex_power(t: f64, a: Complex64) -> Complex64 {
    if t <= 0.0 {
        ZERO
    } else if a == ZERO {
        ONE
    } else {
        (a * t.ln()).exp()
    }
}

/// `h^a` for positive `h` via the principal logarithm on the strictly positive
/// spectrum. Negative real parts are taken on the support only.
pub fn power_pos(h: &Element, a: Complex64, tol: &Tolerances) -> Result<Element> {
    func_calc(h, |t| complex_power(t, a), tol)
}

/// Projection onto the eigenspaces of `h` with eigenvalue `>= c`.
/// For `c = 0` this is the support of `h`.
pub fn spectral_projection(h: &Element, c: f64, tol: &Tolerances) -> Result<Element> {
    func_calc(h, |t| if t > 0.0 && t >= c { ONE } else { ZERO }, tol)
}

/// Support projection of a positive element.
pub fn support(h: &Element, tol: &Tolerances) -> Result<Element> {
    spectral_projection(h, 0.0, tol)
}

/// Thin singular value decomposition `x = U diag(s) V*` of one block.
#[derive(Debug, Clone)]
pub struct BlockSvd {
    pub u: CMatrix,
    pub s: Vec<f64>,
    pub v: CMatrix,
}

/// Blockwise SVD with the element-wide largest singular value.
#[derive(Debug, Clone)]
pub struct ElementSvd {
    pub blocks: Vec<BlockSvd>,
    pub largest: f64,
}

impl ElementSvd {
    /// Singular values above the rank cutoff, per block.
    pub fn kept(&self, dims: &[usize], tol: &Tolerances) -> Vec<Vec<bool>> {
        self.blocks
            .iter()
            .zip(dims)
            .map(|(b, &n)| {
                let cut = tol.cutoff(self.largest, n);
                b.s.iter().map(|&s| s > cut).collect()
            })
            .collect()
    }

    pub fn singular_values(&self) -> impl Iterator<Item = f64> + '_ {
        self.blocks.iter().flat_map(|b| b.s.iter().copied())
    }
}

/// Thin SVD of a dense matrix with at least as many rows as columns.
///
/// Goes through faer: nalgebra's complex bidiagonal SVD loses accuracy on
/// some nearly rank-deficient inputs.
pub fn matrix_svd(b: &CMatrix) -> BlockSvd {
    let m = faer::Mat::<Complex64>::from_fn(b.nrows(), b.ncols(), |i, j| b[(i, j)]);
    let d = m.thin_svd().expect("faer SVD did not converge");
    let (u, s, v) = (d.U(), d.S(), d.V());
    BlockSvd {
        u: CMatrix::from_fn(u.nrows(), u.ncols(), |i, j| u[(i, j)]),
        s: (0..s.dim()).map(|k| s[k].re).collect(),
        v: CMatrix::from_fn(v.nrows(), v.ncols(), |i, j| v[(i, j)]),
    }
}

pub fn svd(x: &Element) -> ElementSvd {
    let blocks: Vec<BlockSvd> = x
        .blocks()
        .iter()
        .map(|b| {
            let n = b.nrows();
            if is_diagonal(b) {
                // diagonal blocks: x = diag(phase) · diag(|x_ii|) · 1
                let mut u = CMatrix::identity(n, n);
                let mut s = Vec::with_capacity(n);
                for i in 0..n {
                    let z = b[(i, i)];
                    let r = z.norm();
                    s.push(r);
                    if r > 0.0 {
                        u[(i, i)] = z / r;
                    }
                }
                BlockSvd {
                    u,
                    s,
                    v: CMatrix::identity(n, n),
                }
            } else {
                matrix_svd(b)
            }
        })
        .collect();
    let largest = blocks
        .iter()
        .flat_map(|b| b.s.iter().copied())
        .fold(0.0, f64::max);
    ElementSvd { blocks, largest }
}

/// All singular values of `x`, block by block.
pub fn singular_values(x: &Element) -> Vec<f64> {
    svd(x).singular_values().collect()
}

/// Largest singular value over all blocks.
pub fn operator_norm(x: &Element) -> f64 {
    svd(x).largest
}
