use num_complex::Complex64;

use super::graded::{holder_witness, holder_witness_imaginary, lnorm, GradedElement, GRADING_SLACK};
use crate::error::{Error, Result};
use crate::matcore::{BlockAlgebra, Element, LinearMap, Tolerances};

/// A right `M`-module map `L_b(M) → L_{a+b}(M)`, stored as a linear map on
/// tracial coordinates together with its source and target gradings.
#[derive(Debug, Clone, PartialEq)]
pub struct ModuleHom {
    source_grading: Complex64,
    target_grading: Complex64,
    map: LinearMap,
}

impl ModuleHom {
    /// Wraps a linear map. Right-linearity is checked by [`hom_to_element`].
    pub fn new(map: LinearMap, source_grading: Complex64, target_grading: Complex64) -> Result<Self> {
        map.domain().ensure_compatible(map.codomain())?;
        Ok(Self {
            source_grading,
            target_grading,
            map,
        })
    }

    pub fn identity(algebra: &BlockAlgebra, b: Complex64) -> Self {
        Self {
            source_grading: b,
            target_grading: b,
            map: LinearMap::identity(algebra),
        }
    }

    pub fn algebra(&self) -> &BlockAlgebra {
        self.map.domain()
    }

    pub fn source_grading(&self) -> Complex64 {
        self.source_grading
    }

    pub fn target_grading(&self) -> Complex64 {
        self.target_grading
    }

    /// `(a+b) − b`, the grading of the element this map multiplies by.
    pub fn degree(&self) -> Complex64 {
        self.target_grading - self.source_grading
    }

    pub fn map(&self) -> &LinearMap {
        &self.map
    }

    pub fn apply(&self, eta: &GradedElement) -> Result<GradedElement> {
        if (eta.grading() - self.source_grading).norm() > GRADING_SLACK {
            return Err(Error::GradingMismatch {
                expected: self.source_grading,
                found: eta.grading(),
            });
        }
        GradedElement::new(self.map.apply(eta.data())?, self.target_grading)
    }

    /// Worst relative defect of `T(η·p) = T(η)·p` over matrix units `η`, `p`,
    /// with the pair of basis indices where it occurs.
    pub fn right_linearity_defect(&self) -> Result<(f64, (usize, usize))> {
        let alg = self.algebra();
        let units: Vec<(usize, usize, usize)> = alg.matrix_units().collect();
        let images: Vec<Element> = units
            .iter()
            .map(|&(k, i, j)| self.map.apply(&Element::matrix_unit(alg, k, i, j)))
            .collect::<Result<_>>()?;
        let mut offsets = Vec::with_capacity(alg.num_blocks());
        let mut acc = 0;
        for &n in alg.block_dims() {
            offsets.push(acc);
            acc += n * n;
        }
        let zero = Element::zero(alg);
        let scale = self.map.matrix().iter().map(|z| z.norm()).fold(0.0, f64::max);
        let mut worst = (0.0, (0, 0));
        for (s, &(k1, i, j)) in units.iter().enumerate() {
            for (t, &(k2, m, l)) in units.iter().enumerate() {
                // e_ij·e_ml = δ_jm e_il within one block
                let lhs = if k1 == k2 && j == m {
                    &images[offsets[k1] + i * alg.block_dims()[k1] + l]
                } else {
                    &zero
                };
                let rhs = images[s].mul(&Element::matrix_unit(alg, k2, m, l))?;
                let res = lhs.sub(&rhs)?.max_abs();
                let rel = if scale > 0.0 { res / scale } else { res };
                if rel > worst.0 {
                    worst = (rel, (s, t));
                }
            }
        }
        Ok(worst)
    }
}

/// Left multiplication by `ξ ∈ L_a` as a map `L_b → L_{a+b}`.
pub fn hom_from_element(xi: &GradedElement, b: Complex64) -> Result<ModuleHom> {
    if b.re < -GRADING_SLACK {
        return Err(Error::NegativeGrading { grading: b });
    }
    let alg = xi.algebra();
    let map = LinearMap::from_fn(alg, alg, |eta| xi.data().mul(eta))?;
    ModuleHom::new(map, b, xi.grading() + b)
}

/// Recovers `ξ` with `T(η) = ξ·η`: checks right-linearity on all matrix-unit
/// pairs, then reads off `ξ = T(1)`.
pub fn hom_to_element(t: &ModuleHom, tol: &Tolerances) -> Result<GradedElement> {
    let a = t.degree();
    if a.re < -GRADING_SLACK {
        return Err(Error::NegativeGrading { grading: a });
    }
    let (residual, pair) = t.right_linearity_defect()?;
    if !tol.close(residual, 0.0) {
        return Err(Error::NotModuleMap { residual, pair });
    }
    let one = Element::identity(t.algebra());
    GradedElement::new(t.map.apply(&one)?, a)
}

/// The quasinorm `sup_{‖y‖≤1} ‖T(y)‖` of a module map together with a
/// certified lower bound `‖T(y)‖/‖y‖` from explicit witnesses `y`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HomNorm {
    pub value: f64,
    pub lower_bound: f64,
}

impl HomNorm {
    /// Relative gap between the value and its witnessed lower bound.
    pub fn gap(&self) -> f64 {
        if self.value == 0.0 {
            return 0.0;
        }
        (self.value - self.lower_bound).max(0.0) / self.value
    }
}

/// Number of rungs in the threshold ladder `c_k = ‖ξ‖(1 − 10^{−k})`.
pub const LADDER_STEPS: i32 = 8;

pub fn hom_norm(t: &ModuleHom, tol: &Tolerances) -> Result<HomNorm> {
    let xi = hom_to_element(t, tol)?;
    let value = lnorm(&xi);
    if value == 0.0 {
        return Ok(HomNorm { value, lower_bound: 0.0 });
    }
    let b = t.source_grading();
    let ratio = |y: &GradedElement| -> Result<f64> {
        let denom = lnorm(y);
        if denom == 0.0 {
            return Ok(0.0);
        }
        Ok(lnorm(&t.apply(y)?) / denom)
    };
    let lower_bound = if xi.is_imaginary() {
        let mut best: f64 = 0.0;
        for k in 1..=LADDER_STEPS {
            let c = value * (1.0 - 10f64.powi(-k));
            let y = holder_witness_imaginary(&xi, b, c, tol)?;
            best = best.max(ratio(&y)?);
        }
        best
    } else {
        ratio(&holder_witness(&xi, b, tol)?)?
    };
    Ok(HomNorm { value, lower_bound })
}
