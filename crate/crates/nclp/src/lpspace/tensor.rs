use nalgebra::DVector;
use num_complex::Complex64;

use super::graded::{lnorm, noise_tolerances, GradedElement, GRADING_SLACK};
use crate::decomp::right_support;
use crate::error::{Error, Result};
use crate::matcore::{complex_power, spectral, BlockAlgebra, CMatrix, Element, Tolerances};

/// A finite formal sum `Σ ξ_i ⊗ η_i` in `L_a(M) ⊗_M L_b(M)`.
///
/// Representations are not unique: `ξp ⊗ η` and `ξ ⊗ pη` name the same tensor.
#[derive(Debug, Clone, PartialEq)]
pub struct TensorElement {
    algebra: BlockAlgebra,
    left_grading: Complex64,
    right_grading: Complex64,
    pairs: Vec<(GradedElement, GradedElement)>,
}

fn check_grading(expected: Complex64, found: Complex64) -> Result<()> {
    if (expected - found).norm() > GRADING_SLACK {
        return Err(Error::GradingMismatch { expected, found });
    }
    Ok(())
}

impl TensorElement {
    pub fn empty(algebra: &BlockAlgebra, a: Complex64, b: Complex64) -> Result<Self> {
        for g in [a, b] {
            if g.re < -GRADING_SLACK {
                return Err(Error::NegativeGrading { grading: g });
            }
        }
        Ok(Self {
            algebra: algebra.clone(),
            left_grading: a,
            right_grading: b,
            pairs: Vec::new(),
        })
    }

    /// Builds a sum from its terms; the gradings are read off the first pair.
    pub fn from_pairs(pairs: Vec<(GradedElement, GradedElement)>) -> Result<Self> {
        let (x0, y0) = pairs.first().ok_or(Error::EmptyFamily)?;
        let mut z = Self::empty(x0.algebra(), x0.grading(), y0.grading())?;
        for (x, y) in pairs {
            z.push(x, y)?;
        }
        Ok(z)
    }

    pub fn rank_one(x: GradedElement, y: GradedElement) -> Result<Self> {
        Self::from_pairs(vec![(x, y)])
    }

    pub fn push(&mut self, x: GradedElement, y: GradedElement) -> Result<()> {
        self.algebra.ensure_compatible(x.algebra())?;
        self.algebra.ensure_compatible(y.algebra())?;
        check_grading(self.left_grading, x.grading())?;
        check_grading(self.right_grading, y.grading())?;
        self.pairs.push((x, y));
        Ok(())
    }

    pub fn algebra(&self) -> &BlockAlgebra {
        &self.algebra
    }

    pub fn gradings(&self) -> (Complex64, Complex64) {
        (self.left_grading, self.right_grading)
    }

    pub fn pairs(&self) -> &[(GradedElement, GradedElement)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Concatenation of representations, i.e. the formal sum.
    pub fn add(&self, other: &TensorElement) -> Result<Self> {
        self.algebra.ensure_compatible(&other.algebra)?;
        check_grading(self.left_grading, other.left_grading)?;
        check_grading(self.right_grading, other.right_grading)?;
        let mut out = self.clone();
        out.pairs.extend(other.pairs.iter().cloned());
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        let minus = Complex64::new(-1.0, 0.0);
        Self {
            pairs: self.pairs.iter().map(|(x, y)| (x.scale(minus), y.clone())).collect(),
            ..self.clone()
        }
    }

    pub fn sub(&self, other: &TensorElement) -> Result<Self> {
        self.add(&other.neg())
    }

    /// The `r` of the Turpin `r`-norm: `max(1, Re(a+b))`.
    pub fn turpin_exponent(&self) -> f64 {
        (self.left_grading + self.right_grading).re.max(1.0)
    }

    /// `(Σ (‖ξ_i‖·‖η_i‖)^{1/r})^r` for this particular representation.
    pub fn representation_bound(&self) -> f64 {
        let r = self.turpin_exponent();
        let sum: f64 = self
            .pairs
            .iter()
            .map(|(x, y)| (lnorm(x) * lnorm(y)).powf(1.0 / r))
            .sum();
        sum.powf(r)
    }
}

/// The multiplication map `m`: `Σ ξ_i ⊗ η_i ↦ Σ ξ_i·η_i`.
pub fn tensor_multiply(z: &TensorElement) -> Result<GradedElement> {
    let mut acc = Element::zero(&z.algebra);
    for (x, y) in &z.pairs {
        acc = acc.add(&x.data().mul(y.data())?)?;
    }
    GradedElement::new(acc, z.left_grading + z.right_grading)
}

/// The comultiplication `n`: splits `ζ ∈ L_{a+b}` as `ξ·η` with `ξ ∈ L_a`,
/// `η ∈ L_b` and `‖ξ‖·‖η‖ = ‖ζ‖`.
///
/// With `ζ = t·h^{Re(a+b)}` the graded right polar decomposition, the factors
/// are `t·h^{Re a − i Im b}` and `h^b`. When `Re(a+b) = 0` the positive part
/// is the right support `s` of `ζ` and the factors are `ζ·s` and `s`.
pub fn comultiply(
    zeta: &GradedElement,
    a: Complex64,
    b: Complex64,
    tol: &Tolerances,
) -> Result<(GradedElement, GradedElement)> {
    for g in [a, b] {
        if g.re < -GRADING_SLACK {
            return Err(Error::NegativeGrading { grading: g });
        }
    }
    check_grading(zeta.grading(), a + b)?;
    let data = zeta.data();
    let s = (a + b).re;
    if s <= GRADING_SLACK {
        let p = right_support(data, tol);
        return Ok((GradedElement::new(data.mul(&p)?, a)?, GradedElement::new(p, b)?));
    }
    // |ζ| = h^s in tracial coordinates, so h^c = |ζ|^{c/s}. Only values at
    // rounding-noise level are dropped, matching lnorm; c/s ≤ 1 keeps the
    // surviving set intact in both factors.
    let svd = spectral::svd(data);
    let kept = svd.kept(data.algebra().block_dims(), &noise_tolerances());
    let left_exp = Complex64::new(a.re, -b.im) / s;
    let right_exp = b / s;
    let mut left = Vec::with_capacity(svd.blocks.len());
    let mut right = Vec::with_capacity(svd.blocks.len());
    for (blk, keep) in svd.blocks.iter().zip(&kept) {
        let power = |e: Complex64| {
            CMatrix::from_diagonal(&DVector::from_iterator(
                blk.s.len(),
                blk.s
                    .iter()
                    .zip(keep)
                    .map(|(&t, &k)| if k { complex_power(t, e) } else { Complex64::new(0.0, 0.0) }),
            ))
        };
        let v_adj = blk.v.adjoint();
        left.push(&blk.u * power(left_exp) * &v_adj);
        right.push(&blk.v * power(right_exp) * &v_adj);
    }
    let alg = data.algebra();
    Ok((
        GradedElement::new(Element::new(alg, left)?, a)?,
        GradedElement::new(Element::new(alg, right)?, b)?,
    ))
}

/// `comultiply` packaged as a rank-one tensor.
pub fn comultiply_tensor(
    zeta: &GradedElement,
    a: Complex64,
    b: Complex64,
    tol: &Tolerances,
) -> Result<TensorElement> {
    let (x, y) = comultiply(zeta, a, b, tol)?;
    TensorElement::rank_one(x, y)
}

/// Lower bound for the Turpin `r`-norm: `‖m(z)‖`, since `m` is contractive.
pub fn turpin_lower(z: &TensorElement) -> Result<f64> {
    Ok(lnorm(&tensor_multiply(z)?))
}

/// Upper bound for the Turpin `r`-norm: the representation bound minimized
/// over the given representation and the rank-one form `n(m(z))`.
pub fn turpin_upper(z: &TensorElement, tol: &Tolerances) -> f64 {
    let given = z.representation_bound();
    let (a, b) = z.gradings();
    let rank_one = tensor_multiply(z)
        .and_then(|zeta| comultiply_tensor(&zeta, a, b, tol))
        .map(|t| t.representation_bound());
    match rank_one {
        Ok(v) => v.min(given),
        Err(_) => given,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn m2() -> BlockAlgebra {
        BlockAlgebra::full(2).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn g(x: Element, a: Complex64) -> GradedElement {
        GradedElement::new(x, a).unwrap()
    }

    fn sample() -> Element {
        Element::from_rows(
            &m2(),
            &[vec![vec![c(1.0, 0.5), c(-2.0, 0.0)], vec![c(0.3, -1.0), c(0.0, 2.0)]]],
        )
        .unwrap()
    }

    #[test]
    fn comultiply_positive_diagonal() {
        let h = Element::real_diagonal(&m2(), &[1.0, 2.0]).unwrap();
        let zeta = g(h.clone(), c(1.0, 0.0));
        let (x, y) = comultiply(&zeta, c(0.5, 0.0), c(0.5, 0.0), &tol()).unwrap();
        let root = Element::real_diagonal(&m2(), &[1.0, 2f64.sqrt()]).unwrap();
        assert!((x.data() - &root).max_abs() < 1e-15);
        assert!((y.data() - &root).max_abs() < 1e-15);
        assert_relative_eq!(lnorm(&x) * lnorm(&y), 3.0, max_relative = 1e-14);
    }

    #[test]
    fn comultiply_matrix_unit() {
        let e12 = Element::matrix_unit(&m2(), 0, 0, 1);
        let e22 = Element::matrix_unit(&m2(), 0, 1, 1);
        let (x, y) = comultiply(&g(e12.clone(), c(1.0, 0.0)), c(1.0, 0.0), c(0.0, 0.0), &tol()).unwrap();
        assert!((x.data() - &e12).max_abs() < 1e-15);
        assert!((y.data() - &e22).max_abs() < 1e-15);
    }

    #[test]
    fn comultiply_imaginary_total() {
        let zeta = g(sample(), c(0.0, 0.7));
        let (x, y) = comultiply(&zeta, c(0.0, 0.2), c(0.0, 0.5), &tol()).unwrap();
        let back = x.gmul(&y).unwrap();
        assert!((back.data() - zeta.data()).max_abs() < 1e-12);
        assert_relative_eq!(lnorm(&x) * lnorm(&y), lnorm(&zeta), max_relative = 1e-12);
    }

    #[test]
    fn comultiply_roundtrip_and_isometry() {
        for (a, b) in [
            (c(0.5, 0.3), c(0.5, -1.1)),
            (c(1.0 / 3.0, 0.0), c(1.5, 0.4)),
            (c(0.0, 1.0), c(1.0, 0.0)),
            (c(1.0, -0.5), c(0.0, 0.2)),
        ] {
            let zeta = g(sample(), a + b);
            let (x, y) = comultiply(&zeta, a, b, &tol()).unwrap();
            assert_eq!(x.grading(), a);
            assert_eq!(y.grading(), b);
            let back = x.gmul(&y).unwrap();
            assert!((back.data() - zeta.data()).max_abs() < 1e-12);
            assert_relative_eq!(lnorm(&x) * lnorm(&y), lnorm(&zeta), max_relative = 1e-12);
        }
    }

    #[test]
    fn comultiply_rejects_wrong_split() {
        let zeta = g(sample(), c(1.0, 0.0));
        assert!(matches!(
            comultiply(&zeta, c(0.5, 0.0), c(0.25, 0.0), &tol()),
            Err(Error::GradingMismatch { .. })
        ));
    }

    #[test]
    fn empty_sum_multiplies_to_zero() {
        let z = TensorElement::empty(&m2(), c(0.5, 0.0), c(0.5, 0.0)).unwrap();
        let m = tensor_multiply(&z).unwrap();
        assert!(m.data().is_zero());
        assert_eq!(m.grading(), c(1.0, 0.0));
        assert_eq!(turpin_upper(&z, &tol()), 0.0);
    }

    #[test]
    fn balancing_is_killed() {
        let xi = g(sample(), c(0.5, 0.1));
        let eta = g(sample().adjoint(), c(0.5, 0.0));
        let p = Element::from_real_rows(&m2(), &[vec![vec![0.0, 1.0], vec![2.0, -1.0]]]).unwrap();
        let lhs = TensorElement::rank_one(xi.right_mul(&p).unwrap(), eta.clone()).unwrap();
        let rhs = TensorElement::rank_one(xi, eta.left_mul(&p).unwrap()).unwrap();
        let diff = tensor_multiply(&lhs.sub(&rhs).unwrap()).unwrap();
        assert!(diff.data().max_abs() < 1e-14);
    }

    #[test]
    fn cancelling_terms_give_zero() {
        let xi = g(sample(), c(0.5, 0.0));
        let eta = g(sample(), c(0.5, 0.0));
        let z = TensorElement::from_pairs(vec![(xi.clone(), eta.clone()), (xi.scale(c(-1.0, 0.0)), eta)]).unwrap();
        assert!(z.representation_bound() > 0.0);
        assert_eq!(turpin_upper(&z, &tol()), 0.0);
    }

    #[test]
    fn turpin_meets_lower_bound() {
        let a = c(0.5, 0.0);
        let xs = [sample(), sample().adjoint(), Element::identity(&m2())];
        let pairs: Vec<_> = xs
            .iter()
            .zip(xs.iter().rev())
            .map(|(x, y)| (g(x.clone(), a), g(y.clone(), a)))
            .collect();
        let z = TensorElement::from_pairs(pairs).unwrap();
        let upper = turpin_upper(&z, &tol());
        let lower = turpin_lower(&z).unwrap();
        assert!(upper <= z.representation_bound());
        assert_relative_eq!(upper, lower, max_relative = 1e-12);
    }

    #[test]
    fn push_checks_gradings() {
        let mut z = TensorElement::empty(&m2(), c(0.5, 0.0), c(0.5, 0.0)).unwrap();
        let bad = g(sample(), c(1.0, 0.0));
        assert!(matches!(z.push(bad.clone(), bad), Err(Error::GradingMismatch { .. })));
    }
}
