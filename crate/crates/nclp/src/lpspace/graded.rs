use num_complex::Complex64;

use crate::decomp::{polar_left, polar_right};
use crate::error::{Error, Result};
use crate::matcore::{
    operator_norm, power_pos, spectral, spectral_projection, BlockAlgebra, Element, Tolerances,
};

/// Gradings whose real part lies within this distance of zero are treated
/// as imaginary; gradings compare equal within it.
pub const GRADING_SLACK: f64 = 1e-12;

/// An element `x·τ^a` of `L_a(M)`, stored by its tracial-coordinate matrix `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct GradedElement {
    data: Element,
    grading: Complex64,
}

impl GradedElement {
    pub fn new(data: Element, grading: Complex64) -> Result<Self> {
        if grading.re < -GRADING_SLACK || !grading.re.is_finite() || !grading.im.is_finite() {
            return Err(Error::NegativeGrading { grading });
        }
        Ok(Self { data, grading })
    }

    pub fn zero(algebra: &BlockAlgebra, grading: Complex64) -> Result<Self> {
        Self::new(Element::zero(algebra), grading)
    }

    pub fn data(&self) -> &Element {
        &self.data
    }

    pub fn into_data(self) -> Element {
        self.data
    }

    pub fn grading(&self) -> Complex64 {
        self.grading
    }

    pub fn algebra(&self) -> &BlockAlgebra {
        self.data.algebra()
    }

    pub fn is_imaginary(&self) -> bool {
        self.grading.re.abs() <= GRADING_SLACK
    }

    /// The `r` for which the norm is an `r`-norm: `max(1, Re a)`.
    pub fn quasinorm_exponent(&self) -> f64 {
        self.grading.re.max(1.0)
    }

    /// `(x·τ^a)* = x*·τ^{conj a}`.
    pub fn adjoint(&self) -> Self {
        Self {
            data: self.data.adjoint(),
            grading: self.grading.conj(),
        }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            data: self.data.scale(c),
            grading: self.grading,
        }
    }

    fn ensure_same_grading(&self, other: &GradedElement) -> Result<()> {
        if (self.grading - other.grading).norm() > GRADING_SLACK {
            return Err(Error::GradingMismatch {
                expected: self.grading,
                found: other.grading,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &GradedElement) -> Result<Self> {
        self.ensure_same_grading(other)?;
        Self::new(self.data.add(&other.data)?, self.grading)
    }

    pub fn sub(&self, other: &GradedElement) -> Result<Self> {
        self.ensure_same_grading(other)?;
        Self::new(self.data.sub(&other.data)?, self.grading)
    }

    /// `L_a × L_b → L_{a+b}`; in tracial coordinates a plain matrix product.
    pub fn gmul(&self, other: &GradedElement) -> Result<Self> {
        Self::new(self.data.mul(&other.data)?, self.grading + other.grading)
    }

    /// Left action of `M` (grading 0).
    pub fn left_mul(&self, p: &Element) -> Result<Self> {
        Self::new(p.mul(&self.data)?, self.grading)
    }

    /// Right action of `M` (grading 0).
    pub fn right_mul(&self, p: &Element) -> Result<Self> {
        Self::new(self.data.mul(p)?, self.grading)
    }

    pub fn norm(&self) -> f64 {
        lnorm(self)
    }
}

/// Relative floor below which [`lnorm`] treats a singular value as rounding
/// noise (scaled by the largest singular value and the block dimension).
///
/// Much smaller than the default `rank_rel`: the norm is multiplicative
/// across gradings, and a value that is small but genuine in `x` is raised
/// to a higher power in `x·y`.
pub const NOISE_FLOOR: f64 = 8.0 * f64::EPSILON;

pub(crate) fn noise_tolerances() -> Tolerances {
    Tolerances {
        rank_rel: NOISE_FLOOR,
        ..Tolerances::default()
    }
}

/// The (quasi)norm of `L_a(M)`: `((x*x)^{1/(2 Re a)}(1))^{Re a}`, i.e.
/// `(Σ s_i^{1/Re a})^{Re a}` over singular values, and the operator norm
/// when `Re a = 0`.
pub fn lnorm(xi: &GradedElement) -> f64 {
    if xi.is_imaginary() {
        return operator_norm(xi.data());
    }
    let re = xi.grading.re;
    let svd = spectral::svd(xi.data());
    let top = svd.largest;
    if top == 0.0 {
        return 0.0;
    }
    let kept = svd.kept(xi.data().algebra().block_dims(), &noise_tolerances());
    // factor out the largest value so tiny Re a cannot overflow
    let sum: f64 = svd
        .blocks
        .iter()
        .zip(&kept)
        .flat_map(|(b, k)| b.s.iter().zip(k))
        .filter(|(_, &k)| k)
        .map(|(&v, _)| (v / top).powf(1.0 / re))
        .sum();
    top * sum.powf(re)
}

/// For `Re a > 0`, a nonzero `y ∈ L_b` with `‖ξ·y‖ = ‖ξ‖·‖y‖`:
/// `z = (x*x)^{1/(2 Re a)}` and `y = z^b`.
pub fn holder_witness(xi: &GradedElement, b: Complex64, tol: &Tolerances) -> Result<GradedElement> {
    if xi.is_imaginary() {
        return Err(Error::GradingOutOfRange {
            grading: xi.grading,
            requirement: "Hölder witness needs Re a > 0",
        });
    }
    if b.re < -GRADING_SLACK {
        return Err(Error::NegativeGrading { grading: b });
    }
    if operator_norm(xi.data()) == 0.0 {
        return Err(Error::ZeroElement);
    }
    // z^b = |x|^{b / Re a}
    let modulus = polar_right(xi.data(), tol).positive;
    let y = power_pos(&modulus, b / xi.grading.re, tol)?;
    GradedElement::new(y, b)
}

/// For `Re a = 0` and `0 ≤ c < ‖ξ‖`, a nonzero `y ∈ L_b` with `‖ξ·y‖ ≥ c·‖y‖`.
///
/// With `x = z·u` the left polar decomposition and `p` the spectral projection
/// of `z` on `[c, ∞)`, the witness is `y = u*·w^{a+b}` for the density `w = p`.
pub fn holder_witness_imaginary(
    xi: &GradedElement,
    b: Complex64,
    c: f64,
    tol: &Tolerances,
) -> Result<GradedElement> {
    if !xi.is_imaginary() {
        return Err(Error::GradingOutOfRange {
            grading: xi.grading,
            requirement: "imaginary Hölder witness needs Re a = 0",
        });
    }
    if b.re < -GRADING_SLACK {
        return Err(Error::NegativeGrading { grading: b });
    }
    let norm = operator_norm(xi.data());
    if !(0.0..norm).contains(&c) {
        return Err(Error::ThresholdTooLarge { c, norm });
    }
    let polar = polar_left(xi.data(), tol);
    let p = spectral_projection(&polar.positive, c, tol)?;
    let w_power = power_pos(&p, xi.grading + b, tol)?;
    GradedElement::new(&polar.isometry.adjoint() * &w_power, b)
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
    fn lnorm_examples() {
        assert_relative_eq!(lnorm(&g(Element::identity(&m2()), c(1.0, 0.0))), 2.0);
        let d = Element::real_diagonal(&m2(), &[3.0, 4.0]).unwrap();
        assert_relative_eq!(lnorm(&g(d.clone(), c(0.5, 0.0))), 5.0, epsilon = 1e-14);
        assert_relative_eq!(lnorm(&g(d, c(0.0, 1.7))), 4.0);
        assert_eq!(lnorm(&g(Element::zero(&m2()), c(0.5, 0.0))), 0.0);
    }

    #[test]
    fn lnorm_tiny_real_part_does_not_overflow() {
        let d = Element::real_diagonal(&m2(), &[3.0, 4.0]).unwrap();
        let n = lnorm(&g(d, c(1e-3, 0.0)));
        assert!(n.is_finite());
        assert_relative_eq!(n, 4.0, epsilon = 1e-6);
    }

    #[test]
    fn rejects_negative_grading() {
        assert!(matches!(
            GradedElement::new(sample(), c(-0.1, 0.0)),
            Err(Error::NegativeGrading { .. })
        ));
    }

    #[test]
    fn adjoint_conjugates_grading() {
        let xi = g(sample(), c(0.5, 1.5));
        assert_eq!(xi.adjoint().grading(), c(0.5, -1.5));
        assert_eq!(xi.adjoint().adjoint(), xi);
    }

    #[test]
    fn gmul_unit_and_powers() {
        let xi = g(sample(), c(0.5, 0.2));
        let one = g(Element::identity(&m2()), c(0.0, 0.0));
        assert_eq!(one.gmul(&xi).unwrap(), xi);

        let h = Element::from_real_rows(&m2(), &[vec![vec![2.0, 1.0], vec![1.0, 3.0]]]).unwrap();
        let half = power_pos(&h, c(0.5, 0.0), &tol()).unwrap();
        let prod = g(half.clone(), c(0.5, 0.0)).gmul(&g(half, c(0.5, 0.0))).unwrap();
        assert_eq!(prod.grading(), c(1.0, 0.0));
        assert!((prod.data() - &h).max_abs() < 1e-13);
    }

    #[test]
    fn holder_witness_positive_case() {
        let h = Element::from_real_rows(&m2(), &[vec![vec![2.0, 1.0], vec![1.0, 3.0]]]).unwrap();
        let xi = g(h.clone(), c(0.5, 0.0));
        let y = holder_witness(&xi, c(0.5, 0.0), &tol()).unwrap();
        assert!((y.data() - &h).max_abs() < 1e-13);
        let sq = xi.gmul(&y).unwrap();
        assert_relative_eq!(lnorm(&sq), lnorm(&xi).powi(2), max_relative = 1e-13);
    }

    #[test]
    fn holder_witness_matrix_unit() {
        let e12 = Element::matrix_unit(&m2(), 0, 0, 1);
        let e22 = Element::matrix_unit(&m2(), 0, 1, 1);
        let xi = g(e12, c(1.0, 0.0));
        let y = holder_witness(&xi, c(1.0, 0.0), &tol()).unwrap();
        assert!((y.data() - &e22).max_abs() < 1e-15);
        assert_relative_eq!(lnorm(&xi.gmul(&y).unwrap()), lnorm(&xi) * lnorm(&y));
    }

    #[test]
    fn holder_witness_errors() {
        let xi = g(sample(), c(0.0, 1.0));
        assert!(matches!(holder_witness(&xi, c(1.0, 0.0), &tol()), Err(Error::GradingOutOfRange { .. })));
        let zero = g(Element::zero(&m2()), c(0.5, 0.0));
        assert_eq!(holder_witness(&zero, c(1.0, 0.0), &tol()).unwrap_err(), Error::ZeroElement);
    }

    #[test]
    fn imaginary_witness_diagonal() {
        let xi = g(Element::real_diagonal(&m2(), &[1.0, 3.0]).unwrap(), c(0.0, 0.0));
        let y = holder_witness_imaginary(&xi, c(0.5, 0.0), 2.0, &tol()).unwrap();
        let e22 = Element::matrix_unit(&m2(), 0, 1, 1);
        assert!((y.data() - &e22).max_abs() < 1e-15);
        assert!(lnorm(&xi.gmul(&y).unwrap()) >= 2.0 * lnorm(&y));
    }

    #[test]
    fn imaginary_witness_unitary() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let u = Element::from_rows(&m2(), &[vec![vec![c(s, 0.0), c(0.0, s)], vec![c(0.0, s), c(s, 0.0)]]]).unwrap();
        let xi = g(u, c(0.0, -0.4));
        let y = holder_witness_imaginary(&xi, c(1.0, 0.3), 0.5, &tol()).unwrap();
        assert_relative_eq!(lnorm(&xi.gmul(&y).unwrap()), lnorm(&y), max_relative = 1e-13);
    }

    #[test]
    fn imaginary_witness_threshold_checked() {
        let xi = g(Element::real_diagonal(&m2(), &[1.0, 3.0]).unwrap(), c(0.0, 0.0));
        assert!(matches!(
            holder_witness_imaginary(&xi, c(0.5, 0.0), 3.0, &tol()),
            Err(Error::ThresholdTooLarge { .. })
        ));
    }

    #[test]
    fn orthogonal_units_pin_real_part() {
        // ‖e11 + e22‖ = 2^{Re a}, which recovers Re a from the norm
        let id = Element::identity(&m2());
        for re in [0.25, 0.5, 1.0, 1.5] {
            let n = lnorm(&g(id.clone(), c(re, 0.9)));
            assert_relative_eq!(n.log2(), re, epsilon = 1e-14);
        }
    }
}
