//! Supports, polar decompositions and division.
//!
//! Division `p·x = y` is solvable exactly when `ker x ⊆ ker y`, which in
//! finite dimension is the same as `c²x*x ≥ y*y` for some `c`. The canonical
//! quotient is `p = y·x⁺` (Moore–Penrose pseudoinverse on the support of `x`);
//! its right support sits under the left support of `x`, and its operator norm
//! is the smallest admissible `c`. [`epsilon_ladder`] reproduces the limit
//! construction `p = lim y·f_ε(|x|)·r*` for comparison.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lpspace::GradedElement;
use crate::matcore::spectral::{self, matrix_svd, ElementSvd};
use crate::matcore::{operator_norm, power_pos, CMatrix, Element, Tolerances};
use crate::weights::Weight;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Which side the positive factor sits on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// `x = u·z`, `z = (x*x)^{1/2}`.
    Right,
    /// `x = z·u`, `z = (xx*)^{1/2}`.
    Left,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolarDecomposition {
    pub isometry: Element,
    pub positive: Element,
    pub side: Side,
}

impl PolarDecomposition {
    pub fn reconstruct(&self) -> Element {
        match self.side {
            Side::Right => &self.isometry * &self.positive,
            Side::Left => &self.positive * &self.isometry,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DivisionResult {
    pub quotient: Element,
    pub minimal_c: f64,
    /// `‖y − p·x‖` in operator norm.
    pub residual: f64,
}

// Per block: columns of U and V belonging to singular values above the cutoff.
struct Truncated {
    u: Vec<CMatrix>,
    s: Vec<Vec<f64>>,
    v: Vec<CMatrix>,
}

fn truncate(x: &Element, svd: &ElementSvd, tol: &Tolerances) -> Truncated {
    let kept = svd.kept(x.algebra().block_dims(), tol);
    let mut out = Truncated {
        u: Vec::new(),
        s: Vec::new(),
        v: Vec::new(),
    };
    for (b, keep) in svd.blocks.iter().zip(kept) {
        let idx: Vec<usize> = keep.iter().enumerate().filter(|(_, k)| **k).map(|(i, _)| i).collect();
        out.u.push(b.u.select_columns(&idx));
        out.v.push(b.v.select_columns(&idx));
        out.s.push(idx.iter().map(|&i| b.s[i]).collect());
    }
    out
}

fn scaled_columns(m: &CMatrix, d: &[f64]) -> CMatrix {
    let mut out = m.clone();
    for (j, mut col) in out.column_iter_mut().enumerate() {
        col *= Complex64::new(d[j], 0.0);
    }
    out
}

fn projector(cols: &CMatrix) -> CMatrix {
    cols * cols.adjoint()
}

/// Smallest projection `p` with `x·p = x`.
pub fn right_support(x: &Element, tol: &Tolerances) -> Element {
    let t = truncate(x, &spectral::svd(x), tol);
    Element::from_blocks_unchecked(x.algebra(), t.v.iter().map(projector).collect())
}

/// Smallest projection `p` with `p·x = x`; equals `right_support(x*)`.
pub fn left_support(x: &Element, tol: &Tolerances) -> Element {
    let t = truncate(x, &spectral::svd(x), tol);
    Element::from_blocks_unchecked(x.algebra(), t.u.iter().map(projector).collect())
}

/// `x = u·|x|` with `u*u = support(|x|)` and `uu* = left_support(x)`.
pub fn polar_right(x: &Element, tol: &Tolerances) -> PolarDecomposition {
    polar(x, Side::Right, tol)
}

/// `x = |x*|·u` with the same partial isometry as [`polar_right`].
pub fn polar_left(x: &Element, tol: &Tolerances) -> PolarDecomposition {
    polar(x, Side::Left, tol)
}

fn polar(x: &Element, side: Side, tol: &Tolerances) -> PolarDecomposition {
    let t = truncate(x, &spectral::svd(x), tol);
    let alg = x.algebra();
    let isometry = Element::from_blocks_unchecked(
        alg,
        t.u.iter().zip(&t.v).map(|(u, v)| u * v.adjoint()).collect(),
    );
    let basis = match side {
        Side::Right => &t.v,
        Side::Left => &t.u,
    };
    let positive = Element::from_blocks_unchecked(
        alg,
        basis
            .iter()
            .zip(&t.s)
            .map(|(b, s)| scaled_columns(b, s) * b.adjoint())
            .collect(),
    );
    PolarDecomposition {
        isometry,
        positive,
        side,
    }
}

/// Moore–Penrose pseudoinverse with the rank cutoff applied.
pub fn pseudoinverse(x: &Element, tol: &Tolerances) -> Element {
    let t = truncate(x, &spectral::svd(x), tol);
    Element::from_blocks_unchecked(
        x.algebra(),
        t.v.iter()
            .zip(&t.s)
            .zip(&t.u)
            .map(|((v, s), u)| {
                let inv: Vec<f64> = s.iter().map(|s| 1.0 / s).collect();
                scaled_columns(v, &inv) * u.adjoint()
            })
            .collect(),
    )
}

/// Solves `p·x = y` with `right_support(p) ≤ left_support(x)`.
///
/// Fails with [`Error::Unsolvable`] when `ker x ⊄ ker y`, carrying
/// `‖y − p·x‖` for the best candidate.
pub fn douglas_divide(x: &Element, y: &Element, tol: &Tolerances) -> Result<DivisionResult> {
    x.algebra().ensure_compatible(y.algebra())?;
    let quotient = y * &pseudoinverse(x, tol);
    let residual = operator_norm(&(y - &(&quotient * x)));
    if !tol.close(residual, operator_norm(y)) {
        return Err(Error::Unsolvable { residual });
    }
    Ok(DivisionResult {
        minimal_c: operator_norm(&quotient),
        quotient,
        residual,
    })
}

/// For `x*x = y*y`, the partial isometry `p` with `p·x = y`, `p*p = left_support(x)`
/// and `p*·y = x`.
pub fn isometry_divide(x: &Element, y: &Element, tol: &Tolerances) -> Result<Element> {
    x.algebra().ensure_compatible(y.algebra())?;
    let xx = &x.adjoint() * x;
    let yy = &y.adjoint() * y;
    let residual = operator_norm(&(&xx - &yy));
    if !tol.close(residual, operator_norm(&xx)) {
        return Err(Error::ConditionViolated { residual });
    }
    Ok(douglas_divide(x, y, tol)?.quotient)
}

/// Approximants `p_ε = y·f_ε(|x|)·r*` of the Douglas quotient, where `x = r·|x|`
/// and `f_ε(t) = 1/t` for `t ≥ ε`, else 0.
#[derive(Debug, Clone)]
pub struct EpsilonLadder {
    pub epsilons: Vec<f64>,
    pub approximants: Vec<Element>,
    /// `‖p_ε − p‖` against the exact quotient.
    pub residuals: Vec<f64>,
}

impl EpsilonLadder {
    /// Residuals never increase by more than `slack` along the ladder.
    pub fn is_monotone(&self, slack: f64) -> bool {
        self.residuals.windows(2).all(|w| w[1] <= w[0] + slack)
    }

    pub fn final_residual(&self) -> f64 {
        self.residuals.last().copied().unwrap_or(0.0)
    }
}

/// Runs the limit construction for each `ε` (caller supplies them in decreasing order).
pub fn epsilon_ladder(x: &Element, y: &Element, epsilons: &[f64], tol: &Tolerances) -> Result<EpsilonLadder> {
    let exact = douglas_divide(x, y, tol)?.quotient;
    let polar = polar_right(x, tol);
    let r_adj = polar.isometry.adjoint();
    let eig = spectral::eigh_positive(&polar.positive, tol)?;
    let mut approximants = Vec::with_capacity(epsilons.len());
    let mut residuals = Vec::with_capacity(epsilons.len());
    for &eps in epsilons {
        let f = move |t: f64| {
            if t >= eps && t > 0.0 {
                Complex64::new(1.0 / t, 0.0)
            } else {
                ZERO
            }
        };
        let z_eps = spectral::func_calc_with(&polar.positive, &eig, f, tol);
        let p_eps = &(y * &z_eps) * &r_adj;
        residuals.push(operator_norm(&(&p_eps - &exact)));
        approximants.push(p_eps);
    }
    Ok(EpsilonLadder {
        epsilons: epsilons.to_vec(),
        approximants,
        residuals,
    })
}

/// A decreasing ladder `ε_k = ‖x‖·10^{-k}`, `k = 0..=steps`.
pub fn default_epsilons(x: &Element, steps: usize) -> Vec<f64> {
    let top = operator_norm(x);
    (0..=steps).map(|k| top * 10f64.powi(-(k as i32))).collect()
}

/// Quotient of graded elements: `p ∈ L_{b−a}` with `p·x = y`.
#[derive(Debug, Clone, PartialEq)]
pub struct GradedDivision {
    pub quotient: GradedElement,
    pub minimal_c: f64,
}

/// Divides `y ∈ L_b` by `x ∈ L_a`. Real parts of the gradings must agree
/// unless `y = 0`.
pub fn divide_graded(x: &GradedElement, y: &GradedElement, tol: &Tolerances) -> Result<GradedDivision> {
    let grading = y.grading() - x.grading();
    let y_zero = operator_norm(y.data()) <= tol.eq_abs;
    if (x.grading().re - y.grading().re).abs() > crate::lpspace::GRADING_SLACK && !y_zero {
        return Err(Error::RealPartMismatch {
            left: x.grading().re,
            right: y.grading().re,
        });
    }
    let grading = if y_zero {
        grading
    } else {
        Complex64::new(0.0, grading.im)
    };
    let div = douglas_divide(x.data(), y.data(), tol)?;
    Ok(GradedDivision {
        quotient: GradedElement::new(div.quotient, grading)?,
        minimal_c: div.minimal_c,
    })
}

/// Polar decomposition of `ξ ∈ L_a`: partial isometry in `L_{i·Im a}` and
/// positive part in `L_{Re a}`.
pub fn polar_graded(xi: &GradedElement, tol: &Tolerances) -> Result<(GradedElement, GradedElement)> {
    let p = polar_right(xi.data(), tol);
    let a = xi.grading();
    Ok((
        GradedElement::new(p.isometry, Complex64::new(0.0, a.im))?,
        GradedElement::new(p.positive, Complex64::new(a.re, 0.0))?,
    ))
}

/// Single generator of the left submodule spanned by a finite family.
#[derive(Debug, Clone)]
pub struct CyclicGenerator {
    /// `y = μ^{i·Im a}·(Σ u_i*u_i)^{1/2}` in tracial coordinates.
    pub generator: GradedElement,
    /// `u_i = q_i·y`.
    pub coefficients: Vec<Element>,
    /// `y = Σ c_i·u_i`: row of the amplified partial isometry.
    pub certificate: Vec<Element>,
}

fn ensure_common_grading(family: &[GradedElement]) -> Result<Complex64> {
    let first = family.first().ok_or(Error::EmptyFamily)?;
    let a = first.grading();
    for g in &family[1..] {
        first.algebra().ensure_compatible(g.algebra())?;
        if (g.grading() - a).norm() > crate::lpspace::GRADING_SLACK {
            return Err(Error::GradingMismatch {
                expected: a,
                found: g.grading(),
            });
        }
    }
    Ok(a)
}

// (Σ u_i* u_i)^{1/2} from the SVD of the stacked column [u_1; …; u_m].
fn column_modulus(family: &[GradedElement], tol: &Tolerances) -> Element {
    let alg = family[0].algebra();
    let m = family.len();
    let stacked: Vec<CMatrix> = alg
        .block_dims()
        .iter()
        .enumerate()
        .map(|(k, &n)| {
            let mut s = CMatrix::zeros(m * n, n);
            for (i, u) in family.iter().enumerate() {
                s.view_mut((i * n, 0), (n, n)).copy_from(u.data().block(k));
            }
            s
        })
        .collect();
    let decomps: Vec<_> = stacked
        .into_iter()
        .map(|s| matrix_svd(&s))
        .collect();
    let largest = decomps
        .iter()
        .flat_map(|d| d.s.iter().copied())
        .fold(0.0, f64::max);
    let blocks = decomps
        .into_iter()
        .zip(alg.block_dims())
        .map(|(d, &n)| {
            let v = d.v;
            let cut = tol.cutoff(largest, n);
            let s: Vec<f64> = d
                .s
                .iter()
                .map(|&s| if s > cut { s } else { 0.0 })
                .collect();
            scaled_columns(&v, &s) * v.adjoint()
        })
        .collect();
    Element::from_blocks_unchecked(alg, blocks)
}

/// Constructs one generator `y` of the left `M`-submodule spanned by `family`,
/// the coefficients expressing each member through `y`, and a certificate
/// expressing `y` through the members.
pub fn cyclic_generator(family: &[GradedElement], mu: &Weight, tol: &Tolerances) -> Result<CyclicGenerator> {
    let a = ensure_common_grading(family)?;
    let alg = family[0].algebra().clone();
    alg.ensure_compatible(mu.algebra())?;
    mu.ensure_faithful()?;

    let x = column_modulus(family, tol);
    let twist = power_pos(mu.density(), Complex64::new(0.0, a.im), tol)?;
    let y = &twist * &x;

    let coefficients = family
        .iter()
        .map(|u| douglas_divide(&y, u.data(), tol).map(|d| d.quotient))
        .collect::<Result<Vec<_>>>()?;

    // Y has y at (0,0); Z has u_i down column 0. Y*Y = Z*Z, so Y = P·Z with P a
    // partial isometry and y = Σ_i P_{0,i}·u_i.
    let m = family.len();
    let mut y_grid = vec![vec![None; m]; m];
    y_grid[0][0] = Some(&y);
    let mut z_grid = vec![vec![None; m]; m];
    for (i, u) in family.iter().enumerate() {
        z_grid[i][0] = Some(u.data());
    }
    let big_y = Element::amplified(&alg, &y_grid)?;
    let big_z = Element::amplified(&alg, &z_grid)?;
    let p = isometry_divide(&big_z, &big_y, tol)?;
    let certificate = (0..m)
        .map(|i| p.amplified_entry(&alg, m, 0, i))
        .collect::<Result<Vec<_>>>()?;

    Ok(CyclicGenerator {
        generator: GradedElement::new(y, a)?,
        coefficients,
        certificate,
    })
}

/// `Σ u_i ⊗ v_i = x ⊗ y` with `y` from [`cyclic_generator`] of the `v_i`
/// and `x = Σ u_i·q_i`.
#[derive(Debug, Clone)]
pub struct RankOne {
    pub left: GradedElement,
    pub right: GradedElement,
}

pub fn rank1_reduce(
    pairs: &[(GradedElement, GradedElement)],
    mu: &Weight,
    tol: &Tolerances,
) -> Result<RankOne> {
    let lefts: Vec<GradedElement> = pairs.iter().map(|(u, _)| u.clone()).collect();
    let rights: Vec<GradedElement> = pairs.iter().map(|(_, v)| v.clone()).collect();
    let c = ensure_common_grading(&lefts)?;
    let gen = cyclic_generator(&rights, mu, tol)?;
    let mut x = Element::zero(lefts[0].algebra());
    for (u, q) in lefts.iter().zip(&gen.coefficients) {
        x = x.add(&u.data().mul(q)?)?;
    }
    Ok(RankOne {
        left: GradedElement::new(x, c)?,
        right: gen.generator,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::BlockAlgebra;
    use approx::assert_relative_eq;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn m2() -> BlockAlgebra {
        BlockAlgebra::full(2).unwrap()
    }

    fn e(i: usize, j: usize) -> Element {
        Element::matrix_unit(&m2(), 0, i, j)
    }

    fn close(a: &Element, b: &Element, eps: f64) -> bool {
        (a - b).max_abs() <= eps
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sample() -> Element {
        Element::from_rows(
            &m2(),
            &[vec![vec![c(1.0, 0.5), c(-2.0, 0.0)], vec![c(0.3, -1.0), c(0.0, 2.0)]]],
        )
        .unwrap()
    }

    #[test]
    fn supports_of_matrix_units() {
        let id = Element::identity(&m2());
        assert!(close(&right_support(&id, &tol()), &id, 1e-15));
        assert!(close(&right_support(&e(0, 1), &tol()), &e(1, 1), 1e-15));
        assert!(close(&left_support(&e(0, 1), &tol()), &e(0, 0), 1e-15));
        assert!(right_support(&Element::zero(&m2()), &tol()).is_zero());
    }

    #[test]
    fn left_support_is_right_support_of_adjoint() {
        let x = &sample() * &e(0, 0);
        assert!(close(
            &left_support(&x, &tol()),
            &right_support(&x.adjoint(), &tol()),
            1e-14
        ));
    }

    #[test]
    fn polar_of_matrix_unit() {
        let p = polar_right(&e(0, 1), &tol());
        assert!(close(&p.isometry, &e(0, 1), 1e-15));
        assert!(close(&p.positive, &e(1, 1), 1e-15));
    }

    #[test]
    fn polar_of_positive_and_unitary() {
        let h = Element::from_real_rows(&m2(), &[vec![vec![2.0, 1.0], vec![1.0, 1.0]]]).unwrap();
        let p = polar_right(&h, &tol());
        assert!(close(&p.isometry, &Element::identity(&m2()), 1e-14));
        assert!(close(&p.positive, &h, 1e-14));

        let s = std::f64::consts::FRAC_1_SQRT_2;
        let u = Element::from_rows(&m2(), &[vec![vec![c(s, 0.0), c(0.0, s)], vec![c(0.0, s), c(s, 0.0)]]]).unwrap();
        let p = polar_right(&u, &tol());
        assert!(close(&p.isometry, &u, 1e-14));
        assert!(close(&p.positive, &Element::identity(&m2()), 1e-14));
    }

    #[test]
    fn left_and_right_polar_share_isometry() {
        let x = sample();
        let r = polar_right(&x, &tol());
        let l = polar_left(&x, &tol());
        assert!(close(&r.isometry, &l.isometry, 1e-14));
        assert!(close(&r.reconstruct(), &x, 1e-13));
        assert!(close(&l.reconstruct(), &x, 1e-13));
    }

    #[test]
    fn douglas_scalar_division_on_support() {
        let x = Element::real_diagonal(&m2(), &[1.0, 0.0]).unwrap();
        let y = Element::real_diagonal(&m2(), &[2.0, 0.0]).unwrap();
        let d = douglas_divide(&x, &y, &tol()).unwrap();
        assert!(close(&d.quotient, &y, 1e-15));
        assert_relative_eq!(d.minimal_c, 2.0);
    }

    #[test]
    fn douglas_disjoint_supports_are_unsolvable() {
        let x = Element::real_diagonal(&m2(), &[0.0, 1.0]).unwrap();
        let y = Element::real_diagonal(&m2(), &[1.0, 0.0]).unwrap();
        match douglas_divide(&x, &y, &tol()) {
            Err(Error::Unsolvable { residual }) => assert_relative_eq!(residual, 1.0),
            other => panic!("expected unsolvable, got {other:?}"),
        }
    }

    #[test]
    fn douglas_by_unitary() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let u = Element::from_rows(&m2(), &[vec![vec![c(s, 0.0), c(0.0, s)], vec![c(0.0, s), c(s, 0.0)]]]).unwrap();
        let y = sample();
        let d = douglas_divide(&u, &y, &tol()).unwrap();
        assert!(close(&d.quotient, &(&y * &u.adjoint()), 1e-14));
        assert_relative_eq!(d.minimal_c, operator_norm(&y), epsilon = 1e-13);
    }

    #[test]
    fn isometry_divide_examples() {
        let x = sample();
        let p = isometry_divide(&x, &x, &tol()).unwrap();
        assert!(close(&p, &left_support(&x, &tol()), 1e-13));

        let p = isometry_divide(&e(0, 0), &e(1, 0), &tol()).unwrap();
        assert!(close(&p, &e(1, 0), 1e-15));

        let z = Element::from_real_rows(&m2(), &[vec![vec![2.0, 0.0], vec![0.0, 0.0]]]).unwrap();
        let polar = polar_right(&(&e(1, 0) * &z), &tol());
        let p = isometry_divide(&polar.positive, &polar.reconstruct(), &tol()).unwrap();
        assert!(close(&p, &polar.isometry, 1e-14));

        assert!(matches!(
            isometry_divide(&e(0, 0), &e(0, 0).scale_real(2.0), &tol()),
            Err(Error::ConditionViolated { .. })
        ));
    }

    #[test]
    fn epsilon_ladder_converges_monotonically() {
        let x = Element::real_diagonal(&m2(), &[3.0, 0.01]).unwrap();
        let y = &sample() * &x;
        let eps = default_epsilons(&x, 6);
        let ladder = epsilon_ladder(&x, &y, &eps, &tol()).unwrap();
        assert!(ladder.is_monotone(1e-12));
        assert!(ladder.final_residual() < 1e-12);
        assert!(ladder.residuals[1] > 1.0);
    }

    #[test]
    fn graded_division_rejects_different_real_parts() {
        let x = GradedElement::new(sample(), c(0.5, 0.0)).unwrap();
        let y = GradedElement::new(sample(), c(1.0, 0.0)).unwrap();
        assert!(matches!(divide_graded(&x, &y, &tol()), Err(Error::RealPartMismatch { .. })));

        let zero = GradedElement::new(Element::zero(&m2()), c(1.0, 0.0)).unwrap();
        let q = divide_graded(&x, &zero, &tol()).unwrap();
        assert!(q.quotient.data().is_zero());

        let y = GradedElement::new(&e(0, 1) * &sample(), c(0.5, 1.0)).unwrap();
        let q = divide_graded(&x, &y, &tol()).unwrap();
        assert_eq!(q.quotient.grading(), c(0.0, 1.0));
        assert!(close(&(q.quotient.data() * x.data()), y.data(), 1e-13));
    }

    #[test]
    fn cyclic_generator_of_matrix_units() {
        let fam = vec![
            GradedElement::new(e(0, 0), c(0.0, 0.0)).unwrap(),
            GradedElement::new(e(0, 1), c(0.0, 0.0)).unwrap(),
        ];
        let tau = Weight::trace(&m2());
        let g = cyclic_generator(&fam, &tau, &tol()).unwrap();
        let id = Element::identity(&m2());
        assert!(close(g.generator.data(), &id, 1e-14));
        for (u, q) in fam.iter().zip(&g.coefficients) {
            assert!(close(q, u.data(), 1e-14));
        }
        let mut back = Element::zero(&m2());
        for (cert, u) in g.certificate.iter().zip(&fam) {
            back = &back + &(cert * u.data());
        }
        assert!(close(&back, &id, 1e-14));
    }

    #[test]
    fn cyclic_generator_of_single_element_is_polar() {
        let u = GradedElement::new(sample(), c(0.5, 0.0)).unwrap();
        let g = cyclic_generator(std::slice::from_ref(&u), &Weight::trace(&m2()), &tol()).unwrap();
        let polar = polar_right(&sample(), &tol());
        assert!(close(g.generator.data(), &polar.positive, 1e-13));
        assert!(close(&g.coefficients[0], &polar.isometry, 1e-13));
    }

    #[test]
    fn cyclic_generator_of_proportional_pair() {
        let x = sample();
        let fam = vec![
            GradedElement::new(x.clone(), c(1.0, 0.0)).unwrap(),
            GradedElement::new(x.scale_real(2.0), c(1.0, 0.0)).unwrap(),
        ];
        let g = cyclic_generator(&fam, &Weight::trace(&m2()), &tol()).unwrap();
        let expected = power_pos(&(&x.adjoint() * &x).scale_real(5.0), c(0.5, 0.0), &tol()).unwrap();
        assert!(close(g.generator.data(), &expected, 1e-12));
        for (u, q) in fam.iter().zip(&g.coefficients) {
            assert!(close(&(q * g.generator.data()), u.data(), 1e-12));
        }
    }

    #[test]
    fn cyclic_generator_errors() {
        let tau = Weight::trace(&m2());
        assert_eq!(cyclic_generator(&[], &tau, &tol()).unwrap_err(), Error::EmptyFamily);
        let fam = vec![
            GradedElement::new(e(0, 0), c(0.5, 0.0)).unwrap(),
            GradedElement::new(e(0, 1), c(0.5, 0.1)).unwrap(),
        ];
        assert!(matches!(cyclic_generator(&fam, &tau, &tol()), Err(Error::GradingMismatch { .. })));
        let degenerate = Weight::new(Element::real_diagonal(&m2(), &[1.0, 0.0]).unwrap(), &tol()).unwrap();
        assert!(matches!(
            cyclic_generator(&fam[..1], &degenerate, &tol()),
            Err(Error::NotFaithful { .. })
        ));
    }

    #[test]
    fn rank1_of_matrix_unit_pairs() {
        let g0 = c(0.0, 0.0);
        let pairs = vec![
            (GradedElement::new(e(0, 0), g0).unwrap(), GradedElement::new(e(0, 0), g0).unwrap()),
            (GradedElement::new(e(0, 1), g0).unwrap(), GradedElement::new(e(1, 0), g0).unwrap()),
        ];
        let r = rank1_reduce(&pairs, &Weight::trace(&m2()), &tol()).unwrap();
        let prod = r.left.data() * r.right.data();
        assert!(close(&prod, &e(0, 0).scale_real(2.0), 1e-14));
    }

    #[test]
    fn rank1_with_zero_right_factors() {
        let g = c(0.5, 0.0);
        let zero = GradedElement::new(Element::zero(&m2()), g).unwrap();
        let pairs = vec![
            (GradedElement::new(sample(), g).unwrap(), zero.clone()),
            (GradedElement::new(e(0, 1), g).unwrap(), zero),
        ];
        let r = rank1_reduce(&pairs, &Weight::trace(&m2()), &tol()).unwrap();
        assert!(r.right.data().is_zero());
        assert!((r.left.data() * r.right.data()).is_zero());
    }
}
