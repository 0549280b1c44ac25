//! Weights as density matrices against the block trace.
//!
//! A weight `μ` with density `h ≥ 0` evaluates as `μ(x) = trace(h·x)`. For
//! imaginary `a` the modular group is `σ^μ_a(p) = h^a p h^{-a}` and the Connes
//! cocycle is `(Dμ:Dν)_a = h^a k^{-a}`, where `k` is the density of `ν`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matcore::spectral::{self, HermitianEig};
use crate::matcore::{
    operator_norm, power_pos, BlockAlgebra, CMatrix, Element, LinearMap, ToleranceReport, Tolerances,
};

/// A weight `x ↦ trace(h·x)` with positive semidefinite density `h`.
#[derive(Debug, Clone, PartialEq)]
pub struct Weight {
    density: Element,
    support: Element,
    min_eigenvalue: f64,
    faithful: bool,
}

impl Weight {
    pub fn new(density: Element, tol: &Tolerances) -> Result<Self> {
        let eig = spectral::eigh_positive(&density, tol)?;
        Ok(Self::from_eig(density, &eig, tol))
    }

    fn from_eig(density: Element, eig: &HermitianEig, tol: &Tolerances) -> Self {
        let support = spectral::func_calc_with(
            &density,
            eig,
            |t| Complex64::new(if t > 0.0 { 1.0 } else { 0.0 }, 0.0),
            tol,
        );
        let largest = eig.max_value().max(0.0);
        let min_eigenvalue = eig.min_value();
        let faithful = eig.blocks.iter().zip(density.algebra().block_dims()).all(|(b, &n)| {
            let cut = tol.cutoff(largest, n);
            b.values.iter().all(|&l| l > cut)
        });
        Self {
            density,
            support,
            min_eigenvalue,
            faithful,
        }
    }

    /// The block trace itself (density = identity).
    pub fn trace(algebra: &BlockAlgebra) -> Self {
        Self {
            density: Element::identity(algebra),
            support: Element::identity(algebra),
            min_eigenvalue: 1.0,
            faithful: true,
        }
    }

    pub fn algebra(&self) -> &BlockAlgebra {
        self.density.algebra()
    }

    pub fn density(&self) -> &Element {
        &self.density
    }

    pub fn support(&self) -> &Element {
        &self.support
    }

    pub fn is_faithful(&self) -> bool {
        self.faithful
    }

    pub fn ensure_faithful(&self) -> Result<()> {
        if self.faithful {
            Ok(())
        } else {
            Err(Error::NotFaithful {
                min_eigenvalue: self.min_eigenvalue,
            })
        }
    }

    /// `μ(x) = trace(h·x)`.
    pub fn evaluate(&self, x: &Element) -> Result<Complex64> {
        Ok(self.density.mul(x)?.trace())
    }
}

fn ensure_imaginary(a: Complex64, tol: &Tolerances) -> Result<()> {
    if a.re.abs() > tol.eq_abs {
        Err(Error::NotImaginary { grading: a })
    } else {
        Ok(())
    }
}

fn imaginary(a: Complex64) -> Complex64 {
    Complex64::new(0.0, a.im)
}

/// `σ^μ_a(p) = h^a p h^{-a}` for imaginary `a` and faithful `μ`.
pub fn modular_automorphism(mu: &Weight, a: Complex64, p: &Element, tol: &Tolerances) -> Result<Element> {
    ensure_imaginary(a, tol)?;
    mu.ensure_faithful()?;
    mu.algebra().ensure_compatible(p.algebra())?;
    let a = imaginary(a);
    let left = power_pos(mu.density(), a, tol)?;
    let right = power_pos(mu.density(), -a, tol)?;
    Ok(&(&left * p) * &right)
}

/// `(Dμ:Dν)_a = h^a k^{-a}`; `ν` must be faithful, `μ` may have a kernel.
pub fn connes_cocycle(mu: &Weight, nu: &Weight, a: Complex64, tol: &Tolerances) -> Result<Element> {
    ensure_imaginary(a, tol)?;
    nu.ensure_faithful()?;
    mu.algebra().ensure_compatible(nu.algebra())?;
    let a = imaginary(a);
    Ok(&power_pos(mu.density(), a, tol)? * &power_pos(nu.density(), -a, tol)?)
}

/// Residual of `(Dμ:Dν)_{a+b} = (Dμ:Dν)_a · σ^ν_a((Dμ:Dν)_b)` in operator norm.
pub fn cocycle_identity_check(
    mu: &Weight,
    nu: &Weight,
    a: Complex64,
    b: Complex64,
    tol: &Tolerances,
) -> Result<ToleranceReport> {
    let lhs = connes_cocycle(mu, nu, a + b, tol)?;
    let ua = connes_cocycle(mu, nu, a, tol)?;
    let ub = connes_cocycle(mu, nu, b, tol)?;
    let rhs = &ua * &modular_automorphism(nu, a, &ub, tol)?;
    let residual = operator_norm(&(&lhs - &rhs));
    Ok(tol.report(residual, 1.0, format!("cocycle identity at a={a}, b={b}")))
}

/// Re-expresses `ξ = x·μ^a` as `x'·ν^a`, i.e. `x' = x·h^a·k^{-a}`.
pub fn change_of_weight(
    x: &Element,
    a: Complex64,
    mu: &Weight,
    nu: &Weight,
    tol: &Tolerances,
) -> Result<Element> {
    if a.re < -tol.eq_abs {
        return Err(Error::NegativeGrading { grading: a });
    }
    mu.ensure_faithful()?;
    nu.ensure_faithful()?;
    mu.algebra().ensure_compatible(nu.algebra())?;
    let factor = &power_pos(mu.density(), a, tol)? * &power_pos(nu.density(), -a, tol)?;
    x.mul(&factor)
}

/// A bounded operator-valued weight `T: N → M` together with the unital
/// embedding `f: M → N` it is a bimodule map over.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorValuedWeight {
    embedding: LinearMap,
    map: LinearMap,
}

impl OperatorValuedWeight {
    /// Validates `f` as a unital *-homomorphism, and `T` for the bimodule law
    /// `T(f(p)·q·f(r)*) = p·T(q)·r*` on matrix units and complete positivity.
    pub fn new(embedding: LinearMap, map: LinearMap, tol: &Tolerances) -> Result<Self> {
        embedding.domain().ensure_compatible(map.codomain())?;
        embedding.codomain().ensure_compatible(map.domain())?;
        let w = Self { embedding, map };
        w.validate(tol)?;
        Ok(w)
    }

    /// Identity on `M`, over the identity embedding.
    pub fn identity(algebra: &BlockAlgebra) -> Self {
        Self {
            embedding: LinearMap::identity(algebra),
            map: LinearMap::identity(algebra),
        }
    }

    /// Embedding `f(x)_j = ⊕_k x_k ⊗ 1_{mult[j][k]}` into the algebra whose
    /// block `j` has dimension `Σ_k mult[j][k]·n_k`, with `T` the trace-adjoint
    /// of `f`: `trace_M(x·T(y)) = trace_N(f(x)·y)`.
    pub fn from_multiplicities(target: &BlockAlgebra, mult: &[Vec<usize>], tol: &Tolerances) -> Result<Self> {
        let dims = target.block_dims();
        for row in mult {
            if row.len() != dims.len() {
                return Err(Error::DimensionMismatch {
                    expected: dims.len(),
                    found: row.len(),
                });
            }
        }
        let source_dims: Vec<usize> = mult
            .iter()
            .map(|row| row.iter().zip(dims).map(|(m, n)| m * n).sum())
            .collect();
        let source = BlockAlgebra::new(source_dims)?;
        let embedding = LinearMap::from_fn(target, &source, |x| {
            let blocks = mult
                .iter()
                .zip(source.block_dims())
                .map(|(row, &size)| {
                    let mut b = CMatrix::zeros(size, size);
                    let mut off = 0;
                    for (k, &copies) in row.iter().enumerate() {
                        let n = dims[k];
                        let piece = x.block(k).kronecker(&CMatrix::identity(copies, copies));
                        b.view_mut((off, off), (n * copies, n * copies)).copy_from(&piece);
                        off += n * copies;
                    }
                    b
                })
                .collect();
            Element::new(&source, blocks)
        })?;
        let map = LinearMap::new(&source, target, embedding.matrix().adjoint())?;
        Self::new(embedding, map, tol)
    }

    /// Partial trace `M_{n·m} → M_n` over the second tensor factor, for the
    /// embedding `x ↦ x ⊗ 1_m`.
    pub fn partial_trace(n: usize, m: usize, tol: &Tolerances) -> Result<Self> {
        Self::from_multiplicities(&BlockAlgebra::full(n)?, &[vec![m]], tol)
    }

    pub fn source(&self) -> &BlockAlgebra {
        self.map.domain()
    }

    pub fn target(&self) -> &BlockAlgebra {
        self.map.codomain()
    }

    pub fn embedding(&self) -> &LinearMap {
        &self.embedding
    }

    pub fn map(&self) -> &LinearMap {
        &self.map
    }

    pub fn apply(&self, x: &Element) -> Result<Element> {
        self.map.apply(x)
    }

    /// `c·T` for `c > 0`.
    pub fn scale(&self, c: f64) -> Self {
        Self {
            embedding: self.embedding.clone(),
            map: self.map.scale(c),
        }
    }

    /// `self ∘ inner`, over the composite embedding `f_inner ∘ f_self`.
    pub fn compose(&self, inner: &OperatorValuedWeight, tol: &Tolerances) -> Result<Self> {
        let map = self.map.compose(&inner.map)?;
        let embedding = inner.embedding.compose(&self.embedding)?;
        Self::new(embedding, map, tol)
    }

    pub fn validate(&self, tol: &Tolerances) -> Result<()> {
        let m = self.target();
        let n = self.source();
        let f = |x: &Element| self.embedding.apply(x);

        let one_defect = (&f(&Element::identity(m))? - &Element::identity(n)).max_abs();
        if !tol.close(one_defect, 1.0) {
            return Err(violation("embedding is not unital", one_defect));
        }

        let units: Vec<Element> = m
            .matrix_units()
            .map(|(k, i, j)| Element::matrix_unit(m, k, i, j))
            .collect();
        let images: Vec<Element> = units.iter().map(f).collect::<Result<_>>()?;
        let mut worst = 0.0f64;
        for (p, fp) in units.iter().zip(&images) {
            worst = worst.max((&f(&p.adjoint())? - &fp.adjoint()).max_abs());
            for (r, fr) in units.iter().zip(&images) {
                worst = worst.max((&f(&(p * r))? - &(fp * fr)).max_abs());
            }
        }
        if !tol.close(worst, 1.0) {
            return Err(violation("embedding is not a *-homomorphism", worst));
        }

        let n_units: Vec<Element> = n
            .matrix_units()
            .map(|(k, i, j)| Element::matrix_unit(n, k, i, j))
            .collect();
        let t_units: Vec<Element> = n_units.iter().map(|q| self.apply(q)).collect::<Result<_>>()?;
        let scale = t_units.iter().map(Element::max_abs).fold(0.0, f64::max);
        let mut worst = 0.0f64;
        for (q, tq) in n_units.iter().zip(&t_units) {
            for (p, fp) in units.iter().zip(&images) {
                let left = fp * q;
                let lhs_p = &left;
                for (r, fr) in units.iter().zip(&images) {
                    let lhs = self.apply(&(lhs_p * &fr.adjoint()))?;
                    let rhs = &(p * tq) * &r.adjoint();
                    worst = worst.max((&lhs - &rhs).max_abs());
                }
            }
        }
        if !tol.close(worst, scale) {
            return Err(violation("bimodule law T(f(p) q f(r)*) = p T(q) r*", worst));
        }

        let min_choi = self.choi_min_eigenvalue(&t_units);
        let choi_scale = scale * n.space_dim() as f64;
        if min_choi < -tol.allowed(choi_scale) {
            return Err(violation("T is not (completely) positive", -min_choi));
        }
        Ok(())
    }

    // Smallest eigenvalue over the Choi matrices Σ_ab E_ab ⊗ T(E_ab)_k, one per
    // (source block, target block) pair.
    fn choi_min_eigenvalue(&self, t_units: &[Element]) -> f64 {
        let n = self.source();
        let m = self.target();
        let mut min = f64::INFINITY;
        let mut unit = 0;
        for &nj in n.block_dims() {
            let images = &t_units[unit..unit + nj * nj];
            unit += nj * nj;
            for (k, &mk) in m.block_dims().iter().enumerate() {
                let mut choi = CMatrix::zeros(nj * mk, nj * mk);
                for a in 0..nj {
                    for b in 0..nj {
                        choi.view_mut((a * mk, b * mk), (mk, mk))
                            .copy_from(images[a * nj + b].block(k));
                    }
                }
                let herm = (&choi + choi.adjoint()).scale(0.5);
                let e = nalgebra::SymmetricEigen::new(herm);
                min = min.min(e.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min));
            }
        }
        min
    }
}

fn violation(law: &str, residual: f64) -> Error {
    Error::ValidationFailed {
        law: law.to_string(),
        residual,
    }
}

/// `μ ∘ T` as a weight on the source algebra: the density `g` with
/// `trace(g·x) = trace(h·T(x))`, i.e. `g_{ji} = μ(T(e_ij))`.
pub fn pushforward_weight(mu: &Weight, t: &OperatorValuedWeight, tol: &Tolerances) -> Result<Weight> {
    mu.algebra().ensure_compatible(t.target())?;
    let n = t.source();
    let mut g = Element::zero(n);
    for (k, i, j) in n.matrix_units() {
        let v = mu.evaluate(&t.apply(&Element::matrix_unit(n, k, i, j))?)?;
        g = &g + &Element::matrix_unit(n, k, j, i).scale(v);
    }
    Weight::new(g.hermitian_part(), tol)
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

    fn i(t: f64) -> Complex64 {
        Complex64::new(0.0, t)
    }

    fn density() -> Element {
        Element::from_rows(
            &m2(),
            &[vec![
                vec![Complex64::new(2.0, 0.0), Complex64::new(0.5, 0.3)],
                vec![Complex64::new(0.5, -0.3), Complex64::new(1.0, 0.0)],
            ]],
        )
        .unwrap()
    }

    #[test]
    fn evaluate_examples() {
        let x = Element::from_real_rows(&m2(), &[vec![vec![1.0, 2.0], vec![3.0, 4.0]]]).unwrap();
        assert_eq!(Weight::trace(&m2()).evaluate(&x).unwrap(), x.trace());
        let mu = Weight::new(Element::real_diagonal(&m2(), &[1.0, 2.0]).unwrap(), &tol()).unwrap();
        assert_relative_eq!(mu.evaluate(&Element::identity(&m2())).unwrap().re, 3.0);
        let v = mu.evaluate(&(&x.adjoint() * &x)).unwrap();
        assert!(v.re >= 0.0 && v.im.abs() < 1e-14);
    }

    #[test]
    fn faithfulness() {
        assert!(Weight::new(density(), &tol()).unwrap().is_faithful());
        let w = Weight::new(Element::real_diagonal(&m2(), &[1.0, 0.0]).unwrap(), &tol()).unwrap();
        assert!(!w.is_faithful());
        assert!(Weight::new(Element::real_diagonal(&m2(), &[1.0, -1.0]).unwrap(), &tol()).is_err());
    }

    #[test]
    fn trace_has_trivial_modular_flow() {
        let tau = Weight::trace(&m2());
        let p = Element::from_real_rows(&m2(), &[vec![vec![1.0, 2.0], vec![3.0, 4.0]]]).unwrap();
        for t in [0.0, 0.7, -3.0] {
            assert_eq!(modular_automorphism(&tau, i(t), &p, &tol()).unwrap(), p);
        }
    }

    #[test]
    fn modular_flow_on_matrix_unit() {
        // h = diag(1,2): σ_a(e12) = 1^a · e12 · 2^{-a}
        let mu = Weight::new(Element::real_diagonal(&m2(), &[1.0, 2.0]).unwrap(), &tol()).unwrap();
        let e12 = Element::matrix_unit(&m2(), 0, 0, 1);
        let a = i(0.8);
        let got = modular_automorphism(&mu, a, &e12, &tol()).unwrap();
        let expected = e12.scale((-a * 2f64.ln()).exp());
        assert!((&got - &expected).max_abs() < 1e-15);
        let at_zero = modular_automorphism(&Weight::new(density(), &tol()).unwrap(), i(0.0), &e12, &tol()).unwrap();
        assert!((&at_zero - &e12).max_abs() < 1e-14);
    }

    #[test]
    fn modular_rejects_real_grading_and_nonfaithful() {
        let mu = Weight::new(density(), &tol()).unwrap();
        let p = Element::identity(&m2());
        assert!(matches!(
            modular_automorphism(&mu, Complex64::new(0.5, 1.0), &p, &tol()),
            Err(Error::NotImaginary { .. })
        ));
        let deg = Weight::new(Element::real_diagonal(&m2(), &[1.0, 0.0]).unwrap(), &tol()).unwrap();
        assert!(matches!(
            modular_automorphism(&deg, i(1.0), &p, &tol()),
            Err(Error::NotFaithful { .. })
        ));
    }

    #[test]
    fn cocycle_examples() {
        let mu = Weight::new(density(), &tol()).unwrap();
        let id = Element::identity(&m2());
        let u = connes_cocycle(&mu, &mu, i(1.3), &tol()).unwrap();
        assert!((&u - &id).max_abs() < 1e-13);

        let tau = Weight::trace(&m2());
        let u = connes_cocycle(&mu, &tau, i(0.4), &tol()).unwrap();
        let expected = power_pos(mu.density(), i(0.4), &tol()).unwrap();
        assert!((&u - &expected).max_abs() < 1e-14);

        assert!(matches!(
            connes_cocycle(&tau, &Weight::new(Element::real_diagonal(&m2(), &[1.0, 0.0]).unwrap(), &tol()).unwrap(), i(1.0), &tol()),
            Err(Error::NotFaithful { .. })
        ));
    }

    #[test]
    fn cocycle_with_nonfaithful_mu_is_partial_isometry() {
        let mu = Weight::new(Element::real_diagonal(&m2(), &[3.0, 0.0]).unwrap(), &tol()).unwrap();
        let nu = Weight::new(density(), &tol()).unwrap();
        let u = connes_cocycle(&mu, &nu, i(0.9), &tol()).unwrap();
        let uu = &u * &u.adjoint();
        assert!((&uu - mu.support()).max_abs() < 1e-13);
    }

    #[test]
    fn cocycle_identity_trivial_cases() {
        let mu = Weight::new(density(), &tol()).unwrap();
        let nu = Weight::new(Element::real_diagonal(&m2(), &[0.5, 4.0]).unwrap(), &tol()).unwrap();
        let r = cocycle_identity_check(&mu, &nu, i(0.0), i(0.0), &tol()).unwrap();
        assert!(r.passed && r.max_residual < 1e-14);
        let d = Weight::new(Element::real_diagonal(&m2(), &[2.0, 7.0]).unwrap(), &tol()).unwrap();
        let r = cocycle_identity_check(&d, &nu, i(1.1), i(-0.3), &tol()).unwrap();
        assert!(r.passed && r.max_residual < 1e-14);
    }

    #[test]
    fn change_of_weight_commutative_matches_scalar_ratio() {
        let c2 = BlockAlgebra::diagonal(2).unwrap();
        let mu = Weight::new(Element::real_diagonal(&c2, &[2.0, 5.0]).unwrap(), &tol()).unwrap();
        let nu = Weight::new(Element::real_diagonal(&c2, &[0.5, 3.0]).unwrap(), &tol()).unwrap();
        let a = Complex64::new(0.7, -0.4);
        let x = Element::real_diagonal(&c2, &[1.5, -2.0]).unwrap();
        let got = change_of_weight(&x, a, &mu, &nu, &tol()).unwrap();
        let ratio = |h: f64, k: f64| Complex64::new(h / k, 0.0).powc(a);
        let expected = Element::diagonal(&c2, &[ratio(2.0, 0.5) * 1.5, ratio(5.0, 3.0) * -2.0]).unwrap();
        assert!((&got - &expected).max_abs() < 1e-13);
    }

    #[test]
    fn change_of_weight_trivial_cases() {
        let mu = Weight::new(density(), &tol()).unwrap();
        let nu = Weight::new(Element::real_diagonal(&m2(), &[0.5, 4.0]).unwrap(), &tol()).unwrap();
        let x = Element::from_real_rows(&m2(), &[vec![vec![1.0, 2.0], vec![3.0, 4.0]]]).unwrap();
        let same = change_of_weight(&x, Complex64::new(0.8, 0.2), &mu, &mu, &tol()).unwrap();
        assert!((&same - &x).max_abs() < 1e-13);
        let zero_grading = change_of_weight(&x, Complex64::new(0.0, 0.0), &mu, &nu, &tol()).unwrap();
        assert!((&zero_grading - &x).max_abs() < 1e-13);
    }

    #[test]
    fn partial_trace_pushes_trace_to_trace() {
        let t = OperatorValuedWeight::partial_trace(2, 2, &tol()).unwrap();
        let tau = Weight::trace(&m2());
        let pushed = pushforward_weight(&tau, &t, &tol()).unwrap();
        let m4 = BlockAlgebra::full(4).unwrap();
        assert!((pushed.density() - &Element::identity(&m4)).max_abs() < 1e-15);
    }

    #[test]
    fn pushforward_identity_and_scaling() {
        let mu = Weight::new(density(), &tol()).unwrap();
        let id = OperatorValuedWeight::identity(&m2());
        let pushed = pushforward_weight(&mu, &id, &tol()).unwrap();
        assert!((pushed.density() - mu.density()).max_abs() < 1e-15);

        let t = OperatorValuedWeight::partial_trace(2, 3, &tol()).unwrap();
        let once = pushforward_weight(&mu, &t, &tol()).unwrap();
        let twice = pushforward_weight(&mu, &t.scale(2.0), &tol()).unwrap();
        assert!((&once.density().scale_real(2.0) - twice.density()).max_abs() < 1e-14);
    }

    #[test]
    fn multiplicity_embedding_and_composition() {
        let c2 = BlockAlgebra::diagonal(2).unwrap();
        // C ⊕ C → M_3 ⊕ M_1 with block 0 receiving (1 copy, 2 copies) and block 1 (1, 0)
        let t = OperatorValuedWeight::from_multiplicities(&c2, &[vec![1, 2], vec![1, 0]], &tol()).unwrap();
        assert_eq!(t.source().block_dims(), &[3, 1]);
        let s = OperatorValuedWeight::from_multiplicities(t.source(), &[vec![2, 0], vec![0, 1]], &tol()).unwrap();
        let ts = t.compose(&s, &tol()).unwrap();
        let mu = Weight::new(Element::real_diagonal(&c2, &[1.5, 0.25]).unwrap(), &tol()).unwrap();
        let lhs = pushforward_weight(&pushforward_weight(&mu, &t, &tol()).unwrap(), &s, &tol()).unwrap();
        let rhs = pushforward_weight(&mu, &ts, &tol()).unwrap();
        assert!((lhs.density() - rhs.density()).max_abs() < 1e-14);
        assert!(rhs.is_faithful());
    }

    #[test]
    fn validation_rejects_broken_maps() {
        let m4 = BlockAlgebra::full(4).unwrap();
        let good = OperatorValuedWeight::partial_trace(2, 2, &tol()).unwrap();
        // transpose is positive but not a bimodule map
        let transpose = LinearMap::from_fn(&m4, &m2(), |y| {
            let pt = good.apply(y)?;
            Element::new(&m2(), vec![pt.block(0).transpose()])
        })
        .unwrap();
        let err = OperatorValuedWeight::new(good.embedding().clone(), transpose, &tol()).unwrap_err();
        assert!(matches!(err, Error::ValidationFailed { .. }));

        let negative = good.map().scale(-1.0);
        let err = OperatorValuedWeight::new(good.embedding().clone(), negative, &tol()).unwrap_err();
        match err {
            Error::ValidationFailed { law, .. } => assert!(law.contains("positive")),
            other => panic!("unexpected {other:?}"),
        }
    }
}
