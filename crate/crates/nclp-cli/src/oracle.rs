//! Scalar reference for the commutative case, with no matrix code involved.

use nclp::{BlockAlgebra, Element, Tolerances, Weight, C64};
use serde::{Deserialize, Serialize};

use crate::error::CliError;
use crate::io::ComplexDto;

/// `(Σ_k μ_k·|f_k|^{1/Re a})^{Re a}`, the norm of `f` in `L_a` of a finite
/// measure space with point masses `μ_k`.
pub fn oracle_commutative(f: &[C64], a: C64, mu: &[f64]) -> Result<f64, CliError> {
    if f.len() != mu.len() {
        return Err(CliError::Parse(format!(
            "length mismatch: {} values against {} weights",
            f.len(),
            mu.len()
        )));
    }
    if a.re.is_nan() || a.re <= 0.0 {
        return Err(CliError::Parse(format!("oracle needs Re a > 0, got {a}")));
    }
    if let Some(m) = mu.iter().find(|m| !(**m > 0.0 && m.is_finite())) {
        return Err(CliError::Parse(format!("weights must be positive, got {m}")));
    }
    let top = f.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if top == 0.0 {
        return Ok(0.0);
    }
    let p = 1.0 / a.re;
    let sum: f64 = f.iter().zip(mu).map(|(z, m)| m * (z.norm() / top).powf(p)).sum();
    Ok(top * sum.powf(a.re))
}

/// The same norm through the matrix path: the diagonal element `f·μ^a` in
/// tracial coordinates of the diagonal algebra, measured by `lnorm`.
pub fn matrix_path(f: &[C64], a: C64, mu: &[f64], tol: &Tolerances) -> Result<f64, CliError> {
    let alg = BlockAlgebra::diagonal(f.len()).map_err(|e| CliError::Parse(e.to_string()))?;
    let weight = Weight::new(Element::real_diagonal(&alg, mu)?, tol)?;
    let x = Element::diagonal(&alg, f)?;
    let data = nclp::weights::change_of_weight(&x, a, &weight, &Weight::trace(&alg), tol)?;
    Ok(nclp::lpspace::lnorm(&nclp::GradedElement::new(data, a)?))
}

/// A real number or a `[re, im]` pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Real(f64),
    Complex(ComplexDto),
}

impl Scalar {
    pub fn to_c64(self) -> C64 {
        match self {
            Scalar::Real(r) => C64::new(r, 0.0),
            Scalar::Complex(z) => z.to_c64(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleInput {
    pub f: Vec<Scalar>,
    pub a: Scalar,
    pub mu: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleOutput {
    pub input: OracleInput,
    pub oracle: f64,
    pub matrix_path: f64,
    pub relative_difference: f64,
}

pub fn run_oracle(input: &OracleInput, tol: &Tolerances) -> Result<OracleOutput, CliError> {
    let f: Vec<C64> = input.f.iter().map(|s| s.to_c64()).collect();
    let a = input.a.to_c64();
    let oracle = oracle_commutative(&f, a, &input.mu)?;
    let matrix = matrix_path(&f, a, &input.mu, tol)?;
    let relative_difference = if oracle == 0.0 {
        matrix.abs()
    } else {
        (matrix - oracle).abs() / oracle
    };
    Ok(OracleOutput {
        input: input.clone(),
        oracle,
        matrix_path: matrix,
        relative_difference,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(v: &[f64]) -> Vec<C64> {
        v.iter().map(|&x| C64::new(x, 0.0)).collect()
    }

    #[test]
    fn reference_values() {
        let one = C64::new(1.0, 0.0);
        assert_eq!(oracle_commutative(&r(&[1.0, 1.0]), one, &[1.0, 1.0]).unwrap(), 2.0);
        let v = oracle_commutative(&r(&[3.0, 4.0]), C64::new(0.5, 0.0), &[1.0, 1.0]).unwrap();
        assert!((v - 5.0).abs() < 1e-15);
        assert_eq!(oracle_commutative(&r(&[2.0, 0.0]), one, &[1.0, 5.0]).unwrap(), 2.0);
    }

    #[test]
    fn length_mismatch_is_rejected() {
        assert!(oracle_commutative(&r(&[1.0]), C64::new(1.0, 0.0), &[1.0, 2.0]).is_err());
    }

    #[test]
    fn matrix_path_agrees() {
        let tol = Tolerances::default();
        let f = vec![C64::new(1.0, -2.0), C64::new(0.3, 0.0), C64::new(0.0, 0.7)];
        let mu = [0.5, 2.0, 3.0];
        let a = C64::new(0.7, 1.3);
        let o = oracle_commutative(&f, a, &mu).unwrap();
        let m = matrix_path(&f, a, &mu, &tol).unwrap();
        assert!((o - m).abs() <= 1e-12 * o);
    }
}
