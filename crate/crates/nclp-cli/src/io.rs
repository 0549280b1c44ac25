//! JSON shapes for algebras, elements, graded elements and weights.
//!
//! An element is `{"block_dims": [...], "blocks": [[[ [re, im], ... ]]]}` with
//! each block given row by row; a graded element adds `"grading": [re, im]`;
//! a weight is `{"density": <element>}`.

use nclp::{BlockAlgebra, Element, GradedElement, Tolerances, Weight, C64};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ComplexDto(pub [f64; 2]);

impl ComplexDto {
    pub fn to_c64(self) -> C64 {
        C64::new(self.0[0], self.0[1])
    }
}

impl From<C64> for ComplexDto {
    fn from(z: C64) -> Self {
        ComplexDto([z.re, z.im])
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElementDto {
    pub block_dims: Vec<usize>,
    pub blocks: Vec<Vec<Vec<ComplexDto>>>,
}

impl ElementDto {
    pub fn to_element(&self) -> Result<Element, CliError> {
        let alg = BlockAlgebra::new(self.block_dims.clone()).map_err(|e| CliError::Parse(e.to_string()))?;
        let rows: Vec<Vec<Vec<C64>>> = self
            .blocks
            .iter()
            .map(|b| b.iter().map(|r| r.iter().map(|z| z.to_c64()).collect()).collect())
            .collect();
        Element::from_rows(&alg, &rows).map_err(|e| CliError::Parse(e.to_string()))
    }
}

impl From<&Element> for ElementDto {
    fn from(x: &Element) -> Self {
        let blocks = x
            .blocks()
            .iter()
            .map(|b| {
                (0..b.nrows())
                    .map(|i| (0..b.ncols()).map(|j| ComplexDto::from(b[(i, j)])).collect())
                    .collect()
            })
            .collect();
        Self {
            block_dims: x.algebra().block_dims().to_vec(),
            blocks,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GradedDto {
    pub block_dims: Vec<usize>,
    pub blocks: Vec<Vec<Vec<ComplexDto>>>,
    pub grading: ComplexDto,
}

impl GradedDto {
    pub fn to_graded(&self) -> Result<GradedElement, CliError> {
        let data = ElementDto {
            block_dims: self.block_dims.clone(),
            blocks: self.blocks.clone(),
        }
        .to_element()?;
        GradedElement::new(data, self.grading.to_c64()).map_err(|e| CliError::Parse(e.to_string()))
    }
}

impl From<&GradedElement> for GradedDto {
    fn from(x: &GradedElement) -> Self {
        let e = ElementDto::from(x.data());
        Self {
            block_dims: e.block_dims,
            blocks: e.blocks,
            grading: x.grading().into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightDto {
    pub density: ElementDto,
}

impl WeightDto {
    pub fn to_weight(&self, tol: &Tolerances) -> Result<Weight, CliError> {
        Weight::new(self.density.to_element()?, tol).map_err(|e| CliError::Parse(e.to_string()))
    }
}

impl From<&Weight> for WeightDto {
    fn from(w: &Weight) -> Self {
        Self {
            density: w.density().into(),
        }
    }
}

pub fn parse<T: DeserializeOwned>(text: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))
}

pub fn read_json<T: DeserializeOwned>(path: &std::path::Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    parse(&text)
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable value")
}

#[cfg(test)]
mod tests {
    use super::*;

    const ELEMENT: &str = r#"{"block_dims":[2,1],"blocks":[[[[1.0,0.0],[0.5,-0.25]],[[0.1,0.2],[3.0,0.0]]],[[[-1.5,1e-17]]]]}"#;

    #[test]
    fn element_roundtrip_is_byte_identical() {
        let dto: ElementDto = parse(ELEMENT).unwrap();
        let x = dto.to_element().unwrap();
        let once = to_json(&ElementDto::from(&x));
        let again = to_json(&ElementDto::from(&parse::<ElementDto>(&once).unwrap().to_element().unwrap()));
        assert_eq!(once, again);
        assert_eq!(x.block(0)[(0, 1)], C64::new(0.5, -0.25));
    }

    #[test]
    fn weight_roundtrip_is_byte_identical() {
        let text = r#"{"density":{"block_dims":[2],"blocks":[[[[2.0,0.0],[0.0,1.0]],[[0.0,-1.0],[3.0,0.0]]]]}}"#;
        let tol = Tolerances::default();
        let w = parse::<WeightDto>(text).unwrap().to_weight(&tol).unwrap();
        let once = to_json(&WeightDto::from(&w));
        let again = to_json(&WeightDto::from(&parse::<WeightDto>(&once).unwrap().to_weight(&tol).unwrap()));
        assert_eq!(once, again);
    }

    #[test]
    fn graded_roundtrip() {
        let text = r#"{"block_dims":[1],"blocks":[[[[2.0,0.0]]]],"grading":[0.5,-1.0]}"#;
        let g = parse::<GradedDto>(text).unwrap().to_graded().unwrap();
        assert_eq!(g.grading(), C64::new(0.5, -1.0));
        assert_eq!(GradedDto::from(&g), parse::<GradedDto>(text).unwrap());
    }

    #[test]
    fn shape_errors_are_parse_errors() {
        let bad = r#"{"block_dims":[2],"blocks":[[[[1.0,0.0]]]]}"#;
        assert!(matches!(parse::<ElementDto>(bad).unwrap().to_element(), Err(CliError::Parse(_))));
    }
}
