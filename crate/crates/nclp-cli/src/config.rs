use nclp::{Tolerances, C64};
use serde::{Deserialize, Serialize};

use crate::error::CliError;
use crate::io::ComplexDto;

/// Real parts sampled by the default suite.
pub const DEFAULT_REAL_PARTS: [f64; 5] = [0.0, 1.0 / 3.0, 0.5, 1.0, 1.5];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ToleranceConfig {
    pub rank_rel: f64,
    pub eq_abs: f64,
    pub eq_rel: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            rank_rel: 1e-10,
            eq_abs: 1e-6,
            eq_rel: 1e-6,
        }
    }
}

impl ToleranceConfig {
    pub fn to_tolerances(self) -> Result<Tolerances, CliError> {
        Tolerances::new(self.rank_rel, self.eq_abs, self.eq_rel).ok_or_else(|| {
            CliError::Config(format!(
                "tolerances must be positive and finite (rank_rel {}, eq_abs {}, eq_rel {})",
                self.rank_rel, self.eq_abs, self.eq_rel
            ))
        })
    }
}

/// Configuration of a `verify` run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SuiteConfig {
    pub seed: u64,
    pub trials: usize,
    pub block_shapes: Vec<Vec<usize>>,
    /// Base grading pairs `(a, b)`; each trial adds a random imaginary offset.
    pub gradings: Vec<[ComplexDto; 2]>,
    /// Imaginary offsets are drawn uniformly from `[-spread, spread]`.
    pub imaginary_spread: f64,
    pub tolerances: ToleranceConfig,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        let mut gradings = Vec::new();
        for &a in &DEFAULT_REAL_PARTS {
            for &b in &DEFAULT_REAL_PARTS {
                gradings.push([ComplexDto([a, 0.0]), ComplexDto([b, 0.0])]);
            }
        }
        Self {
            seed: 42,
            trials: 200,
            block_shapes: vec![vec![1], vec![2], vec![1, 1], vec![3], vec![2, 2]],
            gradings,
            imaginary_spread: 2.0,
            tolerances: ToleranceConfig::default(),
        }
    }
}

impl SuiteConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let cfg: SuiteConfig = serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.trials == 0 {
            return Err(CliError::Config("trials must be at least 1".into()));
        }
        if self.block_shapes.is_empty() {
            return Err(CliError::Config("block_shapes must not be empty".into()));
        }
        for shape in &self.block_shapes {
            nclp::BlockAlgebra::new(shape.clone())
                .map_err(|e| CliError::Config(format!("block shape {shape:?}: {e}")))?;
        }
        if self.gradings.is_empty() {
            return Err(CliError::Config("gradings must not be empty".into()));
        }
        for pair in &self.gradings {
            for g in pair {
                let [re, im] = g.0;
                if !(re.is_finite() && im.is_finite()) || re < 0.0 {
                    return Err(CliError::Config(format!("grading [{re}, {im}] must have Re >= 0")));
                }
            }
        }
        if !(self.imaginary_spread.is_finite() && self.imaginary_spread >= 0.0) {
            return Err(CliError::Config("imaginary_spread must be finite and nonnegative".into()));
        }
        self.tolerances.to_tolerances()?;
        Ok(())
    }

    pub fn grading_pairs(&self) -> Vec<(C64, C64)> {
        self.gradings.iter().map(|[a, b]| (a.to_c64(), b.to_c64())).collect()
    }
}
