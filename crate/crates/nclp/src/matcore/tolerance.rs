//! Numerical tolerance policy shared by every operation.

/// Cutoffs and comparison tolerances.
///
/// `rank_rel` decides which singular values (or eigenvalues) count as zero:
/// anything at or below `rank_rel * largest * block_dim` is dropped from
/// supports and functional calculus. `eq_abs` and `eq_rel` govern equality
/// and positivity checks, in the form `residual <= eq_abs + eq_rel * scale`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub rank_rel: f64,
    pub eq_abs: f64,
    pub eq_rel: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            rank_rel: 1e-10,
            eq_abs: 1e-9,
            eq_rel: 1e-9,
        }
    }
}

impl Tolerances {
    /// Returns `None` when the invariants (all positive, `rank_rel < 1`) fail.
    pub fn new(rank_rel: f64, eq_abs: f64, eq_rel: f64) -> Option<Self> {
        let t = Self {
            rank_rel,
            eq_abs,
            eq_rel,
        };
        t.is_valid().then_some(t)
    }

    pub fn is_valid(&self) -> bool {
        self.rank_rel > 0.0
            && self.rank_rel < 1.0
            && self.eq_abs > 0.0
            && self.eq_rel > 0.0
            && self.eq_abs.is_finite()
            && self.eq_rel.is_finite()
    }

    /// Allowed residual for a comparison whose natural magnitude is `scale`.
    pub fn allowed(&self, scale: f64) -> f64 {
        self.eq_abs + self.eq_rel * scale.abs()
    }

    pub fn close(&self, residual: f64, scale: f64) -> bool {
        residual <= self.allowed(scale)
    }

    /// Threshold below which a spectral value of a block of dimension `dim`
    /// is treated as zero, given the largest spectral value of the element.
    pub fn cutoff(&self, largest: f64, dim: usize) -> f64 {
        self.rank_rel * largest * dim as f64
    }

    pub fn report(&self, max_residual: f64, scale: f64, context: impl Into<String>) -> ToleranceReport {
        ToleranceReport::new(max_residual, self.allowed(scale), context)
    }
}

/// Outcome of a numerical identity check.
#[derive(Debug, Clone, PartialEq)]
pub struct ToleranceReport {
    pub max_residual: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub context: String,
}

impl ToleranceReport {
    pub fn new(max_residual: f64, tolerance: f64, context: impl Into<String>) -> Self {
        Self {
            max_residual,
            tolerance,
            passed: max_residual <= tolerance,
            context: context.into(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_is_valid() {
        assert!(Tolerances::default().is_valid());
    }

    #[test]
    fn rejects_nonpositive_or_large_rank_cutoff() {
        assert!(Tolerances::new(0.0, 1e-9, 1e-9).is_none());
        assert!(Tolerances::new(1.0, 1e-9, 1e-9).is_none());
        assert!(Tolerances::new(1e-10, -1.0, 1e-9).is_none());
        assert!(Tolerances::new(1e-10, 1e-9, 0.0).is_none());
    }

    #[test]
    fn report_pass_matches_threshold() {
        let r = ToleranceReport::new(1e-3, 1e-3, "edge");
        assert!(r.passed);
        let r = ToleranceReport::new(2e-3, 1e-3, "over");
        assert!(!r.passed);
    }
}
