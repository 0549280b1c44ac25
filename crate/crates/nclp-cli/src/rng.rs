//! Seeded random sampling for the property suite.
//!
//! Every trial owns a ChaCha8 stream whose 64-bit seed is derived from the
//! run seed, the property name and the trial index:
//!
//! ```text
//! seed(run, name, trial) = splitmix64(splitmix64(run ^ fnv1a64(name)) ^ trial)
//! ```
//!
//! and expanded with `SeedableRng::seed_from_u64`. Trials are therefore
//! independent of scheduling and of which other properties run.

use nclp::{BlockAlgebra, Element, GradedElement, Tolerances, Weight, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn fnv1a64(s: &str) -> u64 {
    s.bytes().fold(0xCBF2_9CE4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01B3))
}

pub fn trial_seed(seed: u64, property: &str, trial: u64) -> u64 {
    splitmix64(splitmix64(seed ^ fnv1a64(property)) ^ trial)
}

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn for_trial(seed: u64, property: &str, trial: u64) -> Self {
        Self::new(trial_seed(seed, property, trial))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.random()
    }

    pub fn gaussian(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }

    /// Uniform on `[lo, hi)`.
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.rng.random::<f64>()
    }

    pub fn index(&mut self, n: usize) -> usize {
        self.rng.random_range(0..n)
    }

    /// Inclusive integer range.
    pub fn range(&mut self, lo: usize, hi: usize) -> usize {
        self.rng.random_range(lo..=hi)
    }

    pub fn coin(&mut self, p: f64) -> bool {
        self.rng.random_bool(p)
    }

    /// Standard complex Gaussian: independent real and imaginary parts of variance 1/2.
    pub fn complex_gaussian(&mut self) -> C64 {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        C64::new(self.gaussian() * s, self.gaussian() * s)
    }

    pub fn element(&mut self, alg: &BlockAlgebra) -> Element {
        let blocks = alg
            .block_dims()
            .iter()
            .map(|&n| nclp::matcore::CMatrix::from_fn(n, n, |_, _| self.complex_gaussian()))
            .collect();
        Element::new(alg, blocks).expect("shapes follow the algebra")
    }

    /// Product of Gaussian `n×k` and `k×n` factors per block, `k` drawn from `0..=n`
    /// (full rank half of the time).
    pub fn low_rank_element(&mut self, alg: &BlockAlgebra) -> Element {
        let blocks = alg
            .block_dims()
            .iter()
            .map(|&n| {
                let k = if self.coin(0.5) { n } else { self.range(0, n) };
                self.rank_k_block(n, k)
            })
            .collect();
        Element::new(alg, blocks).expect("shapes follow the algebra")
    }

    pub fn rank_k_block(&mut self, n: usize, k: usize) -> nclp::matcore::CMatrix {
        let a = nclp::matcore::CMatrix::from_fn(n, k, |_, _| self.complex_gaussian());
        let b = nclp::matcore::CMatrix::from_fn(k, n, |_, _| self.complex_gaussian());
        a * b
    }

    pub fn graded(&mut self, alg: &BlockAlgebra, a: C64) -> GradedElement {
        GradedElement::new(self.element(alg), a).expect("sampled gradings have Re >= 0")
    }

    /// `g·g*` for Gaussian `g`.
    pub fn positive(&mut self, alg: &BlockAlgebra) -> Element {
        let g = self.element(alg);
        &g * &g.adjoint()
    }

    /// `g·g* + ε·1`, faithful for `ε > 0`.
    pub fn weight(&mut self, alg: &BlockAlgebra, eps: f64, tol: &Tolerances) -> Weight {
        let h = &self.positive(alg) + &Element::identity(alg).scale_real(eps);
        Weight::new(h.hermitian_part(), tol).expect("g·g* + ε is positive")
    }

    /// Uniform on the imaginary segment `i·[-spread, spread]`.
    pub fn imaginary(&mut self, spread: f64) -> C64 {
        C64::new(0.0, self.uniform(-spread, spread))
    }
}
