//! Seeded pseudorandom elements for property checks.

use crate::algebra::rational::int;
use crate::algebra::AlgebraElement;
use crate::conformal::ConformalElement;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

pub const DEFAULT_COEFF_RANGE: i64 = 10;
pub const DEFAULT_BASE_DEGREE: u32 = 4;
pub const DEFAULT_PARTIAL_DEGREE: usize = 2;

/// Reproducible sampler; the same seed yields the same sequence on every
/// platform.
#[derive(Clone, Debug)]
pub struct Sampler {
    rng: ChaCha8Rng,
    pub coeff_range: i64,
    pub max_terms: usize,
    pub partial_degree: usize,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
            coeff_range: DEFAULT_COEFF_RANGE,
            max_terms: 3,
            partial_degree: DEFAULT_PARTIAL_DEGREE,
        }
    }

    pub fn with_partial_degree(mut self, k: usize) -> Self {
        self.partial_degree = k;
        self
    }

    fn coeff(&mut self) -> i64 {
        loop {
            let c = self.rng.gen_range(-self.coeff_range..=self.coeff_range);
            if c != 0 {
                return c;
            }
        }
    }

    pub fn index(&mut self, len: usize) -> usize {
        self.rng.gen_range(0..len)
    }

    /// A nonzero combination of up to `max_terms` spanning elements.
    pub fn algebra_element(&mut self, span: &[AlgebraElement]) -> AlgebraElement {
        assert!(!span.is_empty(), "cannot sample from an empty spanning set");
        loop {
            let mut out = AlgebraElement::zero(span[0].shape());
            let terms = self.rng.gen_range(1..=self.max_terms);
            for _ in 0..terms {
                let i = self.index(span.len());
                let c = int(self.coeff());
                out.add_scaled(&span[i], &c);
            }
            if !out.is_zero() {
                return out;
            }
        }
    }

    /// A nonzero Σ ∂^k ã_k with ∂-degree at most `partial_degree`.
    pub fn conformal_element(&mut self, span: &[AlgebraElement]) -> ConformalElement {
        let shape: Arc<_> = span[0].shape().clone();
        loop {
            let mut components = Vec::new();
            for _ in 0..=self.partial_degree {
                if self.rng.gen_bool(0.6) {
                    components.push(self.algebra_element(span));
                } else {
                    components.push(AlgebraElement::zero(&shape));
                }
            }
            let e = ConformalElement::from_components(&shape, &components);
            if !e.is_zero() {
                return e;
            }
        }
    }
}
