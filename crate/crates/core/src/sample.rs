//! Seeded random exact data for fitting and property checks.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graded_algebra::{Element, GradedLieAlgebra};
use crate::rational::{frac, Rational};
use crate::representation::Representation;
use crate::term_engine::Bindings;

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    /// A small rational `p/q` with `|p| ≤ 5`, `1 ≤ q ≤ 3`.
    pub fn rational(&mut self) -> Rational {
        frac(self.rng.gen_range(-5..=5), self.rng.gen_range(1..=3))
    }

    pub fn vec(&mut self, len: usize) -> Vec<Rational> {
        (0..len).map(|_| self.rational()).collect()
    }

    pub fn element(&mut self, alg: &GradedLieAlgebra, grade: i8) -> Element {
        let v = self.vec(alg.dim_grade(grade));
        alg.from_part(grade, v).expect("sized to the grade")
    }

    /// Random `τ`, `(∇^γ)^r Γ` for `r < k` and jets of order `≤ k`.
    pub fn bindings(&mut self, rep: &Representation, k: usize) -> Bindings {
        let n = rep.algebra.dim_grade(-1);
        let tau = self.element(&rep.algebra, 1);
        let gamma: BTreeMap<usize, Vec<Rational>> = (0..k.max(1)).map(|r| (r, self.vec(n.pow(r as u32 + 2)))).collect();
        let jets: BTreeMap<usize, Vec<Rational>> = (0..=k).map(|j| (j, self.vec(rep.tensor_dim(j)))).collect();
        Bindings { tau, gamma, jets }
    }
}
