//! Shared inputs for the benchmarks.

use std::sync::Arc;

use ahs_core::conformal_normalization::CurvatureData;
use ahs_core::rational::Rational;
use ahs_core::{Family, GradedLieAlgebra, RepDescriptor, Representation};

pub fn conformal(m: usize) -> Arc<GradedLieAlgebra> {
    Arc::new(GradedLieAlgebra::build(Family::Conformal { m, n: 0 }).expect("valid dimension"))
}

pub fn density(m: usize, w: Rational) -> Representation {
    Representation::new(conformal(m), &RepDescriptor::Density(w)).expect("density")
}

pub fn sphere(m: usize) -> (Arc<GradedLieAlgebra>, CurvatureData) {
    let alg = conformal(m);
    let k = CurvatureData::sphere(&alg).expect("sphere");
    (alg, k)
}
