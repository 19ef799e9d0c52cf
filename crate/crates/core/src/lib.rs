//! Exact-arithmetic invariant calculus on |1|-graded Lie algebras.
//!
//! The crate is organised bottom-up: [`graded_algebra`] builds the four
//! classical graded matrix algebras, [`representation`] adds weighted
//! `g0`-modules and tensor projectors, [`term_engine`] expands iterated
//! invariant differentials into covariant terms, [`jet_obstruction`] tests
//! candidate operators against the semi-holonomic jet action and
//! [`conformal_normalization`] computes the normal conformal connection.
//!
//! Every scalar is a [`Rational`]; there is no floating point anywhere.

pub mod conformal_normalization;
pub mod error;
pub mod graded_algebra;
pub mod jet_obstruction;
pub mod linalg;
pub mod poly;
pub mod rational;
pub mod representation;
pub mod sample;
pub mod term_engine;

pub use conformal_normalization::{CurvatureData, DeformationTensor};
pub use error::{Error, Result};
pub use graded_algebra::{Element, Family, GradedLieAlgebra, GroupFactorization};
pub use jet_obstruction::{JetModule, ProjectorKind, Verdict, WeightSet};
pub use linalg::Matrix;
pub use rational::Rational;
pub use representation::{RepDescriptor, Representation};
pub use term_engine::{Action, Beta, Expansion, Provenance, Term};
