//! Adversarially robust learning of `[0, 1]`-valued functions when every
//! test point may be replaced by any member of a finite perturbation set.
//!
//! The crate provides robust ERM oracles for finite and constant classes,
//! fat-shattering and dual dimensions, greedy covers in the dual space,
//! median boosting and multiplicative weights, ensemble sparsification,
//! sample compression with generalization-bound calculators, and end-to-end
//! learners built from those pieces.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod boosting;
pub mod compression;
pub mod dimensions;
pub mod error;
pub mod harness;
pub mod hypothesis;
pub mod io;
pub mod mw;
pub mod oracles;
pub mod pipelines;
pub mod sample;
pub mod sparsify;

pub use error::{Error, Result};
pub use hypothesis::{Aggregation, Hypothesis, WeightedEnsemble};
pub use oracles::{ConstantClass, FiniteClass, HypothesisClass, PointDistribution};
pub use sample::{Domain, InflatedExample, Instance, LabeledExample, LossMode, PerturbationMap};
