//! Local feature attributions for tabular classifiers, with pluggable
//! baseline methods and an ablation benchmark that measures how much a
//! baseline changes the discriminative power of the attributions.
//!
//! The crate is organised as a pipeline:
//!
//! - [`numerics`]: dense matrices, weighted least squares, seeded splittable
//!   random streams;
//! - [`data`]: CSV ingestion, schemas, preprocessing, splits, synthetic data;
//! - [`model`]: a one-hidden-layer ReLU network with analytic input
//!   gradients;
//! - [`baselines`]: six reference-input generators plus a machine-checkable
//!   static/dynamic x deterministic/stochastic taxonomy;
//! - [`attribution`]: Integrated Gradients, DeepLIFT (Rescale), KernelSHAP
//!   and DeepSHAP;
//! - [`ablation`]: top-K masking curves, F1 scoring, random-ranking controls
//!   and cross-dataset aggregation.
//!
//! Everything is deterministic given a seed: random streams are addressed by
//! labels (see [`numerics::Rng::split`]), so adding a configuration cell to
//! an experiment never perturbs the results of the others.

pub mod ablation;
pub mod attribution;
pub mod baselines;
pub mod data;
pub mod error;
pub mod model;
pub mod numerics;

pub use error::{Error, Result};
