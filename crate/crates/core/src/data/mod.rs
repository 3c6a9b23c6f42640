//! CSV ingestion, schemas, preprocessing and splits.

mod dataset;
mod raw;
mod schema;
mod synth;

pub use dataset::{
    draw_split, encode_categoricals, read_numeric_csv, split_train_test, stratified_sample,
    Dataset, FeatureStat, PreprocessStats, SplitIndices,
};
pub use raw::{FeatureMissingness, MissingnessReport, RawColumn, RawTable};
pub use schema::{FeatureKind, FeatureSchema, FeatureSpec};
pub use synth::synth_dataset;
