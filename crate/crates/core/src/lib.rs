//! Readability assessment for leveled corpora in related low-resource
//! languages: corpus ingestion and statistics, syllable-pattern text
//! analysis, cross-lingual character n-gram overlap, a from-scratch random
//! forest with impurity-based feature importances, and a hierarchy-based
//! cross-lingual experiment grid with stratified evaluation and paired
//! significance testing.

pub mod corpus;
pub mod error;
pub mod experiments;
pub mod features;
pub mod forest;
pub mod ngram;
pub mod rng;
pub mod textproc;

pub use error::{Error, Result};
