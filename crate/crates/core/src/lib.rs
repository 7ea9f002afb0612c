//! Figurative-language classification toolkit.
//!
//! Tokenization and lexicon resources feed a fixed 44-feature representation
//! plus unigram/bigram Tf-Idf. Three classifiers (a six-layer dense network,
//! a two-layer BiLSTM and an attentive BiLSTM) are combined by soft voting
//! with softmax-of-F1 weights.

pub mod ensemble;
pub mod error;
pub mod evaluation;
pub mod features;
pub mod models;
pub mod resources;
pub mod text;

pub use error::{CoreError, Result};
