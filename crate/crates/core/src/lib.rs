//! Frequency-hopping interference classification toolkit.
//!
//! The pipeline runs in five stages, one module each:
//!
//! - [`sigsynth`]: FH desired signal, interference waveforms, JSR scaling, AWGN.
//! - [`tfa`]: Morlet scalogram, Margenau-Hill and Born-Jordan distributions.
//! - [`imgprep`]: normalization, iterative global-threshold binarization,
//!   band cropping, nearest-neighbour resizing, RGB compositing.
//! - [`dataset`]: the ten interference classes, corpus generation, manifests
//!   and matching-pair sampling.
//! - [`siamese`]: twin convolutional network with a weighted-L1 similarity head,
//!   trained with Adam on matching pairs and used for support-set classification.

pub mod config;
pub mod dataset;
pub mod error;
pub mod imgprep;
pub mod io;
pub mod pipeline;
pub mod rng;
pub mod siamese;
pub mod sigsynth;
pub mod tfa;

pub use error::{Error, Result};
