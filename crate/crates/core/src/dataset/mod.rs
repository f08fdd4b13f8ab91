//! Interference classes, corpus generation, manifests, splits and matching pairs.

mod classes;
mod corpus;
mod manifest;
mod pairs;
mod sampler;
mod split;

pub use classes::{class_by_id, class_of, enumerate_classes, ClassLabel, N_CLASSES};
pub use corpus::{
    build_corpus, generate_corpus, load_manifest, load_samples, plan_corpus, render_records, CorpusConfig, CorpusHeader,
    Sample, HEADER_FILE, MANIFEST_FILE, SAMPLES_DIR,
};
pub use manifest::{count_split, from_jsonl, to_jsonl, ManifestRecord, Split};
pub use pairs::{sample_pairs, MatchingPair};
pub use sampler::{SamplerConfig, TABLE_LITERAL_SWEEP_PERIOD_S};
pub use split::stratified_split;
