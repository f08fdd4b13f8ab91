use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::classes::N_CLASSES;
use super::manifest::{from_jsonl, to_jsonl, ManifestRecord, Split};
use super::sampler::SamplerConfig;
use super::split::stratified_split;
use crate::error::{Error, Result};
use crate::imgprep::{BinarizeStats, CompositeImage};
use crate::io::{self, CompositeSidecar, FORMAT_VERSION};
use crate::pipeline::{render_scenario, PipelineConfig};
use crate::rng::{derive_seed, Stream};

pub const MANIFEST_FILE: &str = "manifest.jsonl";
pub const HEADER_FILE: &str = "corpus.json";
pub const SAMPLES_DIR: &str = "samples";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CorpusConfig {
    pub jsr_values_db: Vec<f64>,
    pub per_cell: usize,
    pub train_frac: f64,
    pub sampler: SamplerConfig,
    pub pipeline: PipelineConfig,
}

impl Default for CorpusConfig {
    fn default() -> Self {
        CorpusConfig::paper()
    }
}

impl CorpusConfig {
    /// Seven JSR values from -10 to 20 dB, 100 samples per (JSR, class).
    pub fn paper() -> Self {
        CorpusConfig {
            jsr_values_db: (0..7).map(|i| -10.0 + 5.0 * i as f64).collect(),
            per_cell: 100,
            train_frac: 0.8,
            sampler: SamplerConfig::default(),
            pipeline: PipelineConfig::default(),
        }
    }

    /// JSR 0 and 10 dB, 20 samples per cell, 48-pixel images.
    pub fn desk() -> Self {
        CorpusConfig {
            jsr_values_db: vec![0.0, 10.0],
            per_cell: 20,
            pipeline: PipelineConfig { side: 48, ..PipelineConfig::default() },
            ..CorpusConfig::paper()
        }
    }

    pub fn n_samples(&self) -> usize {
        self.jsr_values_db.len() * N_CLASSES * self.per_cell
    }

    pub fn validate(&self) -> Result<()> {
        if self.jsr_values_db.is_empty() || self.per_cell == 0 {
            return Err(Error::config("corpus needs at least one JSR value and one sample per cell"));
        }
        if !(0.0..=1.0).contains(&self.train_frac) {
            return Err(Error::config(format!("train fraction {} outside [0, 1]", self.train_frac)));
        }
        self.sampler.validate()
    }
}

/// Contents of `corpus.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusHeader {
    pub format_version: u32,
    pub seed: u64,
    pub n_records: usize,
    pub config: CorpusConfig,
}

/// Enumerates every record (scenario, split, paths) without rendering.
/// Order: JSR value, then class, then sample within the cell.
pub fn plan_corpus(cfg: &CorpusConfig, seed: u64) -> Result<Vec<ManifestRecord>> {
    cfg.validate()?;
    let mut records = Vec::with_capacity(cfg.n_samples());
    for &jsr in &cfg.jsr_values_db {
        for class_id in 0..N_CLASSES as u8 {
            for _ in 0..cfg.per_cell {
                let index = records.len();
                let scenario_seed = derive_seed(seed, Stream::Scenario, index as u64);
                let spec = cfg.sampler.sample_scenario(class_id, jsr, scenario_seed)?;
                let id = format!("s{index:05}");
                let image_path = format!("{SAMPLES_DIR}/{id}.ppm");
                records.push(ManifestRecord {
                    sidecar_path: format!("{image_path}.json"),
                    image_path,
                    id,
                    class_id,
                    jsr_db: jsr,
                    scenario_spec: spec,
                    split: Split::Test,
                });
            }
        }
    }
    let cells: Vec<(u8, f64)> = records.iter().map(|r| (r.class_id, r.jsr_db)).collect();
    for (r, s) in records.iter_mut().zip(stratified_split(&cells, cfg.train_frac, seed)) {
        r.split = s;
    }
    Ok(records)
}

/// A rendered corpus entry.
#[derive(Debug, Clone)]
pub struct Sample {
    pub record: ManifestRecord,
    pub image: CompositeImage,
    pub stats: [BinarizeStats; 3],
}

/// Renders records in parallel on the current rayon pool; output order
/// matches input order.
pub fn render_records(records: &[ManifestRecord], pipeline: &PipelineConfig) -> Result<Vec<Sample>> {
    records
        .par_iter()
        .map(|r| {
            let (_, rendered) = render_scenario(&r.scenario_spec, pipeline)?;
            Ok(Sample { record: r.clone(), image: rendered.composite, stats: rendered.stats })
        })
        .collect()
}

/// Plans and renders a corpus in memory.
pub fn build_corpus(cfg: &CorpusConfig, seed: u64) -> Result<Vec<Sample>> {
    render_records(&plan_corpus(cfg, seed)?, &cfg.pipeline)
}

fn composite_sidecar(sample: &Sample, pipeline: &PipelineConfig) -> Result<CompositeSidecar> {
    let id = &sample.record.id;
    Ok(CompositeSidecar {
        source_spectrogram_ids: [format!("{id}/wavelet"), format!("{id}/mhd"), format!("{id}/bjd")],
        pipeline_params: serde_json::to_value(pipeline)?,
        freq_axis_hz: sample.image.channels()[0].freq_axis_hz().to_vec(),
        format_version: FORMAT_VERSION,
    })
}

/// Renders the corpus and writes it to `out`:
/// `corpus.json`, `manifest.jsonl` and `samples/<id>.ppm` with sidecars.
/// The directory appears only once every sample has been written.
pub fn generate_corpus(cfg: &CorpusConfig, seed: u64, out: &Path) -> Result<Vec<ManifestRecord>> {
    let samples = build_corpus(cfg, seed)?;
    let records: Vec<ManifestRecord> = samples.iter().map(|s| s.record.clone()).collect();
    io::atomic_dir(out, |dir| {
        for s in &samples {
            io::write_composite(&dir.join(&s.record.image_path), &s.image, &composite_sidecar(s, &cfg.pipeline)?)?;
        }
        let header = CorpusHeader { format_version: FORMAT_VERSION, seed, n_records: records.len(), config: cfg.clone() };
        io::write_json(&dir.join(HEADER_FILE), &header)?;
        io::atomic_write(&dir.join(MANIFEST_FILE), to_jsonl(&records)?.as_bytes())
    })?;
    Ok(records)
}

pub fn load_manifest(dir: &Path) -> Result<(CorpusHeader, Vec<ManifestRecord>)> {
    let header: CorpusHeader = io::read_json(&dir.join(HEADER_FILE))?;
    if header.format_version != FORMAT_VERSION {
        return Err(Error::Format(format!("unsupported corpus format version {}", header.format_version)));
    }
    let text = String::from_utf8(io::read_file(&dir.join(MANIFEST_FILE))?)
        .map_err(|_| Error::Format("manifest is not UTF-8".into()))?;
    let records = from_jsonl(&text)?;
    if records.len() != header.n_records {
        return Err(Error::Format(format!("manifest holds {} records, header says {}", records.len(), header.n_records)));
    }
    Ok((header, records))
}

/// Reads the composite images of `records` from a corpus directory.
pub fn load_samples(dir: &Path, records: &[ManifestRecord]) -> Result<Vec<Sample>> {
    records
        .par_iter()
        .map(|r| {
            let (image, _) = io::read_composite(&dir.join(&r.image_path))?;
            let stats = [BinarizeStats { threshold: f64::NAN, iterations: 0, converged: true }; 3];
            Ok(Sample { record: r.clone(), image, stats })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn paper_plan_has_seven_thousand_uniform_records() {
        let recs = plan_corpus(&CorpusConfig::paper(), 1).unwrap();
        assert_eq!(recs.len(), 7000);
        for jsr in CorpusConfig::paper().jsr_values_db {
            for c in 0..10u8 {
                assert_eq!(recs.iter().filter(|r| r.jsr_db == jsr && r.class_id == c).count(), 100);
            }
        }
    }

    #[test]
    fn desk_plan_size_and_determinism() {
        let a = plan_corpus(&CorpusConfig::desk(), 4).unwrap();
        assert_eq!(a.len(), 400);
        assert_eq!(to_jsonl(&a).unwrap(), to_jsonl(&plan_corpus(&CorpusConfig::desk(), 4).unwrap()).unwrap());
        assert_eq!(a.iter().filter(|r| r.split == Split::Train).count(), 320);
    }
}
