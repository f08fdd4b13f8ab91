//! Run configuration: one master seed plus the settings of every stage.
//!
//! The master seed feeds every randomized stage unchanged; each stage then
//! derives its own stream (see [`crate::rng`]), so the corpus, split, weight
//! init, pair draws and support draws never share random numbers.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dataset::CorpusConfig;
use crate::error::{Error, Result};
use crate::io::read_json;
use crate::siamese::{EvalConfig, TrainConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Preset {
    /// 7000 samples at 105 px, 2000 iterations of 180 pairs.
    Paper,
    /// 400 samples at 48 px, 200 iterations of 60 pairs on a small network.
    Desk,
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper" => Ok(Preset::Paper),
            "desk" => Ok(Preset::Desk),
            other => Err(Error::config(format!("unknown preset {other:?} (expected paper or desk)"))),
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Preset::Paper => "paper",
            Preset::Desk => "desk",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    pub seed: u64,
    pub out_dir: PathBuf,
    /// Worker threads for corpus rendering and evaluation; `None` uses all cores.
    pub threads: Option<usize>,
    pub corpus: CorpusConfig,
    pub train: TrainConfig,
    pub eval: EvalConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig::preset(Preset::Paper)
    }
}

impl RunConfig {
    pub fn preset(p: Preset) -> Self {
        let (corpus, train) = match p {
            Preset::Paper => (CorpusConfig::paper(), TrainConfig::paper()),
            Preset::Desk => (CorpusConfig::desk(), TrainConfig::desk()),
        };
        RunConfig { seed: 0, out_dir: PathBuf::from("out"), threads: None, corpus, train, eval: EvalConfig::default() }
    }

    /// Reads a JSON config; missing fields take the paper preset's values.
    pub fn load(path: &Path) -> Result<Self> {
        let cfg: RunConfig = read_json(path)?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Sets the master seed on every stage that carries its own copy.
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self.train.seed = seed;
        self.eval.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.corpus.validate()?;
        self.train.validate()?;
        if self.train.arch.input_side != self.corpus.pipeline.side {
            return Err(Error::config(format!(
                "network expects {} px images but the corpus renders {} px",
                self.train.arch.input_side, self.corpus.pipeline.side
            )));
        }
        if self.threads == Some(0) {
            return Err(Error::config("thread count must be positive"));
        }
        Ok(())
    }
}

/// Sizes the global worker pool used by corpus rendering, evaluation and
/// parallel training. Only the first call in a process takes effect.
pub fn configure_threads(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::config("thread count must be positive"));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Error::config(format!("thread pool: {e}")))
}
