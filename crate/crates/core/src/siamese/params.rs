use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::arch::Architecture;
use crate::error::{Error, Result};
use crate::rng::{stage_rng, Stream};

/// A named contiguous slice of the flat parameter vector.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamGroup {
    pub name: String,
    pub offset: usize,
    pub len: usize,
}

/// Offsets of every parameter group inside the flat vector, in declared
/// order: conv weights and biases per block, fc weight and bias, distance
/// weights `alpha`, distance bias `beta`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamLayout {
    pub groups: Vec<ParamGroup>,
    /// `(weight, bias)` group indices per conv block.
    pub conv: Vec<(usize, usize)>,
    pub fc: (usize, usize),
    pub alpha: usize,
    pub beta: usize,
    pub total: usize,
}

impl ParamLayout {
    pub fn new(arch: &Architecture) -> Result<Self> {
        let dims = arch.conv_dims()?;
        let mut groups = Vec::new();
        let mut total = 0;
        let mut push = |name: String, len: usize| {
            groups.push(ParamGroup { name, offset: total, len });
            total += len;
            groups.len() - 1
        };
        let conv = dims
            .iter()
            .enumerate()
            .map(|(i, d)| (push(format!("conv{}.weight", i + 1), d.out_c * d.patch_len()), push(format!("conv{}.bias", i + 1), d.out_c)))
            .collect();
        let flat = arch.flat_len()?;
        let fc = (push("fc.weight".into(), arch.embed_dim * flat), push("fc.bias".into(), arch.embed_dim));
        let alpha = push("alpha".into(), arch.embed_dim);
        let beta = push("beta".into(), 1);
        Ok(ParamLayout { groups, conv, fc, alpha, beta, total })
    }

    pub fn range(&self, group: usize) -> std::ops::Range<usize> {
        let g = &self.groups[group];
        g.offset..g.offset + g.len
    }

    /// Name of the group holding flat index `i`.
    pub fn group_of(&self, i: usize) -> &str {
        self.groups.iter().find(|g| (g.offset..g.offset + g.len).contains(&i)).map_or("?", |g| &g.name)
    }
}

/// Initial distributions. Weights and distance weights are zero-mean normals,
/// biases are centred on `bias_mean`, the distance bias starts at zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InitConfig {
    pub weight_std: f64,
    pub bias_mean: f64,
    pub bias_std: f64,
    pub alpha_std: f64,
}

impl Default for InitConfig {
    /// Variance 0.01 for weights, distance weights and biases (bias mean 0.5).
    fn default() -> Self {
        InitConfig { weight_std: 0.1, bias_mean: 0.5, bias_std: 0.1, alpha_std: 0.1 }
    }
}

/// Network parameters: one copy, shared by both twins.
#[derive(Debug, Clone, PartialEq)]
pub struct Model {
    pub arch: Architecture,
    pub layout: ParamLayout,
    pub values: Vec<f64>,
}

impl Model {
    pub fn zeros(arch: Architecture) -> Result<Self> {
        arch.validate()?;
        let layout = ParamLayout::new(&arch)?;
        let values = vec![0.0; layout.total];
        Ok(Model { arch, layout, values })
    }

    pub fn init(arch: Architecture, init: &InitConfig, seed: u64) -> Result<Self> {
        let mut m = Model::zeros(arch)?;
        let normal = |mean: f64, std: f64| Normal::new(mean, std).map_err(|e| Error::config(format!("init distribution: {e}")));
        let w = normal(0.0, init.weight_std)?;
        let b = normal(init.bias_mean, init.bias_std)?;
        let a = normal(0.0, init.alpha_std)?;
        let mut rng = stage_rng(seed, Stream::Init, 0);
        let l = &m.layout;
        let weight_groups: Vec<usize> = l.conv.iter().map(|c| c.0).chain([l.fc.0]).collect();
        let bias_groups: Vec<usize> = l.conv.iter().map(|c| c.1).chain([l.fc.1]).collect();
        for gi in 0..l.groups.len() {
            let dist = if weight_groups.contains(&gi) {
                &w
            } else if bias_groups.contains(&gi) {
                &b
            } else if gi == l.alpha {
                &a
            } else {
                continue;
            };
            for v in &mut m.values[l.range(gi)] {
                *v = dist.sample(&mut rng);
            }
        }
        Ok(m)
    }

    pub fn group(&self, g: usize) -> &[f64] {
        &self.values[self.layout.range(g)]
    }

    pub fn group_mut(&mut self, g: usize) -> &mut [f64] {
        let r = self.layout.range(g);
        &mut self.values[r]
    }

    pub fn alpha(&self) -> &[f64] {
        self.group(self.layout.alpha)
    }

    pub fn beta(&self) -> f64 {
        self.values[self.layout.groups[self.layout.beta].offset]
    }

    /// First non-finite entry of `buf` (laid out like the parameters), as an error.
    pub fn check_finite(&self, buf: &[f64], what: &str) -> Result<()> {
        match buf.iter().position(|v| !v.is_finite()) {
            None => Ok(()),
            Some(i) => Err(Error::Numerical {
                path: format!("{what}/{}", self.layout.group_of(i)),
                message: format!("entry {i} is {}", buf[i]),
            }),
        }
    }
}
