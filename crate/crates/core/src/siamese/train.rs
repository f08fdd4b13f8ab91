use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::adam::{Adam, LrSchedule};
use super::arch::Architecture;
use super::loss::{bce, bce_logit_grad};
use super::net::{sigmoid, EmbedCache};
use super::params::{InitConfig, Model};
use crate::dataset::{sample_pairs, MatchingPair};
use crate::error::{Error, Result};
use crate::rng::{derive_seed, Stream};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TrainConfig {
    pub arch: Architecture,
    pub iterations: usize,
    pub pairs_per_iteration: usize,
    pub lr: LrSchedule,
    pub init: InitConfig,
    /// Fraction of same-class pairs.
    pub balance: f64,
    pub seed: u64,
    /// Evaluate the images of a batch on all rayon workers. The gradient sum
    /// is then grouped per worker, so results match the serial path only up
    /// to floating-point summation order.
    pub parallel: bool,
    pub divergence_factor: f64,
    pub divergence_patience: usize,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig::paper()
    }
}

impl TrainConfig {
    /// 2000 iterations of 180 pairs, learning rate 6e-5 decaying 1% per 100 iterations.
    pub fn paper() -> Self {
        TrainConfig {
            arch: Architecture::paper(),
            iterations: 2000,
            pairs_per_iteration: 180,
            lr: LrSchedule { lr0: 6e-5, decay: 0.99, every: 100 },
            init: InitConfig::default(),
            balance: 0.5,
            seed: 0,
            parallel: false,
            divergence_factor: 10.0,
            divergence_patience: 50,
        }
    }

    /// 200 iterations of 60 pairs on the small network.
    pub fn desk() -> Self {
        TrainConfig {
            arch: Architecture::desk(),
            iterations: 200,
            pairs_per_iteration: 60,
            lr: LrSchedule { lr0: 2e-3, decay: 0.99, every: 100 },
            ..TrainConfig::paper()
        }
    }

    pub fn total_pairs(&self) -> usize {
        self.iterations * self.pairs_per_iteration
    }

    pub fn validate(&self) -> Result<()> {
        if self.iterations == 0 || self.pairs_per_iteration == 0 {
            return Err(Error::config("iterations and pairs per iteration must be positive"));
        }
        if !(self.lr.lr0 > 0.0 && self.lr.decay > 0.0) {
            return Err(Error::config("learning rate and decay must be positive"));
        }
        self.arch.validate()
    }
}

#[derive(Debug, Clone)]
pub struct TrainOutcome {
    pub model: Model,
    /// Mean batch loss of every iteration, before that iteration's update.
    pub loss_trace: Vec<f64>,
    pub pairs_consumed: usize,
}

fn check_images(model: &Model, images: &[Vec<f64>]) -> Result<()> {
    let want = model.arch.input_len();
    match images.iter().position(|x| x.len() != want) {
        Some(i) => Err(Error::dimension(format!("image {i} has {} values, network expects {want}", images[i].len()))),
        None => Ok(()),
    }
}

/// Mean cross-entropy of `pairs` and its gradient with respect to every
/// parameter. Each distinct image is embedded and back-propagated once.
pub fn batch_loss_grad(model: &Model, images: &[Vec<f64>], pairs: &[MatchingPair], parallel: bool) -> Result<(f64, Vec<f64>)> {
    if pairs.is_empty() {
        return Err(Error::config("empty batch"));
    }
    let mut slot_of: HashMap<usize, usize> = HashMap::new();
    let mut order = Vec::new();
    for p in pairs {
        for i in [p.a, p.b] {
            if i >= images.len() {
                return Err(Error::dimension(format!("pair references image {i} of {}", images.len())));
            }
            slot_of.entry(i).or_insert_with(|| {
                order.push(i);
                order.len() - 1
            });
        }
    }
    let caches: Vec<EmbedCache> = if parallel {
        order.par_iter().map(|&i| model.embed_cached(&images[i])).collect::<Result<_>>()?
    } else {
        order.iter().map(|&i| model.embed_cached(&images[i])).collect::<Result<_>>()?
    };

    let dim = model.arch.embed_dim;
    let mut grad = vec![0.0; model.layout.total];
    let mut dh = vec![vec![0.0; dim]; order.len()];
    let alpha = model.alpha().to_vec();
    let alpha_off = model.layout.groups[model.layout.alpha].offset;
    let beta_off = model.layout.groups[model.layout.beta].offset;
    let scale = 1.0 / pairs.len() as f64;
    let mut loss = 0.0;
    for p in pairs {
        let (sa, sb) = (slot_of[&p.a], slot_of[&p.b]);
        let (ha, hb) = (&caches[sa].embedding, &caches[sb].embedding);
        let prob = sigmoid(model.pair_logit(ha, hb));
        loss += bce(prob, p.same);
        let g = bce_logit_grad(prob, p.same) * scale;
        if g == 0.0 {
            continue;
        }
        grad[beta_off] += g;
        for j in 0..dim {
            let d = ha[j] - hb[j];
            grad[alpha_off + j] += g * d.abs();
            // Subgradient 0 at d = 0.
            let s = if d > 0.0 { 1.0 } else if d < 0.0 { -1.0 } else { 0.0 };
            dh[sa][j] += g * alpha[j] * s;
            dh[sb][j] -= g * alpha[j] * s;
        }
    }
    loss *= scale;

    if parallel {
        let workers = rayon::current_num_threads().max(1);
        let chunk = order.len().div_ceil(workers).max(1);
        let parts: Vec<Vec<f64>> = (0..order.len())
            .collect::<Vec<_>>()
            .par_chunks(chunk)
            .map(|slots| {
                let mut g = vec![0.0; model.layout.total];
                for &s in slots {
                    model.backward_embed(&caches[s], &dh[s], &mut g)?;
                }
                Ok(g)
            })
            .collect::<Result<_>>()?;
        for part in parts {
            for (a, b) in grad.iter_mut().zip(part) {
                *a += b;
            }
        }
    } else {
        for (cache, d) in caches.iter().zip(&dh) {
            model.backward_embed(cache, d, &mut grad)?;
        }
    }
    model.check_finite(&grad, "gradient")?;
    Ok((loss, grad))
}

/// Trains on `images` (network tensors) with class `labels`.
pub fn train(cfg: &TrainConfig, images: &[Vec<f64>], labels: &[u8]) -> Result<TrainOutcome> {
    train_with_progress(cfg, images, labels, |_, _| {})
}

/// As [`train`], calling `progress(iteration, loss)` after every iteration.
pub fn train_with_progress<F>(cfg: &TrainConfig, images: &[Vec<f64>], labels: &[u8], mut progress: F) -> Result<TrainOutcome>
where
    F: FnMut(usize, f64),
{
    cfg.validate()?;
    if images.len() != labels.len() {
        return Err(Error::dimension(format!("{} images but {} labels", images.len(), labels.len())));
    }
    let mut model = Model::init(cfg.arch.clone(), &cfg.init, cfg.seed)?;
    check_images(&model, images)?;
    let mut adam = Adam::new(model.layout.total);
    let mut trace = Vec::with_capacity(cfg.iterations);
    let mut over = 0;
    for it in 0..cfg.iterations {
        let pairs = sample_pairs(labels, cfg.pairs_per_iteration, derive_seed(cfg.seed, Stream::Pairs, it as u64), cfg.balance)?;
        let (loss, grad) = batch_loss_grad(&model, images, &pairs, cfg.parallel)?;
        trace.push(loss);
        progress(it, loss);
        let initial = trace[0];
        over = if loss > cfg.divergence_factor * initial { over + 1 } else { 0 };
        if over >= cfg.divergence_patience {
            return Err(Error::Divergence { iteration: it, loss, initial });
        }
        adam.step(&mut model.values, &grad, cfg.lr.at(it));
        model.check_finite(&model.values, "parameters")?;
    }
    Ok(TrainOutcome { model, loss_trace: trace, pairs_consumed: cfg.total_pairs() })
}

/// Trailing moving average over up to `window` entries.
pub fn smooth(trace: &[f64], window: usize) -> Vec<f64> {
    let w = window.max(1);
    let mut out = Vec::with_capacity(trace.len());
    let mut acc = 0.0;
    for i in 0..trace.len() {
        acc += trace[i];
        if i >= w {
            acc -= trace[i - w];
        }
        out.push(acc / (i + 1).min(w) as f64);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy_images(n: usize) -> Vec<Vec<f64>> {
        (0..n).map(|k| (0..768).map(|i| (((i * 31 + k * 17) % 13) as f64) / 12.0).collect()).collect()
    }

    #[test]
    fn identical_pair_gives_zero_alpha_gradient() {
        let m = Model::init(Architecture::toy(), &InitConfig::default(), 1).unwrap();
        let imgs = toy_images(1);
        let (_, g) = batch_loss_grad(&m, &imgs, &[MatchingPair { a: 0, b: 0, same: true }], false).unwrap();
        assert!(g[m.layout.range(m.layout.alpha)].iter().all(|&v| v == 0.0));
    }

    #[test]
    fn serial_and_parallel_agree() {
        let m = Model::init(Architecture::toy(), &InitConfig::default(), 1).unwrap();
        let imgs = toy_images(6);
        let pairs: Vec<_> = (0..5).map(|i| MatchingPair { a: i, b: i + 1, same: i % 2 == 0 }).collect();
        let (l1, g1) = batch_loss_grad(&m, &imgs, &pairs, false).unwrap();
        let (l2, g2) = batch_loss_grad(&m, &imgs, &pairs, true).unwrap();
        assert_eq!(l1, l2);
        for (a, b) in g1.iter().zip(&g2) {
            assert!((a - b).abs() <= 1e-12 * (1.0 + a.abs()));
        }
    }

    #[test]
    fn smoothing() {
        assert_eq!(smooth(&[4.0, 2.0, 0.0, 2.0], 2), vec![4.0, 3.0, 1.0, 1.0]);
    }

    #[test]
    fn training_is_reproducible() {
        let cfg = TrainConfig { arch: Architecture::toy(), iterations: 3, pairs_per_iteration: 4, seed: 9, ..TrainConfig::desk() };
        let imgs = toy_images(8);
        let labels: Vec<u8> = (0..8).map(|i| (i % 2) as u8).collect();
        let a = train(&cfg, &imgs, &labels).unwrap();
        let b = train(&cfg, &imgs, &labels).unwrap();
        assert_eq!(a.model.values, b.model.values);
        assert_eq!(a.loss_trace, b.loss_trace);
    }
}
