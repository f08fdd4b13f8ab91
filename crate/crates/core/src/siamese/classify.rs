use rand::seq::index::sample as sample_indices;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::params::Model;
use crate::dataset::N_CLASSES;
use crate::error::{Error, Result};
use crate::rng::{stage_rng, Stream};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EvalConfig {
    /// Support exemplars per class.
    pub support_k: usize,
    /// Independent support draws averaged into the reported accuracy.
    pub draws: usize,
    pub seed: u64,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig { support_k: 5, draws: 3, seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Classification {
    pub class_id: u8,
    /// Mean pair score against each class's exemplars.
    pub scores: Vec<f64>,
}

/// Scores an embedded query against embedded exemplars `(class, h)`.
/// The winner is the class with the largest mean score, lowest id on ties.
pub fn classify_embedded(model: &Model, query: &[f64], support: &[(u8, &[f64])]) -> Result<Classification> {
    let mut sum = vec![0.0; N_CLASSES];
    let mut count = vec![0usize; N_CLASSES];
    for &(c, h) in support {
        let c = c as usize;
        if c >= N_CLASSES {
            return Err(Error::config(format!("support class {c} out of range")));
        }
        sum[c] += model.pair_score(query, h);
        count[c] += 1;
    }
    if let Some(missing) = count.iter().position(|&n| n == 0) {
        return Err(Error::config(format!("support set has no exemplar of class {missing}")));
    }
    let scores: Vec<f64> = sum.iter().zip(&count).map(|(s, &n)| s / n as f64).collect();
    let mut best = 0;
    for (c, &s) in scores.iter().enumerate() {
        if s > scores[best] {
            best = c;
        }
    }
    Ok(Classification { class_id: best as u8, scores })
}

/// Classifies a query image against support images `(class, tensor)`.
pub fn classify(model: &Model, query: &[f64], support: &[(u8, Vec<f64>)]) -> Result<Classification> {
    let hq = model.embed(query)?;
    let hs: Vec<(u8, Vec<f64>)> = support.iter().map(|(c, x)| Ok((*c, model.embed(x)?))).collect::<Result<_>>()?;
    let refs: Vec<(u8, &[f64])> = hs.iter().map(|(c, h)| (*c, h.as_slice())).collect();
    classify_embedded(model, &hq, &refs)
}

/// Picks `k` exemplars per class (all of them when fewer exist) from `labels`.
pub fn draw_support(labels: &[u8], k: usize, seed: u64, draw: u64) -> Result<Vec<usize>> {
    let mut rng = stage_rng(seed, Stream::Support, draw);
    let mut out = Vec::with_capacity(k * N_CLASSES);
    for c in 0..N_CLASSES as u8 {
        let members: Vec<usize> = labels.iter().enumerate().filter(|(_, &l)| l == c).map(|(i, _)| i).collect();
        if members.is_empty() {
            return Err(Error::Sampling(format!("no training sample of class {c} for the support set")));
        }
        let mut pick = sample_indices(&mut rng, members.len(), k.min(members.len())).into_vec();
        pick.sort_unstable();
        out.extend(pick.into_iter().map(|i| members[i]));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JsrAccuracy {
    pub jsr_db: f64,
    pub accuracy: f64,
    pub queries: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    /// Accuracy pooled over all queries, averaged over support draws.
    pub accuracy: f64,
    /// Per-JSR accuracies averaged with equal weight per JSR value.
    pub jsr_averaged_accuracy: f64,
    pub per_draw: Vec<f64>,
    pub per_jsr: Vec<JsrAccuracy>,
    /// `confusion[true][predicted]`, summed over draws.
    pub confusion: Vec<Vec<usize>>,
    pub queries: usize,
    pub draws: usize,
}

/// Support-set accuracy of `queries` (tensors with labels and JSRs), with
/// exemplars drawn from the training images.
pub fn evaluate(
    model: &Model,
    train_images: &[Vec<f64>],
    train_labels: &[u8],
    queries: &[Vec<f64>],
    query_labels: &[u8],
    query_jsr_db: &[f64],
    cfg: &EvalConfig,
) -> Result<EvalReport> {
    if queries.is_empty() {
        return Err(Error::Missing("no query samples to evaluate".into()));
    }
    if queries.len() != query_labels.len() || queries.len() != query_jsr_db.len() {
        return Err(Error::dimension("query images, labels and JSRs differ in length"));
    }
    if cfg.draws == 0 || cfg.support_k == 0 {
        return Err(Error::config("need at least one support draw of at least one exemplar"));
    }
    let hq: Vec<Vec<f64>> = queries.par_iter().map(|x| model.embed(x)).collect::<Result<_>>()?;
    let mut jsrs: Vec<f64> = query_jsr_db.to_vec();
    jsrs.sort_by(f64::total_cmp);
    jsrs.dedup();

    let mut confusion = vec![vec![0usize; N_CLASSES]; N_CLASSES];
    let mut per_draw = Vec::with_capacity(cfg.draws);
    let mut jsr_hits = vec![0usize; jsrs.len()];
    let mut jsr_total = vec![0usize; jsrs.len()];
    for draw in 0..cfg.draws {
        let support = draw_support(train_labels, cfg.support_k, cfg.seed, draw as u64)?;
        let hs: Vec<(u8, Vec<f64>)> = support
            .par_iter()
            .map(|&i| Ok((train_labels[i], model.embed(&train_images[i])?)))
            .collect::<Result<_>>()?;
        let refs: Vec<(u8, &[f64])> = hs.iter().map(|(c, h)| (*c, h.as_slice())).collect();
        let preds: Vec<u8> = hq.iter().map(|h| Ok(classify_embedded(model, h, &refs)?.class_id)).collect::<Result<_>>()?;
        let mut hits = 0;
        for ((&p, &t), &j) in preds.iter().zip(query_labels).zip(query_jsr_db) {
            confusion[t as usize][p as usize] += 1;
            let k = jsrs.iter().position(|&x| x == j).unwrap();
            jsr_total[k] += 1;
            if p == t {
                hits += 1;
                jsr_hits[k] += 1;
            }
        }
        per_draw.push(hits as f64 / queries.len() as f64);
    }
    let per_jsr: Vec<JsrAccuracy> = jsrs
        .iter()
        .zip(jsr_hits.iter().zip(&jsr_total))
        .map(|(&j, (&h, &n))| JsrAccuracy { jsr_db: j, accuracy: h as f64 / n as f64, queries: n / cfg.draws })
        .collect();
    Ok(EvalReport {
        accuracy: per_draw.iter().sum::<f64>() / per_draw.len() as f64,
        jsr_averaged_accuracy: per_jsr.iter().map(|a| a.accuracy).sum::<f64>() / per_jsr.len() as f64,
        per_draw,
        per_jsr,
        confusion,
        queries: queries.len(),
        draws: cfg.draws,
    })
}
